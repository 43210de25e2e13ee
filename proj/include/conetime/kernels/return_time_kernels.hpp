#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace conetime::kernels {

/// Structure-of-arrays input for batched return times. Trigonometric and
/// hyperbolic terms are precomputed, so every variant performs the same
/// correctly rounded operations in the same order and agrees bit for bit.
struct ReturnTimeBatch {
  const double* half_sin = nullptr;  // sin(m theta0 / 2)
  const double* half_cos = nullptr;  // cos(m theta0 / 2)
  const double* sinh_v = nullptr;
  const double* cosh_v = nullptr;
  const double* t = nullptr;
  const double* d = nullptr;
  const double* m_sigma = nullptr;
  std::size_t n = 0;
};

/// Inputs for the relative null interval of emission/reception pairs.
struct NullResidualBatch {
  const double* rot_cos = nullptr;  // cos(m theta0)
  const double* rot_sin = nullptr;  // sin(m theta0)
  const double* sinh_v = nullptr;
  const double* cosh_v = nullptr;
  const double* t = nullptr;
  const double* d = nullptr;
  const double* m_sigma = nullptr;
  const double* delta = nullptr;
  std::size_t n = 0;
};

enum class Isa { Scalar, Avx2, Neon };
std::string_view to_string(Isa isa);

/// Best variant supported by the running CPU.
Isa detected_isa();
bool isa_available(Isa isa);

void return_time_scalar(const ReturnTimeBatch& in, double* out);
void null_residual_scalar(const NullResidualBatch& in, double* out);
void return_time_avx2(const ReturnTimeBatch& in, double* out);
void null_residual_avx2(const NullResidualBatch& in, double* out);
void return_time_neon(const ReturnTimeBatch& in, double* out);
void null_residual_neon(const NullResidualBatch& in, double* out);

void return_time(const ReturnTimeBatch& in, double* out, Isa isa);
void null_residual(const NullResidualBatch& in, double* out, Isa isa);

/// One sweep entry.
struct ReturnTimeQuery {
  double theta0 = 0.0;
  double sigma = 0.0;
  double d = 0.0;
  double rapidity = 0.0;
  double t = 0.0;
  int m = 0;
};

/// Owns the SoA buffers for a sweep; windings must be admissible.
class ReturnTimeSweep {
 public:
  explicit ReturnTimeSweep(const std::vector<ReturnTimeQuery>& queries);
  std::size_t size() const { return t_.size(); }
  std::vector<double> return_times(Isa isa) const;
  std::vector<double> null_residuals(const std::vector<double>& delta, Isa isa) const;

 private:
  std::vector<double> half_sin_, half_cos_, rot_cos_, rot_sin_, sinh_, cosh_, t_, d_, m_sigma_;
};

}  // namespace conetime::kernels
