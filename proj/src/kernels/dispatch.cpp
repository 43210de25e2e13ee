#include <cmath>

#include "conetime/errors.hpp"
#include "conetime/kernels/return_time_kernels.hpp"

namespace conetime::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(CONETIME_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__ARM_NEON) && defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

void return_time(const ReturnTimeBatch& in, double* out, Isa isa) {
  if (!isa_available(isa)) throw Error(ErrorCode::InvalidArgument, "instruction set not available");
  switch (isa) {
    case Isa::Avx2: return return_time_avx2(in, out);
    case Isa::Neon: return return_time_neon(in, out);
    case Isa::Scalar: return return_time_scalar(in, out);
  }
}

void null_residual(const NullResidualBatch& in, double* out, Isa isa) {
  if (!isa_available(isa)) throw Error(ErrorCode::InvalidArgument, "instruction set not available");
  switch (isa) {
    case Isa::Avx2: return null_residual_avx2(in, out);
    case Isa::Neon: return null_residual_neon(in, out);
    case Isa::Scalar: return null_residual_scalar(in, out);
  }
}

ReturnTimeSweep::ReturnTimeSweep(const std::vector<ReturnTimeQuery>& queries) {
  for (const ReturnTimeQuery& q : queries) {
    const double half = 0.5 * q.m * q.theta0;
    const double a = q.m * q.theta0;
    half_sin_.push_back(std::sin(half));
    half_cos_.push_back(std::cos(half));
    rot_cos_.push_back(std::cos(a));
    rot_sin_.push_back(std::sin(a));
    sinh_.push_back(std::sinh(q.rapidity));
    cosh_.push_back(std::cosh(q.rapidity));
    t_.push_back(q.t);
    d_.push_back(q.d);
    m_sigma_.push_back(q.m * q.sigma);
  }
}

std::vector<double> ReturnTimeSweep::return_times(Isa isa) const {
  std::vector<double> out(size());
  const ReturnTimeBatch in{half_sin_.data(), half_cos_.data(), sinh_.data(), cosh_.data(),
                           t_.data(),        d_.data(),        m_sigma_.data(), size()};
  return_time(in, out.data(), isa);
  return out;
}

std::vector<double> ReturnTimeSweep::null_residuals(const std::vector<double>& delta, Isa isa) const {
  if (delta.size() != size()) throw Error(ErrorCode::InvalidArgument, "one return time per query required");
  std::vector<double> out(size());
  const NullResidualBatch in{rot_cos_.data(), rot_sin_.data(), sinh_.data(), cosh_.data(), t_.data(),
                             d_.data(),       m_sigma_.data(), delta.data(), size()};
  null_residual(in, out.data(), isa);
  return out;
}

}  // namespace conetime::kernels
