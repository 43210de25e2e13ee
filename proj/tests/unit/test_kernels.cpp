#include <cstring>
#include <random>

#include <doctest.h>

#include "conetime/kernels/return_time_kernels.hpp"
#include "conetime/one_particle.hpp"

using namespace conetime;
using namespace conetime::kernels;

namespace {

std::vector<ReturnTimeQuery> random_queries(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(0.05, 3.1), sg(-2.0, 2.0), d(0.1, 10.0), v(-2.0, 2.0), t(-5.0, 5.0);
  std::vector<ReturnTimeQuery> q;
  while (q.size() < n) {
    const ParticleModel p(th(rng), sg(rng));
    const auto ms = admissible_windings(p);
    if (ms.empty()) continue;
    q.push_back({p.theta0(), p.sigma(), d(rng), v(rng), t(rng), ms[rng() % ms.size()]});
  }
  return q;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernel matches the library return time bit for bit") {
  const auto q = random_queries(1003, 1);
  const ReturnTimeSweep sweep(q);
  const auto out = sweep.return_times(Isa::Scalar);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double ref = return_time(ParticleModel(q[i].theta0, q[i].sigma), ObserverLine{q[i].d, q[i].rapidity},
                                   q[i].t, q[i].m);
    CHECK(out[i] == ref);
  }
  const auto res = sweep.null_residuals(out, Isa::Scalar);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const ParticleModel p(q[i].theta0, q[i].sigma);
    const ObserverLine obs{q[i].d, q[i].rapidity};
    CHECK(res[i] == relative_null_interval(return_events(p, obs, q[i].t, q[i].m, out[i])));
  }
}

TEST_CASE("vector kernels agree with the scalar kernel") {
  for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    const ReturnTimeSweep sweep(random_queries(n, 2 + n));
    const auto ref = sweep.return_times(Isa::Scalar);
    const auto ref_res = sweep.null_residuals(ref, Isa::Scalar);
    for (const Isa isa : {Isa::Avx2, Isa::Neon}) {
      if (!isa_available(isa)) continue;
      CAPTURE(to_string(isa));
      CAPTURE(n);
      CHECK(bit_equal(sweep.return_times(isa), ref));
      CHECK(bit_equal(sweep.null_residuals(ref, isa), ref_res));
    }
  }
}

TEST_CASE("dispatch") {
  CHECK(isa_available(Isa::Scalar));
  CHECK(isa_available(detected_isa()));
  const ReturnTimeSweep sweep(random_queries(8, 9));
  CHECK(bit_equal(sweep.return_times(detected_isa()), sweep.return_times(Isa::Scalar)));
  CHECK_THROWS(sweep.null_residuals(std::vector<double>(3), Isa::Scalar));
}
