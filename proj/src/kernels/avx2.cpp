#include "conetime/kernels/return_time_kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace conetime::kernels {

#if defined(__AVX2__)

void return_time_avx2(const ReturnTimeBatch& in, double* out) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= in.n; i += 4) {
    const __m256d s = _mm256_loadu_pd(in.half_sin + i);
    const __m256d c = _mm256_loadu_pd(in.half_cos + i);
    const __m256d sh = _mm256_loadu_pd(in.sinh_v + i);
    const __m256d ch = _mm256_loadu_pd(in.cosh_v + i);
    const __m256d t = _mm256_loadu_pd(in.t + i);
    const __m256d d = _mm256_loadu_pd(in.d + i);
    const __m256d ms = _mm256_loadu_pd(in.m_sigma + i);
    const __m256d two_s = _mm256_mul_pd(two, s);
    const __m256d tsh = _mm256_mul_pd(t, sh);
    const __m256d big_t = _mm256_mul_pd(two_s, _mm256_sub_pd(_mm256_mul_pd(d, c), _mm256_mul_pd(tsh, s)));
    const __m256d big_s = _mm256_mul_pd(two_s, _mm256_add_pd(_mm256_mul_pd(tsh, c), _mm256_mul_pd(d, s)));
    const __m256d u = _mm256_add_pd(_mm256_mul_pd(ms, sh), _mm256_mul_pd(ch, big_t));
    const __m256d root = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(u, u), _mm256_mul_pd(big_s, big_s)));
    const __m256d r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ms, ch), _mm256_mul_pd(sh, big_t)), root);
    _mm256_storeu_pd(out + i, r);
  }
  if (i < in.n) {
    ReturnTimeBatch tail = in;
    tail.half_sin += i;
    tail.half_cos += i;
    tail.sinh_v += i;
    tail.cosh_v += i;
    tail.t += i;
    tail.d += i;
    tail.m_sigma += i;
    tail.n = in.n - i;
    return_time_scalar(tail, out + i);
  }
}

void null_residual_avx2(const NullResidualBatch& in, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= in.n; i += 4) {
    const __m256d rc = _mm256_loadu_pd(in.rot_cos + i);
    const __m256d rs = _mm256_loadu_pd(in.rot_sin + i);
    const __m256d sh = _mm256_loadu_pd(in.sinh_v + i);
    const __m256d ch = _mm256_loadu_pd(in.cosh_v + i);
    const __m256d t = _mm256_loadu_pd(in.t + i);
    const __m256d d = _mm256_loadu_pd(in.d + i);
    const __m256d ms = _mm256_loadu_pd(in.m_sigma + i);
    const __m256d delta = _mm256_loadu_pd(in.delta + i);
    const __m256d te = _mm256_sub_pd(t, delta);
    const __m256d x = _mm256_mul_pd(te, sh);
    const __m256d ex = _mm256_sub_pd(_mm256_mul_pd(rc, x), _mm256_mul_pd(rs, d));
    const __m256d ey = _mm256_add_pd(_mm256_mul_pd(rs, x), _mm256_mul_pd(rc, d));
    const __m256d et = _mm256_add_pd(_mm256_mul_pd(te, ch), ms);
    const __m256d dx = _mm256_sub_pd(_mm256_mul_pd(t, sh), ex);
    const __m256d dy = _mm256_sub_pd(d, ey);
    const __m256d dt = _mm256_sub_pd(_mm256_mul_pd(t, ch), et);
    const __m256d dx2 = _mm256_mul_pd(dx, dx);
    const __m256d dy2 = _mm256_mul_pd(dy, dy);
    const __m256d dt2 = _mm256_mul_pd(dt, dt);
    const __m256d scale = _mm256_add_pd(_mm256_add_pd(dx2, dy2), dt2);
    const __m256d num = _mm256_sub_pd(_mm256_add_pd(dx2, dy2), dt2);
    const __m256d is_zero = _mm256_cmp_pd(scale, zero, _CMP_EQ_OQ);
    const __m256d q = _mm256_div_pd(num, scale);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(q, zero, is_zero));
  }
  if (i < in.n) {
    NullResidualBatch tail = in;
    tail.rot_cos += i;
    tail.rot_sin += i;
    tail.sinh_v += i;
    tail.cosh_v += i;
    tail.t += i;
    tail.d += i;
    tail.m_sigma += i;
    tail.delta += i;
    tail.n = in.n - i;
    null_residual_scalar(tail, out + i);
  }
}

#else

void return_time_avx2(const ReturnTimeBatch& in, double* out) { return_time_scalar(in, out); }
void null_residual_avx2(const NullResidualBatch& in, double* out) { null_residual_scalar(in, out); }

#endif

}  // namespace conetime::kernels
