#include "conetime/kernels/return_time_kernels.hpp"

#if defined(__ARM_NEON) && defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace conetime::kernels {

#if defined(__ARM_NEON) && defined(__aarch64__)

void return_time_neon(const ReturnTimeBatch& in, double* out) {
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= in.n; i += 2) {
    const float64x2_t s = vld1q_f64(in.half_sin + i);
    const float64x2_t c = vld1q_f64(in.half_cos + i);
    const float64x2_t sh = vld1q_f64(in.sinh_v + i);
    const float64x2_t ch = vld1q_f64(in.cosh_v + i);
    const float64x2_t t = vld1q_f64(in.t + i);
    const float64x2_t d = vld1q_f64(in.d + i);
    const float64x2_t ms = vld1q_f64(in.m_sigma + i);
    const float64x2_t two_s = vmulq_f64(two, s);
    const float64x2_t tsh = vmulq_f64(t, sh);
    const float64x2_t big_t = vmulq_f64(two_s, vsubq_f64(vmulq_f64(d, c), vmulq_f64(tsh, s)));
    const float64x2_t big_s = vmulq_f64(two_s, vaddq_f64(vmulq_f64(tsh, c), vmulq_f64(d, s)));
    const float64x2_t u = vaddq_f64(vmulq_f64(ms, sh), vmulq_f64(ch, big_t));
    const float64x2_t root = vsqrtq_f64(vaddq_f64(vmulq_f64(u, u), vmulq_f64(big_s, big_s)));
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(vmulq_f64(ms, ch), vmulq_f64(sh, big_t)), root));
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

void null_residual_neon(const NullResidualBatch& in, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= in.n; i += 2) {
    const float64x2_t rc = vld1q_f64(in.rot_cos + i);
    const float64x2_t rs = vld1q_f64(in.rot_sin + i);
    const float64x2_t sh = vld1q_f64(in.sinh_v + i);
    const float64x2_t ch = vld1q_f64(in.cosh_v + i);
    const float64x2_t t = vld1q_f64(in.t + i);
    const float64x2_t d = vld1q_f64(in.d + i);
    const float64x2_t ms = vld1q_f64(in.m_sigma + i);
    const float64x2_t te = vsubq_f64(t, vld1q_f64(in.delta + i));
    const float64x2_t x = vmulq_f64(te, sh);
    const float64x2_t ex = vsubq_f64(vmulq_f64(rc, x), vmulq_f64(rs, d));
    const float64x2_t ey = vaddq_f64(vmulq_f64(rs, x), vmulq_f64(rc, d));
    const float64x2_t et = vaddq_f64(vmulq_f64(te, ch), ms);
    const float64x2_t dx = vsubq_f64(vmulq_f64(t, sh), ex);
    const float64x2_t dy = vsubq_f64(d, ey);
    const float64x2_t dt = vsubq_f64(vmulq_f64(t, ch), et);
    const float64x2_t dx2 = vmulq_f64(dx, dx);
    const float64x2_t dy2 = vmulq_f64(dy, dy);
    const float64x2_t dt2 = vmulq_f64(dt, dt);
    const float64x2_t scale = vaddq_f64(vaddq_f64(dx2, dy2), dt2);
    const float64x2_t num = vsubq_f64(vaddq_f64(dx2, dy2), dt2);
    const uint64x2_t is_zero = vceqq_f64(scale, vdupq_n_f64(0.0));
    vst1q_f64(out + i, vbslq_f64(is_zero, vdupq_n_f64(0.0), vdivq_f64(num, scale)));
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

void return_time_neon(const ReturnTimeBatch& in, double* out) { return_time_scalar(in, out); }
void null_residual_neon(const NullResidualBatch& in, double* out) { null_residual_scalar(in, out); }

#endif

}  // namespace conetime::kernels
