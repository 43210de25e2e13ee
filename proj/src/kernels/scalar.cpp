#include <cmath>

#include "conetime/kernels/return_time_kernels.hpp"

namespace conetime::kernels {

void return_time_scalar(const ReturnTimeBatch& in, double* out) {
  for (std::size_t i = 0; i < in.n; ++i) {
    const double s = in.half_sin[i];
    const double c = in.half_cos[i];
    const double sh = in.sinh_v[i];
    const double ch = in.cosh_v[i];
    const double ms = in.m_sigma[i];
    const double big_t = 2.0 * s * (in.d[i] * c - in.t[i] * sh * s);
    const double big_s = 2.0 * s * (in.t[i] * sh * c + in.d[i] * s);
    const double u = ms * sh + ch * big_t;
    out[i] = ms * ch + sh * big_t + std::sqrt(u * u + big_s * big_s);
  }
}

void null_residual_scalar(const NullResidualBatch& in, double* out) {
  for (std::size_t i = 0; i < in.n; ++i) {
    const double te = in.t[i] - in.delta[i];
    const double x = te * in.sinh_v[i];
    const double ex = in.rot_cos[i] * x - in.rot_sin[i] * in.d[i];
    const double ey = in.rot_sin[i] * x + in.rot_cos[i] * in.d[i];
    const double et = te * in.cosh_v[i] + in.m_sigma[i];
    const double dx = in.t[i] * in.sinh_v[i] - ex;
    const double dy = in.d[i] - ey;
    const double dt = in.t[i] * in.cosh_v[i] - et;
    const double scale = dx * dx + dy * dy + dt * dt;
    out[i] = scale == 0.0 ? 0.0 : (dx * dx + dy * dy - dt * dt) / scale;
  }
}

}  // namespace conetime::kernels
