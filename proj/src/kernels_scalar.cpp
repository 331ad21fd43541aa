#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace antilinear::kernels::scalar {

void antilinear_rk4(const AntilinearBatch& batch, double* p, double* q) {
  const std::size_t stride = batch.stride;
  const double h = batch.h;
  const double h2 = h / 2.0;
  const double h6 = h / 6.0;
  const double h8 = h / 8.0;
  const double* fr = batch.f_re.data();
  const double* fi = batch.f_im.data();
  const double* gr = batch.g_re.data();
  const double* gi = batch.g_im.data();

  for (std::size_t l = 0; l < stride; ++l) {
    const double s = batch.sign[l];
    auto dp = [&](std::size_t k, double a, double b) { return s * (fr[k * stride + l] * a + fi[k * stride + l] * b) + gr[k * stride + l]; };
    auto dq = [&](std::size_t k, double a, double b) { return s * (fi[k * stride + l] * a - fr[k * stride + l] * b) + gi[k * stride + l]; };

    double y0 = batch.p0[l];
    double z0 = batch.q0[l];
    double d0 = dp(0, y0, z0);
    double e0 = dq(0, y0, z0);
    p[l] = y0;
    q[l] = z0;
    for (std::size_t j = 0; j < batch.steps; ++j) {
      const std::size_t k = 2 * j;
      const double k1p = d0, k1q = e0;
      const double y2 = y0 + h2 * k1p, z2 = z0 + h2 * k1q;
      const double k2p = dp(k + 1, y2, z2), k2q = dq(k + 1, y2, z2);
      const double y3 = y0 + h2 * k2p, z3 = z0 + h2 * k2q;
      const double k3p = dp(k + 1, y3, z3), k3q = dq(k + 1, y3, z3);
      const double y4 = y0 + h * k3p, z4 = z0 + h * k3q;
      const double k4p = dp(k + 2, y4, z4), k4q = dq(k + 2, y4, z4);
      const double y1 = y0 + h6 * (((k1p + 2.0 * k2p) + 2.0 * k3p) + k4p);
      const double z1 = z0 + h6 * (((k1q + 2.0 * k2q) + 2.0 * k3q) + k4q);
      const double d1 = dp(k + 2, y1, z1);
      const double e1 = dq(k + 2, y1, z1);
      p[(k + 1) * stride + l] = 0.5 * (y0 + y1) + h8 * (d0 - d1);
      q[(k + 1) * stride + l] = 0.5 * (z0 + z1) + h8 * (e0 - e1);
      p[(k + 2) * stride + l] = y1;
      q[(k + 2) * stride + l] = z1;
      y0 = y1;
      z0 = z1;
      d0 = d1;
      e0 = e1;
    }
  }
}

void recombine(const double* a, const double* b, double* half_sum, double* half_diff, std::size_t n) {
  for (std::size_t i = 0; i < 2 * n; ++i) {
    half_sum[i] = 0.5 * (a[i] + b[i]);
    half_diff[i] = 0.5 * (a[i] - b[i]);
  }
}

double determinant_drift(const double* c, const double* s, std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cr = c[2 * i], ci = c[2 * i + 1];
    const double sr = s[2 * i], si = s[2 * i + 1];
    const double d = ((cr * cr + ci * ci) - (sr * sr + si * si)) - 1.0;
    worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

void apply_pair(const double* c, const double* s, const double* u0, double* u1, double* u2, std::size_t n) {
  const double ar = u0[0], ai = u0[1], br = u0[2], bi = u0[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double cr = c[2 * i], ci = c[2 * i + 1];
    const double sr = s[2 * i], si = s[2 * i + 1];
    u1[2 * i] = (cr * ar - ci * ai) + (sr * br - si * bi);
    u1[2 * i + 1] = (cr * ai + ci * ar) + (sr * bi + si * br);
    u2[2 * i] = (sr * ar + si * ai) + (cr * br + ci * bi);
    u2[2 * i + 1] = (sr * ai - si * ar) + (cr * bi - ci * br);
  }
}

}  // namespace antilinear::kernels::scalar
