#pragma once

// Reference computations for the tests. Nothing here goes through the library's
// tabulated grids, quadrature or kernels: the ODE oracles evaluate coefficients
// directly and integrate with their own RK4 loop on a finer step.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using V2 = std::array<cplx, 2>;
using M2 = std::array<cplx, 4>;  // row-major

inline V2 mul(const M2& m, const V2& v) { return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]}; }

/// Classical RK4 for U' = M(x) U + F(x) with `steps` uniform steps on [0, x_end];
/// returns the state at every step boundary.
inline std::vector<V2> rk4(const std::function<M2(double)>& m, const std::function<V2(double)>& forcing, V2 u0,
                           double x_end, std::size_t steps) {
  const double h = x_end / static_cast<double>(steps);
  const auto rhs = [&](double x, const V2& u) {
    V2 d = mul(m(x), u);
    if (forcing) {
      const V2 g = forcing(x);
      d[0] += g[0];
      d[1] += g[1];
    }
    return d;
  };
  const auto axpy = [](const V2& u, double a, const V2& k) { return V2{u[0] + a * k[0], u[1] + a * k[1]}; };
  std::vector<V2> out{u0};
  V2 u = u0;
  for (std::size_t j = 0; j < steps; ++j) {
    const double x = h * static_cast<double>(j);
    const V2 k1 = rhs(x, u);
    const V2 k2 = rhs(x + h / 2, axpy(u, h / 2, k1));
    const V2 k3 = rhs(x + h / 2, axpy(u, h / 2, k2));
    const V2 k4 = rhs(x + h, axpy(u, h, k3));
    for (int c = 0; c < 2; ++c) u[c] += h / 6 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    out.push_back(u);
  }
  return out;
}

/// u' = f conj(u) + g, realified into (Re u, Im u) and integrated by rk4.
/// Returns u at `nodes` + 1 evenly spaced points, using `refine` oracle steps per interval.
inline std::vector<cplx> antilinear(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                                    cplx u0, double x_end, std::size_t nodes, std::size_t refine = 4) {
  const auto m = [&](double x) {
    const cplx fx = f(x);
    return M2{fx.real(), fx.imag(), fx.imag(), -fx.real()};
  };
  std::function<V2(double)> forcing;
  if (g) forcing = [&](double x) { const cplx gx = g(x); return V2{gx.real(), gx.imag()}; };
  const std::vector<V2> raw = rk4(m, forcing, {u0.real(), u0.imag()}, x_end, nodes * refine);
  std::vector<cplx> out;
  for (std::size_t j = 0; j <= nodes; ++j) out.emplace_back(raw[j * refine][0].real(), raw[j * refine][1].real());
  return out;
}

/// Same sampling for a 2x2 linear system.
inline std::vector<V2> system(const std::function<M2(double)>& m, const std::function<V2(double)>& forcing, V2 u0,
                              double x_end, std::size_t nodes, std::size_t refine = 4) {
  const std::vector<V2> raw = rk4(m, forcing, u0, x_end, nodes * refine);
  std::vector<V2> out;
  for (std::size_t j = 0; j <= nodes; ++j) out.push_back(raw[j * refine]);
  return out;
}

/// exp(x A) for constant 2x2 A via Cayley-Hamilton: A = mu I + B with B^2 = delta I.
inline M2 expm(const M2& a, double x) {
  const cplx mu = (a[0] + a[3]) / 2.0;
  const M2 b{a[0] - mu, a[1], a[2], a[3] - mu};
  const cplx delta = b[0] * b[0] + b[1] * b[2];
  const cplx k = std::sqrt(delta);
  cplx ch, sh_over_k;
  if (std::abs(k * x) < 1e-4) {
    const cplx z = delta * x * x;
    ch = 1.0 + z / 2.0 + z * z / 24.0;
    sh_over_k = x * (1.0 + z / 6.0 + z * z / 120.0);
  } else {
    ch = std::cosh(k * x);
    sh_over_k = std::sinh(k * x) / k;
  }
  const cplx e = std::exp(mu * x);
  return {e * (ch + sh_over_k * b[0]), e * sh_over_k * b[1], e * sh_over_k * b[2], e * (ch + sh_over_k * b[3])};
}

/// Composite Gauss-Legendre (5-point) quadrature of f on [0, x] with `panels` panels.
inline cplx integral(const std::function<cplx(double)>& f, double x, std::size_t panels = 200) {
  static const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                  0.9061798459386640};
  static const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
  const double w = x / static_cast<double>(panels);
  cplx sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = w * (static_cast<double>(p) + 0.5);
    for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + 0.5 * w * nodes[i]);
  }
  return sum * (w / 2.0);
}

inline double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
