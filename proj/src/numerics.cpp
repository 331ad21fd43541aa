#include "antilinear/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "antilinear/error.hpp"

namespace antilinear::numerics {

namespace {

bool finite(const Vec2& v) {
  return std::isfinite(v[0].real()) && std::isfinite(v[0].imag()) && std::isfinite(v[1].real()) &&
         std::isfinite(v[1].imag());
}

bool finite(const Mat2& m) { return finite(Vec2{m.a11, m.a12}) && finite(Vec2{m.a21, m.a22}); }

Vec2 axpy(const Vec2& y, double a, const Vec2& k) { return {y[0] + a * k[0], y[1] + a * k[1]}; }

}  // namespace

Trajectory cumulative_integral(const Trajectory& f) {
  if (f.components() != 1) throw InputError("cumulative_integral expects a single-component profile");
  f.require_finite("integrand");
  const Grid& grid = f.grid();
  const double h = grid.step();
  const double d = h / 2.0;
  Trajectory out(grid, 1);
  cplx running{0.0, 0.0};
  out[0] = running;
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const cplx f0 = f[2 * j];
    const cplx f1 = f[2 * j + 1];
    const cplx f2 = f[2 * j + 2];
    // Exact for quadratics on [x_2j, x_2j + d].
    out[2 * j + 1] = running + (d / 12.0) * (5.0 * f0 + 8.0 * f1 - f2);
    running += (h / 6.0) * (f0 + 4.0 * f1 + f2);
    out[2 * j + 2] = running;
  }
  return out;
}

Trajectory cumulative_integral(const CoefficientFunction& f, const Grid& grid) {
  return cumulative_integral(f.sample(grid, "integrand"));
}

cplx reverse_summed_integral(const Trajectory& f) {
  const Grid& grid = f.grid();
  const double h = grid.step();
  cplx total{0.0, 0.0};
  for (std::size_t j = grid.steps(); j-- > 0;)
    total += (h / 6.0) * (f[2 * j] + 4.0 * f[2 * j + 1] + f[2 * j + 2]);
  return total;
}

Trajectory differentiate(const Trajectory& u, std::size_t component) {
  const std::size_t n = u.size();
  const double d = u.grid().step() / 2.0;
  const auto v = u.component(component);
  std::vector<cplx> out(n);
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * d);
  out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * d);
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (v[k + 1] - v[k - 1]) / (2.0 * d);
  return Trajectory(u.grid(), std::move(out));
}

Trajectory integrate_linear_system(std::span<const Mat2> m, std::span<const Vec2> forcing, Vec2 u0,
                                   const Grid& grid) {
  const std::size_t refined = grid.refined_count();
  if (m.size() != refined) throw InputError("matrix field must be tabulated on the refined grid");
  if (!forcing.empty() && forcing.size() != refined)
    throw InputError("forcing must be tabulated on the refined grid");
  for (std::size_t k = 0; k < refined; ++k) {
    if (!finite(m[k])) throw InputError("system matrix is not finite at x = " + std::to_string(grid.refined_x(k)));
    if (!forcing.empty() && !finite(forcing[k]))
      throw InputError("forcing is not finite at x = " + std::to_string(grid.refined_x(k)));
  }
  if (!finite(u0)) throw InputError("initial value is not finite");

  auto rhs = [&](std::size_t k, const Vec2& y) {
    Vec2 dy = m[k] * y;
    if (!forcing.empty()) {
      dy[0] += forcing[k][0];
      dy[1] += forcing[k][1];
    }
    return dy;
  };

  const double h = grid.step();
  Trajectory out(grid, 2);
  Vec2 y = u0;
  Vec2 dy = rhs(0, y);
  out.at(0, 0) = y[0];
  out.at(1, 0) = y[1];
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const std::size_t k = 2 * j;
    const Vec2 k1 = dy;
    const Vec2 k2 = rhs(k + 1, axpy(y, h / 2.0, k1));
    const Vec2 k3 = rhs(k + 1, axpy(y, h / 2.0, k2));
    const Vec2 k4 = rhs(k + 2, axpy(y, h, k3));
    Vec2 next;
    for (int c = 0; c < 2; ++c) next[c] = y[c] + (h / 6.0) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    if (!finite(next)) throw SolverError("reference integrator produced a non-finite state", grid.node_x(j + 1));
    const Vec2 dnext = rhs(k + 2, next);
    for (int c = 0; c < 2; ++c) {
      out.at(c, k + 1) = 0.5 * (y[c] + next[c]) + (h / 8.0) * (dy[c] - dnext[c]);
      out.at(c, k + 2) = next[c];
    }
    y = next;
    dy = dnext;
  }
  return out;
}

Trajectory integrate_linear_system(const MatrixField& m, const std::optional<VectorField>& forcing, Vec2 u0,
                                   const Grid& grid) {
  std::vector<Mat2> mt(grid.refined_count());
  std::vector<Vec2> ft;
  for (std::size_t k = 0; k < mt.size(); ++k) mt[k] = m(grid.refined_x(k));
  if (forcing) {
    ft.resize(grid.refined_count());
    for (std::size_t k = 0; k < ft.size(); ++k) ft[k] = (*forcing)(grid.refined_x(k));
  }
  return integrate_linear_system(mt, ft, u0, grid);
}

Mat2 propagate_fundamental(const MatrixField& m, const Grid& grid) {
  std::vector<Mat2> mt(grid.refined_count());
  for (std::size_t k = 0; k < mt.size(); ++k) mt[k] = m(grid.refined_x(k));
  const Trajectory c1 = integrate_linear_system(mt, {}, {1.0, 0.0}, grid);
  const Trajectory c2 = integrate_linear_system(mt, {}, {0.0, 1.0}, grid);
  return {c1.back(0), c2.back(0), c1.back(1), c2.back(1)};
}

double ConvergenceReport::min_order() const {
  if (exact) return std::numeric_limits<double>::infinity();
  double m = std::numeric_limits<double>::infinity();
  for (double o : orders) m = std::min(m, o);
  return m;
}

ConvergenceReport convergence_order(std::span<const double> steps, std::span<const double> errors) {
  if (steps.size() != errors.size() || errors.size() < 2)
    throw InputError("convergence study needs at least two matching (step, error) levels");
  ConvergenceReport r;
  r.steps.assign(steps.begin(), steps.end());
  r.errors.assign(errors.begin(), errors.end());
  r.exact = std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; });
  if (r.exact) return r;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    r.orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(steps[i] / steps[i + 1]));
  return r;
}

ConvergenceReport convergence_study(const std::function<double(const Grid&)>& error_at, double x0,
                                    std::size_t coarse_steps, std::size_t levels) {
  std::vector<double> steps, errors;
  std::size_t n = coarse_steps;
  for (std::size_t l = 0; l < levels; ++l, n *= 2) {
    const Grid grid(x0, n);
    steps.push_back(grid.step());
    errors.push_back(error_at(grid));
  }
  return convergence_order(steps, errors);
}

}  // namespace antilinear::numerics
