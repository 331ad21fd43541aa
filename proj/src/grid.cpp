#include "antilinear/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "antilinear/error.hpp"

namespace antilinear {

Grid::Grid(double x0, std::size_t steps) : x0_(x0), steps_(steps) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw InputError("interval end x0 must be finite and > 0");
  if (steps < 1) throw InputError("step count must be positive");
}

Trajectory::Trajectory(Grid grid, std::size_t components)
    : grid_(grid), components_(components), data_(components * grid.refined_count()) {
  if (components != 1 && components != 2) throw InputError("trajectory must have 1 or 2 components");
}

Trajectory::Trajectory(Grid grid, std::vector<cplx> samples)
    : grid_(grid), components_(1), data_(std::move(samples)) {
  if (data_.size() != grid_.refined_count())
    throw InputError("sample count " + std::to_string(data_.size()) + " does not match refined grid size " +
                     std::to_string(grid_.refined_count()));
}

void Trajectory::require_finite(std::string_view what) const {
  for (std::size_t c = 0; c < components_; ++c) {
    for (std::size_t k = 0; k < size(); ++k) {
      const cplx v = at(c, k);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw SolverError("non-finite " + std::string(what), grid_.refined_x(k));
    }
  }
}

CoefficientFunction CoefficientFunction::constant(cplx c) {
  return CoefficientFunction([c](double) { return c; }, [](double) { return cplx{}; });
}

cplx CoefficientFunction::derivative(double x) const {
  if (!derivative_) throw InputError("coefficient has no analytic derivative");
  return (*derivative_)(x);
}

namespace {

Trajectory tabulate(const CoefficientFunction::Fn& fn, const Grid& grid, std::string_view name) {
  std::vector<cplx> out(grid.refined_count());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double x = grid.refined_x(k);
    out[k] = fn(x);
    if (!std::isfinite(out[k].real()) || !std::isfinite(out[k].imag()))
      throw InputError(std::string(name) + " is not finite at x = " + std::to_string(x));
  }
  return Trajectory(grid, std::move(out));
}

}  // namespace

Trajectory CoefficientFunction::sample(const Grid& grid, std::string_view name) const {
  return tabulate(value_, grid, name);
}

Trajectory CoefficientFunction::sample_derivative(const Grid& grid, std::string_view name) const {
  if (!derivative_) throw InputError(std::string(name) + " has no analytic derivative");
  return tabulate(*derivative_, grid, std::string(name) + "'");
}

Trajectory map(const Trajectory& t, const std::function<cplx(cplx)>& fn) {
  std::vector<cplx> out(t.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fn(t[k]);
  return Trajectory(t.grid(), std::move(out));
}

Trajectory map(const Trajectory& a, const Trajectory& b, const std::function<cplx(cplx, cplx)>& fn) {
  if (!(a.grid() == b.grid())) throw InputError("trajectories live on different grids");
  std::vector<cplx> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fn(a[k], b[k]);
  return Trajectory(a.grid(), std::move(out));
}

double max_abs_diff(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw InputError("trajectories are not comparable");
  double m = 0.0;
  for (std::size_t c = 0; c < a.components(); ++c)
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.at(c, k) - b.at(c, k)));
  return m;
}

double sup_norm(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace antilinear
