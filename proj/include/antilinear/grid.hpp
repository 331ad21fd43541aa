#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace antilinear {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  cplx a11{}, a12{}, a21{}, a22{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Vec2 operator*(const Vec2& v) const { return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]}; }
  Mat2 operator*(const Mat2& m) const {
    return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22,
            a21 * m.a11 + a22 * m.a21, a21 * m.a12 + a22 * m.a22};
  }
};

/// Uniform partition of [0, x0] into n steps, plus the half-step refinement
/// used for RK4 stage points and cumulative integrals.
///
/// Refined index k maps to x = k * h / 2, so full nodes sit at even k.
class Grid {
 public:
  Grid(double x0, std::size_t steps);

  double x0() const noexcept { return x0_; }
  std::size_t steps() const noexcept { return steps_; }
  double step() const noexcept { return x0_ / static_cast<double>(steps_); }

  std::size_t node_count() const noexcept { return steps_ + 1; }
  std::size_t refined_count() const noexcept { return 2 * steps_ + 1; }

  double refined_x(std::size_t k) const noexcept {
    return x0_ * static_cast<double>(k) / static_cast<double>(2 * steps_);
  }
  double node_x(std::size_t j) const noexcept { return refined_x(2 * j); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x0_;
  std::size_t steps_;
};

/// Samples of a 1- or 2-component complex function at every refined node of a grid.
/// Storage is component-major.
class Trajectory {
 public:
  Trajectory(Grid grid, std::size_t components);
  Trajectory(Grid grid, std::vector<cplx> samples);  // single component

  const Grid& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return components_; }
  std::size_t size() const noexcept { return grid_.refined_count(); }

  cplx& at(std::size_t component, std::size_t k) { return data_[component * size() + k]; }
  cplx at(std::size_t component, std::size_t k) const { return data_[component * size() + k]; }
  cplx& operator[](std::size_t k) { return data_[k]; }
  cplx operator[](std::size_t k) const { return data_[k]; }

  std::span<cplx> component(std::size_t c) { return {data_.data() + c * size(), size()}; }
  std::span<const cplx> component(std::size_t c) const { return {data_.data() + c * size(), size()}; }

  /// Value at full grid node j.
  cplx node(std::size_t component, std::size_t j) const { return at(component, 2 * j); }
  cplx back(std::size_t component = 0) const { return at(component, size() - 1); }

  std::span<const cplx> samples() const noexcept { return data_; }

  /// Throws SolverError naming the first non-finite node.
  void require_finite(std::string_view what) const;

 private:
  Grid grid_;
  std::size_t components_;
  std::vector<cplx> data_;
};

/// A complex-valued function of a real variable with an optional analytic derivative.
class CoefficientFunction {
 public:
  using Fn = std::function<cplx(double)>;

  explicit CoefficientFunction(Fn value, std::optional<Fn> derivative = std::nullopt)
      : value_(std::move(value)), derivative_(std::move(derivative)) {}

  static CoefficientFunction constant(cplx c);

  cplx operator()(double x) const { return value_(x); }
  bool has_derivative() const noexcept { return derivative_.has_value(); }
  cplx derivative(double x) const;

  /// Tabulates the value at every refined node; throws InputError if any sample is non-finite.
  Trajectory sample(const Grid& grid, std::string_view name = "coefficient") const;
  Trajectory sample_derivative(const Grid& grid, std::string_view name = "coefficient") const;

 private:
  Fn value_;
  std::optional<Fn> derivative_;
};

/// Pointwise map over one component.
Trajectory map(const Trajectory& t, const std::function<cplx(cplx)>& fn);
Trajectory map(const Trajectory& a, const Trajectory& b, const std::function<cplx(cplx, cplx)>& fn);

/// Sup over refined nodes of |a - b|, all components.
double max_abs_diff(const Trajectory& a, const Trajectory& b);
double sup_norm(std::span<const cplx> v);

}  // namespace antilinear
