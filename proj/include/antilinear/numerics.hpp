#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "antilinear/grid.hpp"

namespace antilinear::numerics {

/// F(x_k) = int_0^{x_k} f on every refined node. Full nodes use composite Simpson over
/// consecutive refined triples; the half node inside a triple uses the matching
/// three-point half-interval rule. F(0) = 0 exactly.
Trajectory cumulative_integral(const Trajectory& f);
Trajectory cumulative_integral(const CoefficientFunction& f, const Grid& grid);

/// Same quantity at the full nodes only, summed from the last Simpson piece backwards.
/// Used to check that the running sum is insensitive to summation order.
cplx reverse_summed_integral(const Trajectory& f);

/// Second-order finite-difference derivative on the refined grid (spacing h/2):
/// centered in the interior, one-sided three-point at the ends.
Trajectory differentiate(const Trajectory& u, std::size_t component = 0);

using MatrixField = std::function<Mat2(double)>;
using VectorField = std::function<Vec2(double)>;

/// Reference solver: classical RK4 for U' = M(x) U + F(x), U(0) = u0, with step h and stage
/// points on the refined grid. Half-step samples are filled by cubic Hermite interpolation.
/// This is the oracle every structured solver is checked against.
Trajectory integrate_linear_system(const MatrixField& m, const std::optional<VectorField>& forcing, Vec2 u0,
                                   const Grid& grid);

/// Tabulated variant: `m` (and `forcing`, if given) hold one entry per refined node.
Trajectory integrate_linear_system(std::span<const Mat2> m, std::span<const Vec2> forcing, Vec2 u0,
                                   const Grid& grid);

/// Fundamental matrix at x0: columns are the solutions started from e1 and e2.
Mat2 propagate_fundamental(const MatrixField& m, const Grid& grid);

struct ConvergenceReport {
  std::vector<double> steps;
  std::vector<double> errors;
  std::vector<double> orders;  // log2(e_i / e_{i+1}), one per consecutive pair
  bool exact = false;          // every error is identically zero

  double min_order() const;
};

/// Observed orders from errors measured at steps h, h/2, h/4, ...
ConvergenceReport convergence_order(std::span<const double> steps, std::span<const double> errors);

/// Runs `error_at` on grids with n, 2n, 4n, ... steps over [0, x0].
ConvergenceReport convergence_study(const std::function<double(const Grid&)>& error_at, double x0,
                                    std::size_t coarse_steps, std::size_t levels = 3);

}  // namespace antilinear::numerics
