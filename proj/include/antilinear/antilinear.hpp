#pragma once

#include <optional>
#include <span>
#include <vector>

#include "antilinear/grid.hpp"

namespace antilinear {

enum class Sign : int { plus = 1, minus = -1 };

/// u' = f conj(u) + g on [0, x0], u(0) = u0. Coefficients are tabulated on the refined grid.
struct AntilinearProblem {
  Trajectory f;
  std::optional<Trajectory> g;
  cplx u0;

  static AntilinearProblem sample(const CoefficientFunction& f, const std::optional<CoefficientFunction>& g,
                                  cplx u0, const Grid& grid);

  const Grid& grid() const noexcept { return f.grid(); }

  /// Throws InputError when f or g is not finite or does not match the grid.
  void validate() const;
};

/// Solves u' = sign * f conj(u) + g by realification (u = p + iq) and RK4.
///
/// The right-hand side is R-linear but not C-linear, so the solver integrates
///   p' = sign (fr p + fi q) + gr,   q' = sign (fi p - fr q) + gi.
Trajectory solve_antilinear(const AntilinearProblem& problem, Sign sign = Sign::plus);

/// Solves independent problems on one shared grid in a single lane-batched pass.
std::vector<Trajectory> solve_antilinear_batch(std::span<const AntilinearProblem> problems,
                                               std::span<const Sign> signs);

/// Exact solution of u' = f conj(u) for constant f != 0:
/// with theta = arg f and exp(-i theta/2) u0 = a0 + i b0,
///   u(x) = exp(i theta/2) (a0 exp(|f| x) + i b0 exp(-|f| x)).
cplx solve_constant_closed_form(cplx f, cplx u0, double x);

struct ZPair {
  Trajectory z_plus;
  Trajectory z_minus;
};

/// Z+' = f conj(Z+), Z-' = -f conj(Z-), both from Z(0) = 1.
ZPair solve_z_pair(const Trajectory& f);

/// Z+' = f conj(Z+) + g1, Z-' = -f conj(Z-) + g1, both from Z(0) = u1_0.
ZPair solve_forced_z_pair(const Trajectory& f, const Trajectory& g1, cplx u1_0);

}  // namespace antilinear
