#pragma once

#include <optional>
#include <string>
#include <vector>

#include "antilinear/grid.hpp"
#include "antilinear/picard.hpp"

namespace antilinear::antidiagonal {

/// Absolute tolerance used by the pointwise structural checks, before scaling by
/// (1 + max coefficient magnitude).
inline constexpr double kConditionTolerance = 1e-12;

/// Determinant drift above this raises a warning in FundamentalPair::warnings.
inline constexpr double kDriftWarning = 1e-5;

enum class PairMethod { integrator, series };

/// Entries of the fundamental matrix [[C_f, S_f], [conj S_f, conj C_f]].
struct FundamentalPair {
  Trajectory c_f;
  Trajectory s_f;
  double determinant_drift = 0.0;  // max | |C_f|^2 - |S_f|^2 - 1 |
  std::vector<std::string> warnings;
  std::optional<picard::SeriesKernels> series;  // set for PairMethod::series
};

struct Forcing {
  Trajectory g1;
  Trajectory g2;
};

/// U' = [[0, f], [conj f, 0]] U + G, U(0) = u0.
struct AntidiagonalProblem {
  Trajectory f;
  std::optional<Forcing> forcing;
  Vec2 u0;

  const Grid& grid() const noexcept { return f.grid(); }
};

/// Integrator route: Z+/Z- from two antilinear solves, C = (Z+ + Z-)/2, S = (Z+ - Z-)/2.
/// Series route: truncated Picard kernels.
FundamentalPair fundamental_pair(const Trajectory& f, PairMethod method = PairMethod::integrator,
                                 const picard::SeriesOptions& series = {});

/// U(x) = [[C_f, S_f], [conj S_f, conj C_f]] u0 at every refined node.
Trajectory apply_pair(const FundamentalPair& pair, Vec2 u0);

Trajectory solve_homogeneous(const AntidiagonalProblem& problem, PairMethod method = PairMethod::integrator,
                             const picard::SeriesOptions& series = {});

/// Largest violation of g2 = i conj(g1) over refined nodes and of u2(0) = i conj(u1(0)).
double compatibility_residual(const AntidiagonalProblem& problem);

/// Forced solve through the decoupled Z+/Z- problems. Requires the compatibility condition;
/// otherwise throws CompatibilityError (integrate the 2x2 system directly instead).
Trajectory solve_nonhomogeneous(const AntidiagonalProblem& problem, double tol = kConditionTolerance);

/// The 2x2 matrix/forcing of the problem tabulated for the reference integrator.
Trajectory solve_with_reference(const AntidiagonalProblem& problem);

/// U' = [[p, r], [s, q]] U, U(0) = u0.
struct GeneralSystem {
  Trajectory p, q, r, s;
  Vec2 u0;

  const Grid& grid() const noexcept { return p.grid(); }
};

struct DiagonalRemoval {
  GeneralSystem transformed;  // p = q = 0, r e^{-int(p-q)}, s e^{+int(p-q)}
  Trajectory multipliers;     // 2 components: exp(-int p), exp(-int q), so V = diag(multipliers) U
  Trajectory int_p;
  Trajectory int_q;
};

DiagonalRemoval remove_diagonal(const GeneralSystem& system);

/// U = diag(exp(int p), exp(int q)) V.
Trajectory restore_diagonal(const DiagonalRemoval& removal, const Trajectory& v);

/// Tolerance actually applied: tol * (1 + max |coefficient|) over all four coefficients.
double scaled_tolerance(const GeneralSystem& system, double tol);

struct StrongCheck {
  bool holds = false;
  double max_deviation = 0.0;
  std::optional<Trajectory> c1;  // the common anti-diagonal value when the check holds
};

/// r e^{-int(p-q)} == s e^{int(p-q)} on every refined node.
StrongCheck check_strong_condition(const GeneralSystem& system, double tol = kConditionTolerance);

/// V = [cosh(int c1) I + sinh(int c1) Swap] u0, then back to U.
Trajectory solve_strong_explicit(const GeneralSystem& system, const Trajectory& c1);

struct WeakCheck {
  bool holds = false;
  double max_deviation = 0.0;
  std::optional<AntidiagonalProblem> antilinear_form;  // f = r e^{-int(p-q)}, u0 preserved
};

/// s == conj(r) exp(-2 Re int(p-q)) on every refined node.
WeakCheck check_weak_condition(const GeneralSystem& system, double tol = kConditionTolerance);

Trajectory solve_general_reference(const GeneralSystem& system);

}  // namespace antilinear::antidiagonal
