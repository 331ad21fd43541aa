#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "antilinear/antidiagonal.hpp"
#include "antilinear/grid.hpp"

// Reductions of four physical first-order systems to the antidiagonal conjugate form
//   W' = [[0, c], [conj c, 0]] W (+ G),
// each with the exact inverse transform back to the physical unknowns.
namespace antilinear::reductions {

enum class Context { schrodinger, helmholtz, zakharov_shabat, kubelka_munk };

std::string_view context_name(Context c);
std::optional<Context> parse_context(std::string_view name);

enum class DerivativeSource { analytic, finite_difference, not_needed };

/// u'' + a u = 0, u(0) = u0, u'(0) = u1, with a real and positive.
struct SchrodingerInput {
  CoefficientFunction a;
  cplx u0;
  cplx u1;
  Grid grid;
  bool allow_fd_derivative = false;
};

/// (alpha u')' + beta u = source, u(0) = u0, u'(0) = u1. All data real, alpha, beta > 0.
struct HelmholtzInput {
  CoefficientFunction alpha;
  CoefficientFunction beta;
  CoefficientFunction source;
  cplx u0;
  cplx u1;
  Grid grid;
  bool allow_fd_derivative = false;
};

/// v' = [[-i xi, q], [conj q, i xi]] v, v(0) = v0.
struct ZakharovShabatInput {
  CoefficientFunction q;
  double xi;
  Vec2 v0;
  Grid grid;
};

/// (F+, F-)' = [[-K-S, S], [-S, K+S]] (F+, F-), K, S real and >= 0.
struct KubelkaMunkInput {
  CoefficientFunction absorption;  // K
  CoefficientFunction scattering;  // S
  Vec2 f0;
  Grid grid;
};

/// W -> V -> U -> physical unknowns.
struct InverseRecipe {
  Trajectory w_to_v;                           // V = diag(w_to_v) W
  std::optional<Mat2> p_inverse;               // U = P^-1 V
  std::optional<Trajectory> value_scale;       // u  = value_scale * U1
  std::optional<Trajectory> derivative_scale;  // u' = derivative_scale * U2
};

struct ReducedProblem {
  antidiagonal::AntidiagonalProblem reduced;
  InverseRecipe inverse;
  Context context;
  DerivativeSource derivative_source = DerivativeSource::not_needed;
};

ReducedProblem reduce_schrodinger(const SchrodingerInput& in);
ReducedProblem reduce_helmholtz(const HelmholtzInput& in);
ReducedProblem reduce_zakharov_shabat(const ZakharovShabatInput& in);
ReducedProblem reduce_kubelka_munk(const KubelkaMunkInput& in);

/// The constant matrix P that diagonalises [[0, 1], [-1, 0]], and its inverse.
Mat2 p_matrix();
Mat2 p_matrix_inverse();

struct Diagnostics {
  double determinant_drift = std::numeric_limits<double>::quiet_NaN();
  double compatibility_residual = std::numeric_limits<double>::quiet_NaN();
  /// Schrodinger / Helmholtz: derivative component vs finite differences of u.
  /// Kubelka-Munk: largest imaginary part of the (real) fluxes. NaN when undefined.
  double consistency_residual = std::numeric_limits<double>::quiet_NaN();
  DerivativeSource derivative_source = DerivativeSource::not_needed;
  std::vector<std::string> warnings;
};

struct Intermediates {
  Trajectory w;
  Trajectory v;
  Trajectory u;
};

struct ReducedSolution {
  /// (u, u') for Schrodinger and Helmholtz, (v1, v2) for Zakharov-Shabat, (F+, F-) for Kubelka-Munk.
  Trajectory physical;
  Diagnostics diagnostics;
  std::optional<Intermediates> intermediates;
};

struct SolveOptions {
  antidiagonal::PairMethod method = antidiagonal::PairMethod::integrator;
  picard::SeriesOptions series{};
  bool keep_intermediates = false;
  double consistency_tolerance = 1e-6;
};

ReducedSolution solve_reduced(const ReducedProblem& rp, const SolveOptions& options = {});

/// Solves many reduced problems on one grid. Homogeneous integrator-route problems share
/// a single lane-batched Z+/Z- pass; results come back in input order.
std::vector<ReducedSolution> solve_reduced_batch(std::span<const ReducedProblem> problems,
                                                 const SolveOptions& options = {});

// Reference solutions of the original (unreduced) systems, by direct RK4.
Trajectory schrodinger_reference(const SchrodingerInput& in);  // (u, u')
Trajectory helmholtz_reference(const HelmholtzInput& in);      // (u, u')
Trajectory zakharov_shabat_reference(const ZakharovShabatInput& in);
Trajectory kubelka_munk_reference(const KubelkaMunkInput& in);

/// Zakharov-Shabat transfer matrix at x0 through the reduced system.
Mat2 zs_transfer_matrix(const ZakharovShabatInput& in, const SolveOptions& options = {});

}  // namespace antilinear::reductions
