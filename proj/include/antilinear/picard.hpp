#pragma once

#include <vector>

#include "antilinear/grid.hpp"

// Truncated Picard series for the fundamental pair of U' = [[0, f], [conj f, 0]] U.
//
// Terms are iterated indefinite integrals on the refined grid:
//   T_0 = 1,   T_{k+1}(x) = int_0^x f(t) conj(T_k(t)) dt,
// so the outermost factor is always f and the factors alternate f, conj f, f, ... inward.
// S_f collects the odd-depth terms, C_f collects 1 and the even-depth terms.
namespace antilinear::picard {

struct SeriesOptions {
  int max_order = 15;
  double tol = 1e-16;
};

enum class StopReason { max_order, tolerance };

struct SeriesKernels {
  Trajectory c_f;
  Trajectory s_f;
  int order = 0;                    // deepest nesting included
  double last_term_norm = 0.0;      // sup-norm of the term at depth `order`
  StopReason stopped_by = StopReason::max_order;
  bool slow_convergence = false;    // int_0^x0 |f| > 3
  std::vector<double> term_norms;   // term_norms[k - 1] = sup |T_k|
};

SeriesKernels series_kernels(const Trajectory& f, const SeriesOptions& options = {});

/// Forced kernels C_{f,h}, S_{f,h}: the innermost integrand carries h.
/// C_{f,h}(0) = h(0), S_{f,h}(0) = 0; with h = 1 this is exactly series_kernels().
SeriesKernels forced_series_kernels(const Trajectory& f, const Trajectory& h, const SeriesOptions& options = {});

/// int_0^{x0} |f|.
double coefficient_mass(const Trajectory& f);

/// mass^k / k!, the working bound on the sup-norm of the depth-k term.
double term_bound(double mass, int k);

struct IdentityResiduals {
  double sinh = 0.0;
  double cosh = 0.0;
};

/// Builds the non-conjugated series 1 + int f + int f int f + ... up to depth `order`,
/// splits it by parity and compares against sinh / cosh of int_0^x f.
IdentityResiduals scalar_identity_residuals(const Trajectory& f, int order);

struct IntertwiningResiduals {
  double c = 0.0;  // sup |C_f' - f conj(S_f)|
  double s = 0.0;  // sup |S_f' - f conj(C_f)|
};

/// Differentiates the truncated kernels numerically and measures the intertwining relations.
IntertwiningResiduals intertwining_residuals(const SeriesKernels& kernels, const Trajectory& f);

}  // namespace antilinear::picard
