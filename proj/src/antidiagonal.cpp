#include "antilinear/antidiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "antilinear/antilinear.hpp"
#include "antilinear/error.hpp"
#include "antilinear/kernels.hpp"
#include "antilinear/numerics.hpp"

namespace antilinear::antidiagonal {

namespace {

constexpr cplx kI{0.0, 1.0};

void finish_pair(FundamentalPair& pair) {
  pair.determinant_drift = kernels::determinant_drift(pair.c_f.samples(), pair.s_f.samples());
  if (!(pair.determinant_drift <= kDriftWarning))
    pair.warnings.push_back("determinant drift " + std::to_string(pair.determinant_drift) + " exceeds " +
                            std::to_string(kDriftWarning));
}

void require_same_grid(const GeneralSystem& s) {
  for (const Trajectory* t : {&s.q, &s.r, &s.s})
    if (!(t->grid() == s.p.grid()) || t->components() != 1)
      throw InputError("general system coefficients must share one grid");
  s.p.require_finite("p");
  s.q.require_finite("q");
  s.r.require_finite("r");
  s.s.require_finite("s");
}

}  // namespace

FundamentalPair fundamental_pair(const Trajectory& f, PairMethod method, const picard::SeriesOptions& series) {
  if (method == PairMethod::series) {
    picard::SeriesKernels k = picard::series_kernels(f, series);
    FundamentalPair pair{k.c_f, k.s_f};
    if (k.slow_convergence) pair.warnings.push_back("series route: int |f| > 3, slow convergence");
    pair.series = std::move(k);
    finish_pair(pair);
    return pair;
  }
  const ZPair z = solve_z_pair(f);
  FundamentalPair pair{Trajectory(f.grid(), 1), Trajectory(f.grid(), 1)};
  kernels::recombine(z.z_plus.samples(), z.z_minus.samples(), pair.c_f.component(0), pair.s_f.component(0));
  finish_pair(pair);
  return pair;
}

Trajectory apply_pair(const FundamentalPair& pair, Vec2 u0) {
  Trajectory out(pair.c_f.grid(), 2);
  kernels::apply_pair(pair.c_f.samples(), pair.s_f.samples(), u0, out.component(0), out.component(1));
  return out;
}

Trajectory solve_homogeneous(const AntidiagonalProblem& problem, PairMethod method,
                             const picard::SeriesOptions& series) {
  if (problem.forcing) throw InputError("solve_homogeneous called with a forcing term");
  return apply_pair(fundamental_pair(problem.f, method, series), problem.u0);
}

double compatibility_residual(const AntidiagonalProblem& problem) {
  double worst = std::abs(problem.u0[1] - kI * std::conj(problem.u0[0]));
  if (problem.forcing) {
    const Forcing& g = *problem.forcing;
    for (std::size_t k = 0; k < g.g1.size(); ++k)
      worst = std::max(worst, std::abs(g.g2[k] - kI * std::conj(g.g1[k])));
  }
  return worst;
}

Trajectory solve_nonhomogeneous(const AntidiagonalProblem& problem, double tol) {
  if (!problem.forcing) throw InputError("solve_nonhomogeneous needs a forcing pair (g1, g2)");
  const Forcing& g = *problem.forcing;
  if (!(g.g1.grid() == problem.grid()) || !(g.g2.grid() == problem.grid()))
    throw InputError("forcing must be tabulated on the coefficient grid");
  g.g1.require_finite("g1");
  g.g2.require_finite("g2");

  double scale = std::abs(problem.u0[0]);
  for (std::size_t k = 0; k < g.g1.size(); ++k) scale = std::max(scale, std::abs(g.g1[k]));
  const double allowed = tol * (1.0 + scale);
  const double residual = compatibility_residual(problem);
  if (!(residual <= allowed))
    throw CompatibilityError("forcing violates g2 = i conj(g1), u2(0) = i conj(u1(0)) (max deviation " +
                                 std::to_string(residual) +
                                 "); integrate the full 2x2 system with the reference integrator instead",
                             residual);

  const ZPair z = solve_forced_z_pair(problem.f, g.g1, problem.u0[0]);
  Trajectory c(problem.grid(), 1), s_conj(problem.grid(), 1);
  kernels::recombine(z.z_plus.samples(), z.z_minus.samples(), c.component(0), s_conj.component(0));

  // U1 = C_{f,h1} + S_{f,h2} with S_{f,h2} = i S_{f,conj h1};  U2 = i conj(U1).
  Trajectory u(problem.grid(), 2);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const cplx u1 = c[k] + kI * s_conj[k];
    u.at(0, k) = u1;
    u.at(1, k) = kI * std::conj(u1);
  }
  return u;
}

Trajectory solve_with_reference(const AntidiagonalProblem& problem) {
  const std::size_t n = problem.grid().refined_count();
  std::vector<Mat2> m(n);
  std::vector<Vec2> forcing;
  for (std::size_t k = 0; k < n; ++k) m[k] = {0.0, problem.f[k], std::conj(problem.f[k]), 0.0};
  if (problem.forcing) {
    forcing.resize(n);
    for (std::size_t k = 0; k < n; ++k) forcing[k] = {problem.forcing->g1[k], problem.forcing->g2[k]};
  }
  return numerics::integrate_linear_system(m, forcing, problem.u0, problem.grid());
}

DiagonalRemoval remove_diagonal(const GeneralSystem& system) {
  require_same_grid(system);
  Trajectory ip = numerics::cumulative_integral(system.p);
  Trajectory iq = numerics::cumulative_integral(system.q);
  const Grid& grid = system.grid();
  const std::size_t n = grid.refined_count();
  GeneralSystem t{Trajectory(grid, 1), Trajectory(grid, 1), Trajectory(grid, 1), Trajectory(grid, 1), system.u0};
  Trajectory mult(grid, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx d = ip[k] - iq[k];
    t.r[k] = system.r[k] * std::exp(-d);
    t.s[k] = system.s[k] * std::exp(d);
    mult.at(0, k) = std::exp(-ip[k]);
    mult.at(1, k) = std::exp(-iq[k]);
  }
  return {std::move(t), std::move(mult), std::move(ip), std::move(iq)};
}

Trajectory restore_diagonal(const DiagonalRemoval& removal, const Trajectory& v) {
  if (v.components() != 2 || !(v.grid() == removal.int_p.grid()))
    throw InputError("restore_diagonal expects a 2-component trajectory on the system grid");
  Trajectory u(v.grid(), 2);
  for (std::size_t k = 0; k < v.size(); ++k) {
    u.at(0, k) = std::exp(removal.int_p[k]) * v.at(0, k);
    u.at(1, k) = std::exp(removal.int_q[k]) * v.at(1, k);
  }
  return u;
}

double scaled_tolerance(const GeneralSystem& system, double tol) {
  double m = 0.0;
  for (const Trajectory* t : {&system.p, &system.q, &system.r, &system.s}) m = std::max(m, sup_norm(t->samples()));
  return tol * (1.0 + m);
}

StrongCheck check_strong_condition(const GeneralSystem& system, double tol) {
  const DiagonalRemoval rd = remove_diagonal(system);
  StrongCheck out;
  for (std::size_t k = 0; k < rd.transformed.r.size(); ++k)
    out.max_deviation = std::max(out.max_deviation, std::abs(rd.transformed.r[k] - rd.transformed.s[k]));
  out.holds = out.max_deviation <= scaled_tolerance(system, tol);
  if (out.holds) out.c1 = rd.transformed.r;
  return out;
}

Trajectory solve_strong_explicit(const GeneralSystem& system, const Trajectory& c1) {
  const DiagonalRemoval rd = remove_diagonal(system);
  if (!(c1.grid() == system.grid())) throw InputError("c1 must live on the system grid");
  const double allowed = scaled_tolerance(system, kConditionTolerance);
  for (std::size_t k = 0; k < c1.size(); ++k) {
    if (std::abs(rd.transformed.r[k] - c1[k]) > allowed || std::abs(rd.transformed.s[k] - c1[k]) > allowed)
      throw InputError("solve_strong_explicit: the strong condition does not hold at x = " +
                       std::to_string(c1.grid().refined_x(k)));
  }
  const Trajectory ic = numerics::cumulative_integral(c1);
  Trajectory v(system.grid(), 2);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const cplx ch = std::cosh(ic[k]);
    const cplx sh = std::sinh(ic[k]);
    v.at(0, k) = ch * system.u0[0] + sh * system.u0[1];
    v.at(1, k) = sh * system.u0[0] + ch * system.u0[1];
  }
  return restore_diagonal(rd, v);
}

WeakCheck check_weak_condition(const GeneralSystem& system, double tol) {
  const DiagonalRemoval rd = remove_diagonal(system);
  WeakCheck out;
  for (std::size_t k = 0; k < system.s.size(); ++k) {
    const double re_d = (rd.int_p[k] - rd.int_q[k]).real();
    const cplx expected = std::conj(system.r[k]) * std::exp(-2.0 * re_d);
    out.max_deviation = std::max(out.max_deviation, std::abs(system.s[k] - expected));
  }
  out.holds = out.max_deviation <= scaled_tolerance(system, tol);
  if (out.holds) out.antilinear_form = AntidiagonalProblem{rd.transformed.r, std::nullopt, system.u0};
  return out;
}

Trajectory solve_general_reference(const GeneralSystem& system) {
  require_same_grid(system);
  const std::size_t n = system.grid().refined_count();
  std::vector<Mat2> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = {system.p[k], system.r[k], system.s[k], system.q[k]};
  return numerics::integrate_linear_system(m, {}, system.u0, system.grid());
}

}  // namespace antilinear::antidiagonal
