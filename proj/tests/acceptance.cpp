// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero if any line fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "antilinear/antidiagonal.hpp"
#include "antilinear/antilinear.hpp"
#include "antilinear/picard.hpp"
#include "antilinear/reductions.hpp"
#include "oracles.hpp"

using namespace antilinear;
using oracle::M2;
using oracle::V2;

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kSteps = 1000;
const Grid kGrid(1.0, kSteps);

int failures = 0;

void report(const char* id, const std::string& what, double value, double tol, bool passed) {
  if (!passed) ++failures;
  std::printf("%-4s %-4s %-68s value=%.3e  tol=%.1e\n", passed ? "PASS" : "FAIL", id, what.c_str(), value, tol);
}

void at_most(const char* id, const std::string& what, double value, double tol) {
  report(id, what, value, tol, value <= tol);
}

void at_least(const char* id, const std::string& what, double value, double bound) {
  report(id, what, value, bound, value >= bound);
}

using Fn = std::function<cplx(double)>;

// Smooth coefficients on [0, 1] with int |f| <= 1.
const std::vector<Fn>& coefficients() {
  static const std::vector<Fn> fs = {
      [](double) { return cplx{0.6, 0.3}; },
      [](double x) { return cplx{0.5 * x * x + 0.2, -0.3 * x}; },
      [](double x) { return cplx{0.8 * std::sin(3.0 * x), 0.4 * std::cos(2.0 * x)}; },
      [](double x) { return std::exp(kI * x) * (0.3 + 0.2 * x); },
      [](double x) { return cplx{0.9, -0.2} * std::exp(-4.0 * (x - 0.5) * (x - 0.5)); },
  };
  return fs;
}

Trajectory sample(const Fn& f) { return CoefficientFunction(f).sample(kGrid); }

std::function<M2(double)> antidiagonal_matrix(const Fn& f) {
  return [f](double x) {
    const cplx v = f(x);
    return M2{0.0, v, std::conj(v), 0.0};
  };
}

// Sup over full nodes of a two-component trajectory against oracle states.
double node_error(const Trajectory& t, const std::vector<V2>& ref) {
  double e = 0.0;
  for (std::size_t j = 0; j < t.grid().node_count(); ++j)
    for (std::size_t c = 0; c < 2; ++c) e = std::max(e, std::abs(t.node(c, j) - ref[j][c]));
  return e;
}

double mat_error(const Mat2& a, const M2& b) {
  return std::max({std::abs(a.a11 - b[0]), std::abs(a.a12 - b[1]), std::abs(a.a21 - b[2]), std::abs(a.a22 - b[3])});
}

void determinant_invariant() {
  double drift = 0.0;
  for (const Fn& f : coefficients()) drift = std::max(drift, antidiagonal::fundamental_pair(sample(f)).determinant_drift);
  at_most("1", "determinant |C|^2 - |S|^2 = 1, 5 coefficients, h = 1e-3", drift, 1e-7);
}

void pair_vs_direct() {
  double err = 0.0;
  for (const Fn& f : coefficients()) {
    const antidiagonal::FundamentalPair pair = antidiagonal::fundamental_pair(sample(f));
    // Columns of the fundamental matrix: (C, conj S) from e1 and (S, conj C) from e2.
    const std::vector<V2> col1 = oracle::system(antidiagonal_matrix(f), {}, {1.0, 0.0}, 1.0, kSteps);
    const std::vector<V2> col2 = oracle::system(antidiagonal_matrix(f), {}, {0.0, 1.0}, 1.0, kSteps);
    for (std::size_t j = 0; j <= kSteps; ++j) {
      const cplx c = pair.c_f.node(0, j), s = pair.s_f.node(0, j);
      err = std::max({err, std::abs(c - col1[j][0]), std::abs(std::conj(s) - col1[j][1]),
                      std::abs(s - col2[j][0]), std::abs(std::conj(c) - col2[j][1])});
    }
  }
  at_most("2", "Z+/Z- fundamental pair vs direct 2x2 integration", err, 1e-7);
}

void scalar_identities() {
  double r = 0.0;
  for (const Fn& f : coefficients()) {
    const picard::IdentityResiduals res = picard::scalar_identity_residuals(sample(f), 12);
    r = std::max({r, res.sinh, res.cosh});
  }
  // Real f: the kernels are cosh and sinh of the running integral.
  const Fn real = [](double x) { return cplx{0.4 + 0.6 * x * x, 0.0}; };
  const picard::SeriesKernels k = picard::series_kernels(sample(real), {12, 1e-300});
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const double phi = oracle::integral(real, kGrid.node_x(j)).real();
    r = std::max({r, std::abs(k.c_f.node(0, j) - std::cosh(phi)), std::abs(k.s_f.node(0, j) - std::sinh(phi))});
  }
  at_most("3", "scalar sinh/cosh identities, series order 12", r, 1e-9);
}

void series_vs_integrator() {
  double err = 0.0;
  for (const Fn& f : coefficients()) {
    const Trajectory t = sample(f);
    const picard::SeriesKernels k = picard::series_kernels(t, {15, 1e-300});
    const antidiagonal::FundamentalPair pair = antidiagonal::fundamental_pair(t);
    err = std::max({err, max_abs_diff(k.c_f, pair.c_f), max_abs_diff(k.s_f, pair.s_f)});
  }
  at_most("4", "series kernels (order 15) vs integrator kernels", err, 1e-8);
}

void rotation_symmetry() {
  const cplx u0{0.4, -0.7};
  double err = 0.0;
  for (const Fn& f : coefficients()) {
    const Trajectory ft = sample(f);
    const Trajectory u = solve_antilinear({ft, std::nullopt, kI * u0});
    const Trajectory v = solve_antilinear({ft, std::nullopt, u0}, Sign::minus);
    for (std::size_t k = 0; k < u.size(); ++k) err = std::max(err, std::abs(v[k] + kI * u[k]));
  }
  at_most("5", "rotation symmetry f -> -f via u -> -i u(i u0)", err, 1e-12);
}

void forced_symmetry() {
  double err = 0.0;
  for (const Fn& f : coefficients()) {
    const Trajectory ft = sample(f);
    const Trajectory g1 = map(ft, [](cplx z) { return 0.5 * z * z + cplx{0.1, -0.3}; });
    const Trajectory g2 = map(g1, [](cplx z) { return kI * std::conj(z); });
    const cplx w{0.7, 0.2};
    const Trajectory u = antidiagonal::solve_nonhomogeneous({ft, antidiagonal::Forcing{g1, g2}, {w, kI * std::conj(w)}});
    for (std::size_t k = 0; k < u.size(); ++k) err = std::max(err, std::abs(u.at(1, k) - kI * std::conj(u.at(0, k))));
  }
  at_most("6", "forced solution U2 = i conj(U1)", err, 1e-10);
}

CoefficientFunction real_fn(std::function<double(double)> v, std::function<double(double)> d) {
  return CoefficientFunction([v](double x) { return cplx{v(x), 0.0}; }, [d](double x) { return cplx{d(x), 0.0}; });
}

double schrodinger_error(const CoefficientFunction& a, const std::function<double(double)>& exact, std::size_t steps) {
  const Grid g(1.0, steps);
  const reductions::ReducedSolution s = reductions::solve_reduced(reductions::reduce_schrodinger({a, 0.0, 1.0, g}));
  double err = 0.0;
  for (std::size_t j = 0; j < g.node_count(); ++j) err = std::max(err, std::abs(s.physical.node(0, j) - exact(g.node_x(j))));
  return err;
}

void schrodinger_constant() {
  const CoefficientFunction a = real_fn([](double) { return 4.0; }, [](double) { return 0.0; });
  const auto exact = [](double x) { return std::sin(2.0 * x) / 2.0; };
  const double e1 = schrodinger_error(a, exact, 1000), e2 = schrodinger_error(a, exact, 2000);
  at_most("7a", "Schrodinger a = 4 vs sin(2x)/2, h = 1e-3", e1, 1e-8);
  // a = 4 reduces to a constant-phase problem with zero coupling, so both errors sit at roundoff.
  at_least("7b", "Schrodinger a = 4 error reduction factor for h -> h/2", e1 / e2, 12.0);
}

void helmholtz() {
  using namespace reductions;
  const CoefficientFunction one = real_fn([](double) { return 1.0; }, [](double) { return 0.0; });
  const ReducedSolution s = solve_reduced(reduce_helmholtz({one, one, one, 0.0, 0.0, kGrid}));
  double err = 0.0;
  for (std::size_t j = 0; j <= kSteps; ++j)
    err = std::max(err, std::abs(s.physical.node(0, j) - (1.0 - std::cos(kGrid.node_x(j)))));
  at_most("8a", "Helmholtz alpha = beta = source = 1 vs 1 - cos x", err, 1e-8);

  const auto alpha = [](double x) { return 1.0 + 0.5 * x; };
  const auto beta = [](double x) { return 2.0 + x * x; };
  const auto source = [](double x) { return std::cos(x); };
  const HelmholtzInput in{real_fn(alpha, [](double) { return 0.5; }), real_fn(beta, [](double x) { return 2.0 * x; }),
                          CoefficientFunction([source](double x) { return cplx{source(x), 0.0}; }), 0.3, -0.1, kGrid};
  const Trajectory u = solve_reduced(reduce_helmholtz(in)).physical;
  // State (u, alpha u').
  const std::vector<V2> ref = oracle::system(
      [&](double x) { return M2{0.0, 1.0 / alpha(x), -beta(x), 0.0}; },
      [&](double x) { return V2{0.0, source(x)}; }, {0.3, alpha(0.0) * -0.1}, 1.0, kSteps);
  double var = 0.0;
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const double x = kGrid.node_x(j);
    var = std::max({var, std::abs(u.node(0, j) - ref[j][0]), std::abs(u.node(1, j) - ref[j][1] / alpha(x))});
  }
  at_most("8b", "Helmholtz variable coefficients vs direct integration", var, 1e-6);
}

void zakharov_shabat() {
  double err = 0.0;
  for (double xi : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const reductions::ZakharovShabatInput in{CoefficientFunction::constant(1.0), xi, {1.0, 0.0}, kGrid};
    err = std::max(err, mat_error(reductions::zs_transfer_matrix(in), oracle::expm({-kI * xi, 1.0, 1.0, kI * xi}, 1.0)));
  }
  at_most("9", "Zakharov-Shabat q = 1 transfer matrix vs exp(M), 5 values of xi", err, 1e-8);
}

M2 km_matrix(double k, double s) { return {-k - s, s, -s, k + s}; }

void kubelka_munk() {
  using namespace reductions;
  const auto solve = [](const KubelkaMunkInput& in) { return solve_reduced(reduce_kubelka_munk(in)).physical; };

  const Trajectory nil = solve({CoefficientFunction::constant(0.0), CoefficientFunction::constant(0.5), {1.0, 0.0}, kGrid});
  double e0 = 0.0;
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const double x = kGrid.node_x(j);
    e0 = std::max({e0, std::abs(nil.node(0, j) - (1.0 - 0.5 * x)), std::abs(nil.node(1, j) + 0.5 * x)});
  }
  at_most("10a", "Kubelka-Munk K = 0, S = 0.5 exact (nilpotent)", e0, 1e-10);

  const Vec2 f0{1.0, 0.3};
  const Trajectory con = solve({CoefficientFunction::constant(0.2), CoefficientFunction::constant(0.5), f0, kGrid});
  double e1 = 0.0;
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const V2 ref = oracle::mul(oracle::expm(km_matrix(0.2, 0.5), kGrid.node_x(j)), {f0[0], f0[1]});
    e1 = std::max({e1, std::abs(con.node(0, j) - ref[0]), std::abs(con.node(1, j) - ref[1])});
  }
  at_most("10b", "Kubelka-Munk K = 0.2, S = 0.5 vs matrix exponential", e1, 1e-8);

  const auto k = [](double x) { return 0.1 + 0.05 * x; };
  const auto s = [](double x) { return 0.3 * std::exp(-x); };
  const Trajectory var = solve({CoefficientFunction([k](double x) { return cplx{k(x)}; }),
                                CoefficientFunction([s](double x) { return cplx{s(x)}; }), {1.0, 0.2}, kGrid});
  const std::vector<V2> ref = oracle::system([&](double x) { return km_matrix(k(x), s(x)); }, {}, {1.0, 0.2}, 1.0, kSteps);
  at_most("10c", "Kubelka-Munk variable coefficients vs direct integration", node_error(var, ref), 1e-6);
}

void strong_condition() {
  const Fn s = [](double x) { return cplx{std::exp(-2.0 * x)}; };
  const antidiagonal::GeneralSystem system{CoefficientFunction::constant(1.0).sample(kGrid),
                                           CoefficientFunction::constant(0.0).sample(kGrid),
                                           CoefficientFunction::constant(1.0).sample(kGrid), sample(s), {1.0, 0.5}};
  const antidiagonal::StrongCheck check = antidiagonal::check_strong_condition(system);
  double err = std::numeric_limits<double>::infinity();
  if (check.holds) {
    const Trajectory u = antidiagonal::solve_strong_explicit(system, *check.c1);
    err = node_error(u, oracle::system([&](double x) { return M2{1.0, 1.0, s(x), 0.0}; }, {}, {1.0, 0.5}, 1.0, kSteps));
  }
  at_most("11", "strong-condition explicit cosh/sinh solution vs direct integration", err, 1e-7);
}

void convergence_order() {
  // u'' + k/(1+x)^2 u = 0 is an Euler equation: u = sqrt(1+x) sin(w ln(1+x)) / w, w^2 = k - 1/4.
  const double w = 10.0, k = w * w + 0.25;
  const CoefficientFunction a = real_fn([k](double x) { return k / ((1.0 + x) * (1.0 + x)); },
                                        [k](double x) { return -2.0 * k / ((1.0 + x) * (1.0 + x) * (1.0 + x)); });
  const auto exact = [w](double x) { return std::sqrt(1.0 + x) * std::sin(w * std::log1p(x)) / w; };
  const double e1 = schrodinger_error(a, exact, 500), e2 = schrodinger_error(a, exact, 1000),
               e3 = schrodinger_error(a, exact, 2000);
  const double order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
  at_least("12", "Schrodinger pipeline observed order, h = 2e-3, 1e-3, 5e-4", order, 3.8);
}

}  // namespace

int main() {
  determinant_invariant();
  pair_vs_direct();
  scalar_identities();
  series_vs_integrator();
  rotation_symmetry();
  forced_symmetry();
  schrodinger_constant();
  helmholtz();
  zakharov_shabat();
  kubelka_munk();
  strong_condition();
  convergence_order();
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
