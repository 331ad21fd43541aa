#include "antilinear/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "antilinear/antidiagonal.hpp"
#include "antilinear/antilinear.hpp"
#include "antilinear/error.hpp"
#include "antilinear/numerics.hpp"
#include "antilinear/picard.hpp"
#include "antilinear/reductions.hpp"

namespace antilinear::verify {

namespace {

constexpr cplx kI{0.0, 1.0};

const Grid& grid() {
  static const Grid g(1.0, 1000);
  return g;
}

struct Sample {
  const char* name;
  CoefficientFunction fn;
};

// Smooth coefficients on [0, 1]; each has int_0^1 |f| <= 1.
std::vector<Sample> samples() {
  return {
      {"constant", CoefficientFunction::constant({0.6, 0.3})},
      {"polynomial", CoefficientFunction([](double x) { return cplx{0.5 * x * x + 0.2, -0.3 * x}; })},
      {"trigonometric", CoefficientFunction([](double x) { return cplx{0.8 * std::sin(3.0 * x), 0.4 * std::cos(2.0 * x)}; })},
      {"mixed", CoefficientFunction([](double x) { return std::exp(kI * x) * (0.3 + 0.2 * x); })},
      {"gaussian", CoefficientFunction([](double x) { return cplx{0.9, -0.2} * std::exp(-4.0 * (x - 0.5) * (x - 0.5)); })},
  };
}

class Collector {
 public:
  explicit Collector(std::string suite) : suite_(std::move(suite)) {}
  void add(std::string name, double value, double tolerance) {
    results_.push_back({suite_, std::move(name), value, tolerance, value <= tolerance});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string suite_;
  std::vector<CheckResult> results_;
};

std::vector<CheckResult> antilinear_suite() {
  Collector c("antilinear");
  const cplx u0{0.4, -0.7};
  double rotation = 0.0;
  for (const Sample& s : samples()) {
    const AntilinearProblem p = AntilinearProblem::sample(s.fn, std::nullopt, kI * u0, grid());
    const Trajectory u = solve_antilinear(p);
    // v = -i u solves v' = -f conj(v), v(0) = u0.
    const Trajectory v = solve_antilinear({p.f, std::nullopt, u0}, Sign::minus);
    for (std::size_t k = 0; k < u.size(); ++k) rotation = std::max(rotation, std::abs(v[k] + kI * u[k]));
  }
  c.add("rotation symmetry f -> -f", rotation, 1e-12);

  const cplx f{0.0, 1.0};
  const Trajectory u = solve_antilinear(AntilinearProblem::sample(CoefficientFunction::constant(f), std::nullopt, 1.0, grid()));
  double closed = 0.0;
  for (std::size_t j = 0; j < grid().node_count(); ++j)
    closed = std::max(closed, std::abs(u.node(0, j) - solve_constant_closed_form(f, 1.0, grid().node_x(j))));
  c.add("constant coefficient closed form", closed, 1e-10);
  return c.take();
}

std::vector<CheckResult> picard_suite() {
  Collector c("picard");
  double identity = 0.0, agreement = 0.0, intertwining = 0.0;
  for (const Sample& s : samples()) {
    const Trajectory f = s.fn.sample(grid());
    const picard::IdentityResiduals r = picard::scalar_identity_residuals(f, 12);
    identity = std::max({identity, r.sinh, r.cosh});

    const picard::SeriesKernels k = picard::series_kernels(f, {15, 1e-16});
    const antidiagonal::FundamentalPair pair = antidiagonal::fundamental_pair(f);
    agreement = std::max({agreement, max_abs_diff(k.c_f, pair.c_f), max_abs_diff(k.s_f, pair.s_f)});

    const picard::IntertwiningResiduals ir = picard::intertwining_residuals(k, f);
    intertwining = std::max({intertwining, ir.c, ir.s});
  }
  c.add("scalar sinh/cosh identities (order 12)", identity, 1e-9);
  c.add("series vs integrator kernels (order 15)", agreement, 1e-8);
  c.add("intertwining relations", intertwining, 1e-6);
  return c.take();
}

std::vector<CheckResult> antidiagonal_suite() {
  Collector c("antidiagonal");
  const Vec2 u0{cplx{0.3, 0.4}, cplx{-0.2, 0.9}};
  double drift = 0.0, oracle = 0.0, symmetry = 0.0, forced = 0.0;
  for (const Sample& s : samples()) {
    const Trajectory f = s.fn.sample(grid());
    const antidiagonal::FundamentalPair pair = antidiagonal::fundamental_pair(f);
    drift = std::max(drift, pair.determinant_drift);
    const Trajectory u = antidiagonal::apply_pair(pair, u0);
    oracle = std::max(oracle, max_abs_diff(u, antidiagonal::solve_with_reference({f, std::nullopt, u0})));

    const Trajectory g1 = map(f, [](cplx z) { return 0.5 * z * z + cplx{0.1, -0.3}; });
    const Trajectory g2 = map(g1, [](cplx z) { return kI * std::conj(z); });
    const cplx w{0.7, 0.2};
    const antidiagonal::AntidiagonalProblem problem{f, antidiagonal::Forcing{g1, g2}, {w, kI * std::conj(w)}};
    const Trajectory ref = antidiagonal::solve_with_reference(problem);
    for (std::size_t k = 0; k < ref.size(); ++k)
      symmetry = std::max(symmetry, std::abs(ref.at(1, k) - kI * std::conj(ref.at(0, k))));
    forced = std::max(forced, max_abs_diff(antidiagonal::solve_nonhomogeneous(problem), ref));
  }
  c.add("determinant |C|^2 - |S|^2 = 1", drift, 1e-7);
  c.add("fundamental pair vs direct integration", oracle, 1e-7);
  c.add("forced symmetry U2 = i conj(U1)", symmetry, 1e-10);
  c.add("forced route vs direct integration", forced, 1e-7);

  const Grid& g = grid();
  const CoefficientFunction one = CoefficientFunction::constant(1.0);
  antidiagonal::GeneralSystem system{one.sample(g), CoefficientFunction::constant(0.0).sample(g), one.sample(g),
                                     CoefficientFunction([](double x) { return cplx{std::exp(-2.0 * x), 0.0}; }).sample(g),
                                     {1.0, 0.5}};
  const antidiagonal::StrongCheck strong = antidiagonal::check_strong_condition(system);
  double explicit_error = std::numeric_limits<double>::infinity();
  if (strong.holds)
    explicit_error = max_abs_diff(antidiagonal::solve_strong_explicit(system, *strong.c1),
                                  antidiagonal::solve_general_reference(system));
  c.add("strong-condition explicit solution", explicit_error, 1e-7);
  return c.take();
}

std::vector<CheckResult> reductions_suite() {
  using namespace reductions;
  Collector c("reductions");
  const Grid& g = grid();

  {
    const CoefficientFunction a = CoefficientFunction([](double) { return cplx{4.0, 0.0}; },
                                                      [](double) { return cplx{0.0, 0.0}; });
    const ReducedSolution s = solve_reduced(reduce_schrodinger({a, 0.0, 1.0, g}));
    double err = 0.0;
    for (std::size_t k = 0; k < s.physical.size(); ++k)
      err = std::max(err, std::abs(s.physical.at(0, k) - std::sin(2.0 * g.refined_x(k)) / 2.0));
    c.add("Schrodinger a = 4 vs sin(2x)/2", err, 1e-8);
  }
  {
    const SchrodingerInput in{CoefficientFunction([](double x) { return cplx{2.0 + std::sin(x), 0.0}; },
                                                  [](double x) { return cplx{std::cos(x), 0.0}; }),
                              1.0, -0.5, g};
    const ReducedSolution s = solve_reduced(reduce_schrodinger(in));
    c.add("Schrodinger variable a vs reference", max_abs_diff(s.physical, schrodinger_reference(in)), 1e-6);
    c.add("Schrodinger internal consistency", s.diagnostics.consistency_residual, 1e-6);
  }
  {
    const HelmholtzInput in{CoefficientFunction([](double x) { return cplx{1.0 + 0.5 * x, 0.0}; },
                                                [](double) { return cplx{0.5, 0.0}; }),
                            CoefficientFunction([](double x) { return cplx{2.0 + x * x, 0.0}; },
                                                [](double x) { return cplx{2.0 * x, 0.0}; }),
                            CoefficientFunction([](double x) { return cplx{std::cos(x), 0.0}; }),
                            0.3, -0.1, g};
    const ReducedProblem rp = reduce_helmholtz(in);
    double compat = 0.0;
    for (std::size_t k = 0; k < rp.reduced.forcing->g1.size(); ++k) {
      const cplx g1 = rp.reduced.forcing->g1[k];
      compat = std::max(compat, std::abs(rp.reduced.forcing->g2[k] - kI * std::conj(g1)) / (1.0 + std::abs(g1)));
    }
    c.add("Helmholtz forcing compatibility", compat, 1e-14);
    c.add("Helmholtz variable coefficients vs reference",
          max_abs_diff(solve_reduced(rp).physical, helmholtz_reference(in)), 1e-6);
  }
  {
    const CoefficientFunction one = CoefficientFunction([](double) { return cplx{1.0, 0.0}; },
                                                        [](double) { return cplx{0.0, 0.0}; });
    const ReducedSolution s = solve_reduced(reduce_helmholtz({one, one, one, 0.0, 0.0, g}));
    double err = 0.0;
    for (std::size_t k = 0; k < s.physical.size(); ++k)
      err = std::max(err, std::abs(s.physical.at(0, k) - (1.0 - std::cos(g.refined_x(k)))));
    c.add("Helmholtz constant forcing vs 1 - cos x", err, 1e-8);
  }
  {
    const auto q = [](double x) { return cplx{1.0, 0.2 * x} / std::cosh(x - 0.5); };
    const double xi = 0.7, delta = 0.4;
    const ZakharovShabatInput in{CoefficientFunction(q), xi, {1.0, 0.0}, g};
    const ZakharovShabatInput shifted{CoefficientFunction([&](double x) { return q(x) * std::polar(1.0, -2.0 * delta * x); }),
                                      xi + delta, {1.0, 0.0}, g};
    const ReducedProblem a = reduce_zakharov_shabat(in);
    c.add("Zakharov-Shabat phase covariance", max_abs_diff(a.reduced.f, reduce_zakharov_shabat(shifted).reduced.f), 1e-13);
    c.add("Zakharov-Shabat vs reference", max_abs_diff(solve_reduced(a).physical, zakharov_shabat_reference(in)), 1e-7);
  }
  {
    const KubelkaMunkInput nil{CoefficientFunction::constant(0.0), CoefficientFunction::constant(0.5), {1.0, 0.0}, g};
    const ReducedSolution s = solve_reduced(reduce_kubelka_munk(nil));
    const double err = std::max(std::abs(s.physical.back(0) - 0.5), std::abs(s.physical.back(1) + 0.5));
    c.add("Kubelka-Munk nilpotent case", err, 1e-10);

    const KubelkaMunkInput var{CoefficientFunction([](double x) { return cplx{0.1 + 0.05 * x, 0.0}; }),
                               CoefficientFunction([](double x) { return cplx{0.3 * std::exp(-x), 0.0}; }),
                               {1.0, 0.2}, g};
    c.add("Kubelka-Munk variable coefficients vs reference",
          max_abs_diff(solve_reduced(reduce_kubelka_munk(var)).physical, kubelka_munk_reference(var)), 1e-6);
  }
  return c.take();
}

using SuiteFn = std::vector<CheckResult> (*)();

struct Suite {
  std::string_view name;
  SuiteFn run;
};

constexpr Suite kSuites[] = {
    {"antilinear", antilinear_suite},
    {"picard", picard_suite},
    {"antidiagonal", antidiagonal_suite},
    {"reductions", reductions_suite},
};

}  // namespace

std::vector<std::string_view> suite_names() {
  std::vector<std::string_view> out;
  for (const Suite& s : kSuites) out.push_back(s.name);
  return out;
}

std::vector<CheckResult> run_suite(std::string_view suite) {
  std::vector<CheckResult> out;
  bool found = false;
  for (const Suite& s : kSuites) {
    if (suite != "all" && suite != s.name) continue;
    found = true;
    std::vector<CheckResult> r = s.run();
    out.insert(out.end(), r.begin(), r.end());
  }
  if (!found) throw InputError("unknown verification suite '" + std::string(suite) + "'");
  return out;
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-13s %-50s %12s %10s  %s\n", "suite", "check", "value", "tol", "result");
  out += line;
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof line, "%-13s %-50s %12.3e %10.1e  %s\n", r.suite.c_str(), r.name.c_str(), r.value,
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

}  // namespace antilinear::verify
