#include "antilinear/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "antilinear/antilinear.hpp"
#include "antilinear/error.hpp"
#include "antilinear/kernels.hpp"
#include "antilinear/numerics.hpp"

namespace antilinear::reductions {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

enum class Bound { positive, non_negative, any };

// Tabulates a coefficient that must be real (and optionally positive) on the refined grid.
Trajectory real_profile(const CoefficientFunction& fn, const Grid& grid, const char* name, Bound sign) {
  Trajectory t = fn.sample(grid, name);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double x = grid.refined_x(k);
    if (std::abs(t[k].imag()) > 1e-12 * (1.0 + std::abs(t[k].real())))
      throw InputError(std::string(name) + " must be real-valued; found imaginary part at x = " + std::to_string(x) +
                       " (split complex data into real and imaginary problems)");
    if (sign == Bound::positive && !(t[k].real() > 0.0))
      throw InputError(std::string(name) + " must be > 0; violated at x = " + std::to_string(x));
    if (sign == Bound::non_negative && !(t[k].real() >= 0.0))
      throw InputError(std::string(name) + " must be >= 0; violated at x = " + std::to_string(x));
    t[k] = {t[k].real(), 0.0};
  }
  return t;
}

// Analytic derivative when supplied, else a centered difference with half-step h/2 if allowed.
Trajectory derivative_profile(const CoefficientFunction& fn, const Grid& grid, const char* name, bool allow_fd,
                              DerivativeSource& source) {
  if (fn.has_derivative()) {
    source = DerivativeSource::analytic;
    Trajectory d = fn.sample_derivative(grid, name);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = {d[k].real(), 0.0};
    return d;
  }
  if (!allow_fd)
    throw InputError(std::string(name) +
                     " needs an analytic derivative (supply it, or enable the finite-difference fallback)");
  source = DerivativeSource::finite_difference;
  const double delta = grid.step() / 2.0;
  std::vector<cplx> d(grid.refined_count());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double x = grid.refined_x(k);
    d[k] = {((fn(x + delta) - fn(x - delta)) / (2.0 * delta)).real(), 0.0};
    if (!std::isfinite(d[k].real()))
      throw InputError(std::string(name) + "' (finite difference) is not finite at x = " + std::to_string(x));
  }
  return Trajectory(grid, std::move(d));
}

Vec2 real_pair(Vec2 v, const char* what) {
  for (const cplx& z : v)
    if (z.imag() != 0.0) throw InputError(std::string(what) + " must be real");
  return v;
}

Trajectory diag_pair(const Trajectory& first, const Trajectory& second) {
  Trajectory out(first.grid(), 2);
  for (std::size_t k = 0; k < first.size(); ++k) {
    out.at(0, k) = first[k];
    out.at(1, k) = second[k];
  }
  return out;
}

Trajectory exp_of(const Trajectory& t, cplx factor) {
  return map(t, [factor](cplx z) { return std::exp(factor * z); });
}

Trajectory conj_of(const Trajectory& t) {
  return map(t, [](cplx z) { return std::conj(z); });
}

// Fourth-order differences on the refined grid (five-point centered, one-sided near the ends), so the
// consistency residual is not dominated by O(h^2) differencing error.
std::vector<cplx> derivative4(const Trajectory& t, std::size_t component) {
  const std::span<const cplx> y = t.component(component);
  const std::size_t n = y.size();
  const double d = t.grid().step() / 2.0;
  std::vector<cplx> out(n);
  if (n < 5) {
    const Trajectory du = numerics::differentiate(t, component);
    for (std::size_t k = 0; k < n; ++k) out[k] = du[k];
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= 2 && k + 2 < n) {
      out[k] = (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * d);
    } else if (k < 2) {
      const std::size_t j = k;
      const cplx fwd = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * d);
      const cplx one = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * d);
      out[k] = j == 0 ? fwd : one;
    } else {
      const std::size_t m = n - 1;
      const cplx bwd = (25.0 * y[m] - 48.0 * y[m - 1] + 36.0 * y[m - 2] - 16.0 * y[m - 3] + 3.0 * y[m - 4]) / (12.0 * d);
      const cplx one = (3.0 * y[m] + 10.0 * y[m - 1] - 18.0 * y[m - 2] + 6.0 * y[m - 3] - y[m - 4]) / (12.0 * d);
      out[k] = k == m ? bwd : one;
    }
  }
  return out;
}

ReducedSolution finish(const ReducedProblem& rp, Trajectory w, Diagnostics diag, const SolveOptions& options) {
  const Grid& grid = rp.reduced.grid();
  const std::size_t n = grid.refined_count();
  const InverseRecipe& inv = rp.inverse;

  Trajectory v(grid, 2);
  for (std::size_t k = 0; k < n; ++k) {
    v.at(0, k) = inv.w_to_v.at(0, k) * w.at(0, k);
    v.at(1, k) = inv.w_to_v.at(1, k) * w.at(1, k);
  }
  Trajectory u = v;
  if (inv.p_inverse) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 r = (*inv.p_inverse) * Vec2{v.at(0, k), v.at(1, k)};
      u.at(0, k) = r[0];
      u.at(1, k) = r[1];
    }
  }
  Trajectory phys = u;
  if (inv.value_scale && inv.derivative_scale) {
    for (std::size_t k = 0; k < n; ++k) {
      phys.at(0, k) = (*inv.value_scale)[k] * u.at(0, k);
      phys.at(1, k) = (*inv.derivative_scale)[k] * u.at(1, k);
    }
    // The second component is an independent estimate of u'; compare it with differences of u,
    // measured in the scale of U2 (u' / sqrt(a) or alpha u').
    const std::vector<cplx> du = derivative4(phys, 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(u.at(1, k) - du[k] / (*inv.derivative_scale)[k]));
    diag.consistency_residual = worst;
  } else if (rp.context == Context::kubelka_munk) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max({worst, std::abs(phys.at(0, k).imag()), std::abs(phys.at(1, k).imag())});
    diag.consistency_residual = worst;
  }
  if (diag.consistency_residual > options.consistency_tolerance)
    diag.warnings.push_back("consistency residual " + std::to_string(diag.consistency_residual) + " exceeds " +
                            std::to_string(options.consistency_tolerance));
  phys.require_finite("reconstructed solution");

  ReducedSolution out{std::move(phys), std::move(diag), std::nullopt};
  if (options.keep_intermediates) out.intermediates = Intermediates{std::move(w), std::move(v), std::move(u)};
  return out;
}

Diagnostics base_diagnostics(const ReducedProblem& rp) {
  Diagnostics d;
  d.derivative_source = rp.derivative_source;
  if (rp.derivative_source == DerivativeSource::finite_difference)
    d.warnings.push_back("coefficient derivative taken by finite differences");
  return d;
}

}  // namespace

std::string_view context_name(Context c) {
  switch (c) {
    case Context::schrodinger: return "schrodinger";
    case Context::helmholtz: return "helmholtz";
    case Context::zakharov_shabat: return "zakharov-shabat";
    case Context::kubelka_munk: return "kubelka-munk";
  }
  return "?";
}

std::optional<Context> parse_context(std::string_view name) {
  for (Context c : {Context::schrodinger, Context::helmholtz, Context::zakharov_shabat, Context::kubelka_munk})
    if (context_name(c) == name) return c;
  return std::nullopt;
}

Mat2 p_matrix() { return {kI * kInvSqrt2, kInvSqrt2, kInvSqrt2, kI * kInvSqrt2}; }
Mat2 p_matrix_inverse() { return {-kI * kInvSqrt2, kInvSqrt2, kInvSqrt2, -kI * kInvSqrt2}; }

ReducedProblem reduce_schrodinger(const SchrodingerInput& in) {
  const Grid& grid = in.grid;
  DerivativeSource source{};
  const Trajectory a = real_profile(in.a, grid, "a", Bound::positive);
  const Trajectory da = derivative_profile(in.a, grid, "a", in.allow_fd_derivative, source);
  const Trajectory sqrt_a = map(a, [](cplx z) { return cplx{std::sqrt(z.real()), 0.0}; });
  const Trajectory phase = numerics::cumulative_integral(sqrt_a);

  // c0 = i a' / (4a) exp(-2i int sqrt(a)),   b0 = i sqrt(a) - a' / (4a).
  std::vector<cplx> c0(grid.refined_count()), b0(grid.refined_count());
  for (std::size_t k = 0; k < c0.size(); ++k) {
    const double ratio = da[k].real() / (4.0 * a[k].real());
    c0[k] = kI * ratio * std::exp(-2.0 * kI * phase[k]);
    b0[k] = kI * sqrt_a[k] - ratio;
  }
  const Trajectory int_b0 = numerics::cumulative_integral(Trajectory(grid, std::move(b0)));

  const double s0 = sqrt_a[0].real();
  const Vec2 w0{kInvSqrt2 * (kI * in.u0 + in.u1 / s0), kInvSqrt2 * (in.u0 + kI * in.u1 / s0)};

  ReducedProblem rp{{Trajectory(grid, std::move(c0)), std::nullopt, w0},
                    {diag_pair(exp_of(int_b0, 1.0), exp_of(conj_of(int_b0), 1.0)), p_matrix_inverse(),
                     map(a, [](cplx) { return cplx{1.0, 0.0}; }), sqrt_a},
                    Context::schrodinger,
                    source};
  return rp;
}

ReducedProblem reduce_helmholtz(const HelmholtzInput& in) {
  const Grid& grid = in.grid;
  if (in.u0.imag() != 0.0 || in.u1.imag() != 0.0)
    throw InputError("Helmholtz initial data must be real (solve real and imaginary parts separately)");
  DerivativeSource sa{}, sb{};
  const Trajectory alpha = real_profile(in.alpha, grid, "alpha", Bound::positive);
  const Trajectory beta = real_profile(in.beta, grid, "beta", Bound::positive);
  const Trajectory source = real_profile(in.source, grid, "source", Bound::any);
  const Trajectory dalpha = derivative_profile(in.alpha, grid, "alpha", in.allow_fd_derivative, sa);
  const Trajectory dbeta = derivative_profile(in.beta, grid, "beta", in.allow_fd_derivative, sb);

  const std::size_t n = grid.refined_count();
  std::vector<cplx> ratio(n), b1(n), log_rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double al = alpha[k].real(), be = beta[k].real();
    const double dab = dalpha[k].real() * be + al * dbeta[k].real();
    ratio[k] = {std::sqrt(be / al), 0.0};
    log_rate[k] = {dab / (4.0 * al * be), 0.0};
    b1[k] = kI * ratio[k] + log_rate[k];
  }
  const Trajectory phase = numerics::cumulative_integral(Trajectory(grid, ratio));
  const Trajectory int_b1 = numerics::cumulative_integral(Trajectory(grid, std::move(b1)));

  Trajectory c1(grid, 1), g1(grid, 1), g2(grid, 1), value_scale(grid, 1), derivative_scale(grid, 1);
  for (std::size_t k = 0; k < n; ++k) {
    c1[k] = kI * log_rate[k] * std::exp(-2.0 * kI * phase[k]);
    g1[k] = source[k] * kInvSqrt2 * std::exp(-int_b1[k]);
    g2[k] = kI * std::conj(g1[k]);
    value_scale[k] = 1.0 / std::sqrt(alpha[k].real() * beta[k].real());
    derivative_scale[k] = 1.0 / alpha[k].real();
  }
  const double root_ab0 = std::sqrt(alpha[0].real() * beta[0].real());
  const cplx w1 = kInvSqrt2 * (kI * root_ab0 * in.u0 + alpha[0].real() * in.u1);

  ReducedProblem rp{{std::move(c1), antidiagonal::Forcing{std::move(g1), std::move(g2)}, {w1, kI * std::conj(w1)}},
                    {diag_pair(exp_of(int_b1, 1.0), exp_of(conj_of(int_b1), 1.0)), p_matrix_inverse(),
                     std::move(value_scale), std::move(derivative_scale)},
                    Context::helmholtz,
                    (sa == DerivativeSource::finite_difference || sb == DerivativeSource::finite_difference)
                        ? DerivativeSource::finite_difference
                        : DerivativeSource::analytic};
  return rp;
}

ReducedProblem reduce_zakharov_shabat(const ZakharovShabatInput& in) {
  const Grid& grid = in.grid;
  if (!std::isfinite(in.xi)) throw InputError("spectral parameter xi must be finite");
  const Trajectory q = in.q.sample(grid, "q");
  Trajectory f(grid, 1);
  Trajectory w_to_v(grid, 2);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double x = grid.refined_x(k);
    f[k] = q[k] * std::polar(1.0, 2.0 * in.xi * x);
    w_to_v.at(0, k) = std::polar(1.0, -in.xi * x);
    w_to_v.at(1, k) = std::polar(1.0, in.xi * x);
  }
  return {{std::move(f), std::nullopt, in.v0}, {std::move(w_to_v), std::nullopt, std::nullopt, std::nullopt},
          Context::zakharov_shabat};
}

ReducedProblem reduce_kubelka_munk(const KubelkaMunkInput& in) {
  const Grid& grid = in.grid;
  const Vec2 f0 = real_pair(in.f0, "initial fluxes");
  const Trajectory k_abs = real_profile(in.absorption, grid, "K", Bound::non_negative);
  const Trajectory s_sc = real_profile(in.scattering, grid, "S", Bound::non_negative);
  const Trajectory int_s = numerics::cumulative_integral(s_sc);

  // c2 = -i (K + S) exp(-2i int S).
  Trajectory c2(grid, 1), w_to_v(grid, 2);
  for (std::size_t k = 0; k < c2.size(); ++k) {
    c2[k] = -kI * (k_abs[k] + s_sc[k]) * std::exp(-2.0 * kI * int_s[k]);
    w_to_v.at(0, k) = std::exp(kI * int_s[k]);
    w_to_v.at(1, k) = std::exp(-kI * int_s[k]);
  }
  return {{std::move(c2), std::nullopt, p_matrix() * f0},
          {std::move(w_to_v), p_matrix_inverse(), std::nullopt, std::nullopt},
          Context::kubelka_munk};
}

ReducedSolution solve_reduced(const ReducedProblem& rp, const SolveOptions& options) {
  return std::move(solve_reduced_batch(std::span(&rp, 1), options).front());
}

std::vector<ReducedSolution> solve_reduced_batch(std::span<const ReducedProblem> problems,
                                                 const SolveOptions& options) {
  using antidiagonal::PairMethod;
  std::vector<std::optional<ReducedSolution>> results(problems.size());

  // Homogeneous integrator-route problems on a common grid go through one batched Z+/Z- pass.
  std::vector<std::size_t> batched;
  std::vector<AntilinearProblem> lanes;
  std::vector<antilinear::Sign> signs;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const ReducedProblem& rp = problems[i];
    if (rp.reduced.forcing || options.method != PairMethod::integrator) continue;
    if (!lanes.empty() && !(rp.reduced.grid() == lanes.front().grid())) continue;
    batched.push_back(i);
    lanes.push_back({rp.reduced.f, std::nullopt, 1.0});
    lanes.push_back({rp.reduced.f, std::nullopt, 1.0});
    signs.push_back(antilinear::Sign::plus);
    signs.push_back(antilinear::Sign::minus);
  }
  if (!lanes.empty()) {
    const std::vector<Trajectory> z = solve_antilinear_batch(lanes, signs);
    for (std::size_t b = 0; b < batched.size(); ++b) {
      const ReducedProblem& rp = problems[batched[b]];
      antidiagonal::FundamentalPair pair{Trajectory(rp.reduced.grid(), 1), Trajectory(rp.reduced.grid(), 1)};
      kernels::recombine(z[2 * b].samples(), z[2 * b + 1].samples(), pair.c_f.component(0), pair.s_f.component(0));
      Diagnostics diag = base_diagnostics(rp);
      diag.determinant_drift = kernels::determinant_drift(pair.c_f.samples(), pair.s_f.samples());
      if (!(diag.determinant_drift <= antidiagonal::kDriftWarning))
        diag.warnings.push_back("determinant drift " + std::to_string(diag.determinant_drift));
      results[batched[b]] = finish(rp, antidiagonal::apply_pair(pair, rp.reduced.u0), std::move(diag), options);
    }
  }

  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (results[i]) continue;
    const ReducedProblem& rp = problems[i];
    Diagnostics diag = base_diagnostics(rp);
    Trajectory w = [&] {
      if (rp.reduced.forcing) {
        if (options.method == PairMethod::series)
          diag.warnings.push_back("series route has no forced variant; used the Z+/Z- integrator route");
        diag.compatibility_residual = antidiagonal::compatibility_residual(rp.reduced);
        return antidiagonal::solve_nonhomogeneous(rp.reduced);
      }
      antidiagonal::FundamentalPair pair = antidiagonal::fundamental_pair(rp.reduced.f, options.method, options.series);
      diag.determinant_drift = pair.determinant_drift;
      diag.warnings.insert(diag.warnings.end(), pair.warnings.begin(), pair.warnings.end());
      return antidiagonal::apply_pair(pair, rp.reduced.u0);
    }();
    results[i] = finish(rp, std::move(w), std::move(diag), options);
  }

  std::vector<ReducedSolution> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

Trajectory schrodinger_reference(const SchrodingerInput& in) {
  const Trajectory a = real_profile(in.a, in.grid, "a", Bound::any);
  std::vector<Mat2> m(a.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = {0.0, 1.0, -a[k], 0.0};
  return numerics::integrate_linear_system(m, {}, {in.u0, in.u1}, in.grid);
}

Trajectory helmholtz_reference(const HelmholtzInput& in) {
  const Trajectory alpha = real_profile(in.alpha, in.grid, "alpha", Bound::positive);
  const Trajectory beta = real_profile(in.beta, in.grid, "beta", Bound::any);
  const Trajectory source = real_profile(in.source, in.grid, "source", Bound::any);
  // y = (u, alpha u'):  y1' = y2 / alpha,  y2' = source - beta y1.
  std::vector<Mat2> m(alpha.size());
  std::vector<Vec2> g(alpha.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    m[k] = {0.0, 1.0 / alpha[k], -beta[k], 0.0};
    g[k] = {0.0, source[k]};
  }
  Trajectory y = numerics::integrate_linear_system(m, g, {in.u0, alpha[0] * in.u1}, in.grid);
  for (std::size_t k = 0; k < y.size(); ++k) y.at(1, k) /= alpha[k];
  return y;
}

Trajectory zakharov_shabat_reference(const ZakharovShabatInput& in) {
  const Trajectory q = in.q.sample(in.grid, "q");
  std::vector<Mat2> m(q.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = {-kI * in.xi, q[k], std::conj(q[k]), kI * in.xi};
  return numerics::integrate_linear_system(m, {}, in.v0, in.grid);
}

Trajectory kubelka_munk_reference(const KubelkaMunkInput& in) {
  const Trajectory k_abs = real_profile(in.absorption, in.grid, "K", Bound::any);
  const Trajectory s_sc = real_profile(in.scattering, in.grid, "S", Bound::any);
  std::vector<Mat2> m(k_abs.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const cplx ks = k_abs[k] + s_sc[k];
    m[k] = {-ks, s_sc[k], -s_sc[k], ks};
  }
  return numerics::integrate_linear_system(m, {}, in.f0, in.grid);
}

Mat2 zs_transfer_matrix(const ZakharovShabatInput& in, const SolveOptions& options) {
  const ReducedProblem rp = reduce_zakharov_shabat(in);
  const antidiagonal::FundamentalPair pair =
      antidiagonal::fundamental_pair(rp.reduced.f, options.method, options.series);
  const cplx c = pair.c_f.back();
  const cplx s = pair.s_f.back();
  const cplx d1 = rp.inverse.w_to_v.back(0);
  const cplx d2 = rp.inverse.w_to_v.back(1);
  return {d1 * c, d1 * s, d2 * std::conj(s), d2 * std::conj(c)};
}

}  // namespace antilinear::reductions
