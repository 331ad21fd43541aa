#include "antilinear/picard.hpp"

#include <cmath>

#include "antilinear/error.hpp"
#include "antilinear/numerics.hpp"

namespace antilinear::picard {

namespace {

void check_options(const SeriesOptions& o) {
  if (o.max_order < 1) throw InputError("series order must be >= 1");
  if (!(o.tol > 0.0)) throw InputError("series tolerance must be > 0");
}

// One nesting level: int_0^x f(t) conj(term(t)) dt.
Trajectory nest(const Trajectory& f, const Trajectory& term) {
  return numerics::cumulative_integral(map(f, term, [](cplx a, cplx b) { return a * std::conj(b); }));
}

void accumulate(Trajectory& sum, const Trajectory& term) {
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += term[k];
}

void require_finite_term(const Trajectory& t, int depth) {
  for (std::size_t k = 0; k < t.size(); ++k)
    if (!std::isfinite(t[k].real()) || !std::isfinite(t[k].imag()))
      throw SolverError("series term of depth " + std::to_string(depth) + " is not finite", t.grid().refined_x(k));
}

// Shared driver: even-depth terms come from the chain seeded with `even_seed`,
// odd-depth terms from the chain seeded with `odd_seed`.
SeriesKernels build(const Trajectory& f, const Trajectory& even_seed, const Trajectory& odd_seed,
                    const SeriesOptions& options) {
  check_options(options);
  if (f.components() != 1) throw InputError("series coefficient must have one component");
  f.require_finite("series coefficient");

  SeriesKernels out{even_seed, Trajectory(f.grid(), 1)};
  out.slow_convergence = coefficient_mass(f) > 3.0;

  const bool shared = &even_seed == &odd_seed;
  Trajectory even_term = even_seed;
  Trajectory odd_term = odd_seed;
  for (int depth = 1; depth <= options.max_order; ++depth) {
    // The two chains coincide when seeded identically; advance only one of them.
    even_term = nest(f, even_term);
    if (!shared) odd_term = nest(f, odd_term);
    const Trajectory& term = (depth % 2 == 1) ? (shared ? even_term : odd_term) : even_term;
    require_finite_term(term, depth);
    accumulate(depth % 2 == 1 ? out.s_f : out.c_f, term);

    const double norm = sup_norm(term.samples());
    out.term_norms.push_back(norm);
    out.order = depth;
    out.last_term_norm = norm;
    if (norm < options.tol) {
      out.stopped_by = StopReason::tolerance;
      return out;
    }
  }
  out.stopped_by = StopReason::max_order;
  return out;
}

}  // namespace

double coefficient_mass(const Trajectory& f) {
  const Trajectory mag = map(f, [](cplx z) { return cplx{std::abs(z), 0.0}; });
  return numerics::cumulative_integral(mag).back().real();
}

double term_bound(double mass, int k) { return std::exp(k * std::log(mass) - std::lgamma(k + 1.0)); }

SeriesKernels series_kernels(const Trajectory& f, const SeriesOptions& options) {
  const Trajectory one = map(f, [](cplx) { return cplx{1.0, 0.0}; });
  return build(f, one, one, options);
}

SeriesKernels forced_series_kernels(const Trajectory& f, const Trajectory& h, const SeriesOptions& options) {
  if (!(f.grid() == h.grid()) || h.components() != 1)
    throw InputError("forcing profile h must be single-component on the coefficient grid");
  h.require_finite("forcing profile h");
  // C_{f,h}: even iterates starting from h. S_{f,h}: odd iterates starting from conj(h),
  // so that the innermost integrand of every S-term is f h.
  const Trajectory conj_h = map(h, [](cplx z) { return std::conj(z); });
  return build(f, h, conj_h, options);
}

IdentityResiduals scalar_identity_residuals(const Trajectory& f, int order) {
  if (order < 1) throw InputError("series order must be >= 1");
  const Trajectory integral = numerics::cumulative_integral(f);
  Trajectory term = map(f, [](cplx) { return cplx{1.0, 0.0}; });
  Trajectory odd(f.grid(), 1);
  Trajectory even = term;
  for (int depth = 1; depth <= order; ++depth) {
    term = numerics::cumulative_integral(map(f, term, [](cplx a, cplx b) { return a * b; }));
    accumulate(depth % 2 == 1 ? odd : even, term);
  }
  IdentityResiduals r;
  for (std::size_t k = 0; k < f.size(); ++k) {
    r.sinh = std::max(r.sinh, std::abs(odd[k] - std::sinh(integral[k])));
    r.cosh = std::max(r.cosh, std::abs(even[k] - std::cosh(integral[k])));
  }
  return r;
}

IntertwiningResiduals intertwining_residuals(const SeriesKernels& kernels, const Trajectory& f) {
  const Trajectory dc = numerics::differentiate(kernels.c_f);
  const Trajectory ds = numerics::differentiate(kernels.s_f);
  IntertwiningResiduals r;
  for (std::size_t k = 0; k < f.size(); ++k) {
    r.c = std::max(r.c, std::abs(dc[k] - f[k] * std::conj(kernels.s_f[k])));
    r.s = std::max(r.s, std::abs(ds[k] - f[k] * std::conj(kernels.c_f[k])));
  }
  return r;
}

}  // namespace antilinear::picard
