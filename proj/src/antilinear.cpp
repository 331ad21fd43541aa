#include "antilinear/antilinear.hpp"

#include <cmath>

#include "antilinear/error.hpp"
#include "antilinear/kernels.hpp"

namespace antilinear {

AntilinearProblem AntilinearProblem::sample(const CoefficientFunction& f, const std::optional<CoefficientFunction>& g,
                                            cplx u0, const Grid& grid) {
  AntilinearProblem p{f.sample(grid, "f"), std::nullopt, u0};
  if (g) p.g = g->sample(grid, "g");
  return p;
}

void AntilinearProblem::validate() const {
  if (f.components() != 1) throw InputError("coefficient f must have one component");
  if (g && (g->components() != 1 || !(g->grid() == f.grid())))
    throw InputError("forcing g must be a single-component profile on the same grid as f");
  if (!std::isfinite(u0.real()) || !std::isfinite(u0.imag())) throw InputError("initial value is not finite");
  auto check = [](const Trajectory& t, const char* name) {
    for (std::size_t k = 0; k < t.size(); ++k)
      if (!std::isfinite(t[k].real()) || !std::isfinite(t[k].imag()))
        throw InputError(std::string(name) + " is not finite at x = " + std::to_string(t.grid().refined_x(k)));
  };
  check(f, "f");
  if (g) check(*g, "g");
}

std::vector<Trajectory> solve_antilinear_batch(std::span<const AntilinearProblem> problems,
                                               std::span<const Sign> signs) {
  if (problems.empty()) return {};
  if (signs.size() != problems.size()) throw InputError("one sign per problem is required");
  const Grid grid = problems.front().grid();
  for (const auto& p : problems) {
    p.validate();
    if (!(p.grid() == grid)) throw InputError("batched problems must share one grid");
  }

  kernels::AntilinearBatch batch(problems.size(), grid);
  const std::size_t refined = grid.refined_count();
  for (std::size_t l = 0; l < problems.size(); ++l) {
    const AntilinearProblem& p = problems[l];
    batch.sign[l] = static_cast<double>(static_cast<int>(signs[l]));
    batch.p0[l] = p.u0.real();
    batch.q0[l] = p.u0.imag();
    for (std::size_t k = 0; k < refined; ++k) {
      const std::size_t at = batch.index(k, l);
      batch.f_re[at] = p.f[k].real();
      batch.f_im[at] = p.f[k].imag();
      if (p.g) {
        batch.g_re[at] = (*p.g)[k].real();
        batch.g_im[at] = (*p.g)[k].imag();
      }
    }
  }

  std::vector<double> pr(refined * batch.stride), qr(pr.size());
  kernels::antilinear_rk4(batch, pr, qr);

  std::vector<Trajectory> out;
  out.reserve(problems.size());
  for (std::size_t l = 0; l < problems.size(); ++l) {
    std::vector<cplx> u(refined);
    for (std::size_t k = 0; k < refined; ++k) {
      const std::size_t at = batch.index(k, l);
      u[k] = {pr[at], qr[at]};
      if (!std::isfinite(pr[at]) || !std::isfinite(qr[at]))
        throw SolverError("antilinear solve produced a non-finite state", grid.refined_x(k));
    }
    out.emplace_back(grid, std::move(u));
  }
  return out;
}

Trajectory solve_antilinear(const AntilinearProblem& problem, Sign sign) {
  return std::move(solve_antilinear_batch(std::span(&problem, 1), std::span(&sign, 1)).front());
}

cplx solve_constant_closed_form(cplx f, cplx u0, double x) {
  if (f == cplx{}) throw InputError("closed form requires a nonzero constant coefficient");
  const double theta = std::arg(f);
  const double mag = std::abs(f);
  const cplx rot = std::polar(1.0, theta / 2.0);
  const cplx w0 = std::conj(rot) * u0;
  return rot * cplx{w0.real() * std::exp(mag * x), w0.imag() * std::exp(-mag * x)};
}

ZPair solve_z_pair(const Trajectory& f) {
  const std::vector<AntilinearProblem> problems{{f, std::nullopt, 1.0}, {f, std::nullopt, 1.0}};
  const Sign signs[2] = {Sign::plus, Sign::minus};
  auto sol = solve_antilinear_batch(problems, signs);
  return {std::move(sol[0]), std::move(sol[1])};
}

ZPair solve_forced_z_pair(const Trajectory& f, const Trajectory& g1, cplx u1_0) {
  const std::vector<AntilinearProblem> problems{{f, g1, u1_0}, {f, g1, u1_0}};
  const Sign signs[2] = {Sign::plus, Sign::minus};
  auto sol = solve_antilinear_batch(problems, signs);
  return {std::move(sol[0]), std::move(sol[1])};
}

}  // namespace antilinear
