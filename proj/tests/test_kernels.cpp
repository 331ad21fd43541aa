#include <doctest.h>

#include <cstring>
#include <random>

#include "antilinear/antilinear.hpp"
#include "antilinear/kernels.hpp"

using namespace antilinear;
using namespace antilinear::kernels;

namespace {

struct IsaGuard {
  ~IsaGuard() { force_isa(std::nullopt); }
};

bool bit_equal(std::span<const cplx> a, std::span<const cplx> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

AntilinearBatch random_batch(std::size_t lanes, const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  AntilinearBatch b(lanes, grid);
  for (std::size_t k = 0; k < grid.refined_count(); ++k) {
    for (std::size_t l = 0; l < lanes; ++l) {
      const std::size_t i = b.index(k, l);
      b.f_re[i] = u(rng);
      b.f_im[i] = u(rng);
      b.g_re[i] = u(rng);
      b.g_im[i] = u(rng);
    }
  }
  for (std::size_t l = 0; l < lanes; ++l) {
    b.sign[l] = l % 2 ? -1.0 : 1.0;
    b.p0[l] = u(rng);
    b.q0[l] = u(rng);
  }
  return b;
}

std::vector<cplx> random_cplx(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<cplx> v(n);
  for (cplx& z : v) z = {u(rng), u(rng)};
  return v;
}

}  // namespace

TEST_CASE("isa selection") {
  IsaGuard guard;
  CHECK(isa_supported(Isa::scalar));
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(isa_name(Isa::avx2) == "avx2");
  force_isa(std::nullopt);
  if (isa_supported(Isa::avx2)) CHECK(active_isa() == Isa::avx2);
}

TEST_CASE("batch layout pads lanes to the vector width") {
  const Grid g(1.0, 4);
  const AntilinearBatch b(5, g);
  CHECK(b.stride % kLaneWidth == 0);
  CHECK(b.stride >= 5);
  CHECK(b.f_re.size() == b.stride * g.refined_count());
}

TEST_CASE("scalar and avx2 kernels are bit-identical") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  IsaGuard guard;
  std::mt19937_64 rng(77);
  for (std::size_t lanes : {1u, 3u, 4u, 7u, 16u}) {
    const Grid g(1.3, 97);
    const AntilinearBatch batch = random_batch(lanes, g, rng);
    const std::size_t n = batch.stride * g.refined_count();
    std::vector<double> ps(n), qs(n), pv(n), qv(n);
    force_isa(Isa::scalar);
    antilinear_rk4(batch, ps, qs);
    force_isa(Isa::avx2);
    antilinear_rk4(batch, pv, qv);
    INFO("lanes = " << lanes);
    for (std::size_t k = 0; k < g.refined_count(); ++k)
      for (std::size_t l = 0; l < lanes; ++l) {
        const std::size_t i = batch.index(k, l);
        CHECK(std::memcmp(&ps[i], &pv[i], sizeof(double)) == 0);
        CHECK(std::memcmp(&qs[i], &qv[i], sizeof(double)) == 0);
      }
  }

  for (std::size_t n : {1u, 2u, 5u, 64u, 1001u}) {
    const std::vector<cplx> a = random_cplx(n, rng), b = random_cplx(n, rng);
    std::vector<cplx> s1(n), d1(n), s2(n), d2(n), u1(n), v1(n), u2(n), v2(n);
    force_isa(Isa::scalar);
    recombine(a, b, s1, d1);
    const double drift_s = determinant_drift(a, b);
    apply_pair(a, b, {cplx{0.3, -0.1}, cplx{1.2, 0.4}}, u1, v1);
    force_isa(Isa::avx2);
    recombine(a, b, s2, d2);
    const double drift_v = determinant_drift(a, b);
    apply_pair(a, b, {cplx{0.3, -0.1}, cplx{1.2, 0.4}}, u2, v2);
    INFO("n = " << n);
    CHECK(bit_equal(s1, s2));
    CHECK(bit_equal(d1, d2));
    CHECK(bit_equal(u1, u2));
    CHECK(bit_equal(v1, v2));
    CHECK(std::memcmp(&drift_s, &drift_v, sizeof(double)) == 0);
  }
}

TEST_CASE("kernel primitives against plain loops") {
  std::mt19937_64 rng(5);
  const std::size_t n = 37;
  const std::vector<cplx> c = random_cplx(n, rng), s = random_cplx(n, rng);
  std::vector<cplx> sum(n), diff(n), u1(n), u2(n);
  recombine(c, s, sum, diff);
  const Vec2 u0{cplx{0.5, 0.25}, cplx{-1.0, 2.0}};
  apply_pair(c, s, u0, u1, u2);
  double drift = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::abs(sum[k] - (c[k] + s[k]) / 2.0) <= 1e-15);
    CHECK(std::abs(diff[k] - (c[k] - s[k]) / 2.0) <= 1e-15);
    CHECK(std::abs(u1[k] - (c[k] * u0[0] + s[k] * u0[1])) <= 1e-14);
    CHECK(std::abs(u2[k] - (std::conj(s[k]) * u0[0] + std::conj(c[k]) * u0[1])) <= 1e-14);
    drift = std::max(drift, std::abs(std::norm(c[k]) - std::norm(s[k]) - 1.0));
  }
  CHECK(determinant_drift(c, s) == doctest::Approx(drift).epsilon(1e-14));
}

TEST_CASE("batched solves equal one-at-a-time solves") {
  const Grid g(1.0, 200);
  std::vector<AntilinearProblem> problems;
  std::vector<Sign> signs;
  for (int i = 0; i < 6; ++i) {
    const double w = 0.3 * i;
    problems.push_back(AntilinearProblem::sample(
        CoefficientFunction([w](double x) { return cplx{std::cos(w * x), 0.5 + w}; }),
        i % 2 ? std::optional(CoefficientFunction([w](double x) { return cplx{x, -w}; })) : std::nullopt,
        cplx{1.0, w}, g));
    signs.push_back(i % 3 ? Sign::plus : Sign::minus);
  }
  const std::vector<Trajectory> batch = solve_antilinear_batch(problems, signs);
  for (std::size_t i = 0; i < problems.size(); ++i)
    CHECK(bit_equal(batch[i].samples(), solve_antilinear(problems[i], signs[i]).samples()));
}
