#include <atomic>
#include <string>

#include "antilinear/error.hpp"
#include "kernels_impl.hpp"

namespace antilinear::kernels {

namespace {

// -1 = not resolved yet.
std::atomic<int> g_active{-1};

Isa detect() {
#if defined(ANTILINEAR_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

const double* raw(std::span<const cplx> v) { return reinterpret_cast<const double*>(v.data()); }
double* raw(std::span<cplx> v) { return reinterpret_cast<double*>(v.data()); }

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  return detect() == Isa::avx2;
}

Isa active_isa() {
  int v = g_active.load(std::memory_order_relaxed);
  if (v < 0) {
    v = static_cast<int>(detect());
    g_active.store(v, std::memory_order_relaxed);
  }
  return static_cast<Isa>(v);
}

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    g_active.store(-1, std::memory_order_relaxed);
    return;
  }
  if (!isa_supported(*isa)) throw InputError("instruction set " + std::string(isa_name(*isa)) + " is not available");
  g_active.store(static_cast<int>(*isa), std::memory_order_relaxed);
}

AntilinearBatch::AntilinearBatch(std::size_t lane_count, const Grid& grid)
    : lanes(lane_count),
      stride((lane_count + kLaneWidth - 1) / kLaneWidth * kLaneWidth),
      steps(grid.steps()),
      h(grid.step()),
      f_re(grid.refined_count() * stride),
      f_im(f_re.size()),
      g_re(f_re.size()),
      g_im(f_re.size()),
      sign(stride, 1.0),
      p0(stride),
      q0(stride) {
  if (lane_count == 0) throw InputError("batch needs at least one lane");
}

void antilinear_rk4(const AntilinearBatch& batch, std::span<double> p, std::span<double> q) {
  const std::size_t need = (2 * batch.steps + 1) * batch.stride;
  if (p.size() != need || q.size() != need) throw InputError("output buffers do not match the batch layout");
#if defined(ANTILINEAR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::antilinear_rk4(batch, p.data(), q.data());
#endif
  scalar::antilinear_rk4(batch, p.data(), q.data());
}

void recombine(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> half_sum,
               std::span<cplx> half_diff) {
  const std::size_t n = a.size();
  if (b.size() != n || half_sum.size() != n || half_diff.size() != n) throw InputError("recombine: size mismatch");
#if defined(ANTILINEAR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::recombine(raw(a), raw(b), raw(half_sum), raw(half_diff), n);
#endif
  scalar::recombine(raw(a), raw(b), raw(half_sum), raw(half_diff), n);
}

double determinant_drift(std::span<const cplx> c, std::span<const cplx> s) {
  if (c.size() != s.size()) throw InputError("determinant_drift: size mismatch");
#if defined(ANTILINEAR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::determinant_drift(raw(c), raw(s), c.size());
#endif
  return scalar::determinant_drift(raw(c), raw(s), c.size());
}

void apply_pair(std::span<const cplx> c, std::span<const cplx> s, Vec2 u0, std::span<cplx> u1,
                std::span<cplx> u2) {
  const std::size_t n = c.size();
  if (s.size() != n || u1.size() != n || u2.size() != n) throw InputError("apply_pair: size mismatch");
  const double packed[4] = {u0[0].real(), u0[0].imag(), u0[1].real(), u0[1].imag()};
#if defined(ANTILINEAR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::apply_pair(raw(c), raw(s), packed, raw(u1), raw(u2), n);
#endif
  scalar::apply_pair(raw(c), raw(s), packed, raw(u1), raw(u2), n);
}

}  // namespace antilinear::kernels
