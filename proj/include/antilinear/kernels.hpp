#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "antilinear/grid.hpp"

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2 variant;
// the variant is chosen once at runtime from CPUID. Both variants perform the same
// IEEE operations in the same order (no FMA contraction), so results are bit-identical.
namespace antilinear::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();

/// Pins the dispatch to `isa` (throws InputError if unsupported); nullopt restores auto-detection.
void force_isa(std::optional<Isa> isa);

/// Lane width the batch layout is padded to.
inline constexpr std::size_t kLaneWidth = 4;

/// Independent realified antilinear problems sharing one grid:
///   p' = s (fr p + fi q) + gr,   q' = s (fi p - fr q) + gi
/// Arrays are refined-node-major: element (k, lane) lives at k * stride + lane.
struct AntilinearBatch {
  AntilinearBatch(std::size_t lanes, const Grid& grid);

  std::size_t lanes;
  std::size_t stride;
  std::size_t steps;
  double h;
  std::vector<double> f_re, f_im, g_re, g_im;
  std::vector<double> sign, p0, q0;

  std::size_t index(std::size_t k, std::size_t lane) const noexcept { return k * stride + lane; }
};

/// Classical RK4 on every lane. `p` and `q` receive all refined nodes (layout as the batch):
/// full nodes from the RK4 steps, half nodes from cubic Hermite interpolation.
void antilinear_rk4(const AntilinearBatch& batch, std::span<double> p, std::span<double> q);

/// half_sum = (a + b) / 2, half_diff = (a - b) / 2.
void recombine(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> half_sum,
               std::span<cplx> half_diff);

/// max_k | |c_k|^2 - |s_k|^2 - 1 |. Inputs must be finite.
double determinant_drift(std::span<const cplx> c, std::span<const cplx> s);

/// u1 = c a + s b,  u2 = conj(s) a + conj(c) b  for the constant vector (a, b).
void apply_pair(std::span<const cplx> c, std::span<const cplx> s, Vec2 u0, std::span<cplx> u1,
                std::span<cplx> u2);

}  // namespace antilinear::kernels
