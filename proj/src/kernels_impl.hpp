#pragma once

#include <cstddef>

#include "antilinear/kernels.hpp"

namespace antilinear::kernels {

#define ANTILINEAR_KERNEL_DECLS                                                                        \
  void antilinear_rk4(const AntilinearBatch& batch, double* p, double* q);                            \
  void recombine(const double* a, const double* b, double* half_sum, double* half_diff, std::size_t n); \
  double determinant_drift(const double* c, const double* s, std::size_t n);                          \
  void apply_pair(const double* c, const double* s, const double* u0, double* u1, double* u2, std::size_t n);

// Complex arrays are passed as interleaved (re, im) doubles; n counts complex values.
namespace scalar {
ANTILINEAR_KERNEL_DECLS
}

#if defined(ANTILINEAR_HAVE_AVX2)
namespace avx2 {
ANTILINEAR_KERNEL_DECLS
}
#endif

#undef ANTILINEAR_KERNEL_DECLS

}  // namespace antilinear::kernels
