#include <immintrin.h>

#include <algorithm>

#include "kernels_impl.hpp"

namespace antilinear::kernels::avx2 {

namespace {

struct Pair {
  __m256d re, im;
};

// Four interleaved complex values -> separate re/im vectors (lane order 0,2,1,3; undone by interleave()).
inline Pair deinterleave(const double* src) {
  const __m256d v0 = _mm256_loadu_pd(src);
  const __m256d v1 = _mm256_loadu_pd(src + 4);
  return {_mm256_unpacklo_pd(v0, v1), _mm256_unpackhi_pd(v0, v1)};
}

inline void interleave(double* dst, __m256d re, __m256d im) {
  _mm256_storeu_pd(dst, _mm256_unpacklo_pd(re, im));
  _mm256_storeu_pd(dst + 4, _mm256_unpackhi_pd(re, im));
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

}  // namespace

void antilinear_rk4(const AntilinearBatch& batch, double* p, double* q) {
  const std::size_t stride = batch.stride;
  const __m256d h = _mm256_set1_pd(batch.h);
  const __m256d h2 = _mm256_set1_pd(batch.h / 2.0);
  const __m256d h6 = _mm256_set1_pd(batch.h / 6.0);
  const __m256d h8 = _mm256_set1_pd(batch.h / 8.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d two = _mm256_set1_pd(2.0);
  const double* fr = batch.f_re.data();
  const double* fi = batch.f_im.data();
  const double* gr = batch.g_re.data();
  const double* gi = batch.g_im.data();

  for (std::size_t l = 0; l < stride; l += kLaneWidth) {
    const __m256d s = _mm256_loadu_pd(batch.sign.data() + l);
    auto dp = [&](std::size_t k, __m256d a, __m256d b) {
      const std::size_t at = k * stride + l;
      const __m256d t = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(fr + at), a), _mm256_mul_pd(_mm256_loadu_pd(fi + at), b));
      return _mm256_add_pd(_mm256_mul_pd(s, t), _mm256_loadu_pd(gr + at));
    };
    auto dq = [&](std::size_t k, __m256d a, __m256d b) {
      const std::size_t at = k * stride + l;
      const __m256d t = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(fi + at), a), _mm256_mul_pd(_mm256_loadu_pd(fr + at), b));
      return _mm256_add_pd(_mm256_mul_pd(s, t), _mm256_loadu_pd(gi + at));
    };
    auto step = [](__m256d y, __m256d scale, __m256d k) { return _mm256_add_pd(y, _mm256_mul_pd(scale, k)); };
    auto combine = [&](__m256d k1, __m256d k2, __m256d k3, __m256d k4) {
      return _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(k1, _mm256_mul_pd(two, k2)), _mm256_mul_pd(two, k3)), k4);
    };

    __m256d y0 = _mm256_loadu_pd(batch.p0.data() + l);
    __m256d z0 = _mm256_loadu_pd(batch.q0.data() + l);
    __m256d d0 = dp(0, y0, z0);
    __m256d e0 = dq(0, y0, z0);
    _mm256_storeu_pd(p + l, y0);
    _mm256_storeu_pd(q + l, z0);
    for (std::size_t j = 0; j < batch.steps; ++j) {
      const std::size_t k = 2 * j;
      const __m256d k1p = d0, k1q = e0;
      const __m256d y2 = step(y0, h2, k1p), z2 = step(z0, h2, k1q);
      const __m256d k2p = dp(k + 1, y2, z2), k2q = dq(k + 1, y2, z2);
      const __m256d y3 = step(y0, h2, k2p), z3 = step(z0, h2, k2q);
      const __m256d k3p = dp(k + 1, y3, z3), k3q = dq(k + 1, y3, z3);
      const __m256d y4 = step(y0, h, k3p), z4 = step(z0, h, k3q);
      const __m256d k4p = dp(k + 2, y4, z4), k4q = dq(k + 2, y4, z4);
      const __m256d y1 = step(y0, h6, combine(k1p, k2p, k3p, k4p));
      const __m256d z1 = step(z0, h6, combine(k1q, k2q, k3q, k4q));
      const __m256d d1 = dp(k + 2, y1, z1);
      const __m256d e1 = dq(k + 2, y1, z1);
      const __m256d pm = _mm256_add_pd(_mm256_mul_pd(half, _mm256_add_pd(y0, y1)), _mm256_mul_pd(h8, _mm256_sub_pd(d0, d1)));
      const __m256d qm = _mm256_add_pd(_mm256_mul_pd(half, _mm256_add_pd(z0, z1)), _mm256_mul_pd(h8, _mm256_sub_pd(e0, e1)));
      _mm256_storeu_pd(p + (k + 1) * stride + l, pm);
      _mm256_storeu_pd(q + (k + 1) * stride + l, qm);
      _mm256_storeu_pd(p + (k + 2) * stride + l, y1);
      _mm256_storeu_pd(q + (k + 2) * stride + l, z1);
      y0 = y1;
      z0 = z1;
      d0 = d1;
      e0 = e1;
    }
  }
}

void recombine(const double* a, const double* b, double* half_sum, double* half_diff, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  const std::size_t total = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= total; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(half_sum + i, _mm256_mul_pd(half, _mm256_add_pd(va, vb)));
    _mm256_storeu_pd(half_diff + i, _mm256_mul_pd(half, _mm256_sub_pd(va, vb)));
  }
  scalar::recombine(a + i, b + i, half_sum + i, half_diff + i, (total - i) / 2);
}

double determinant_drift(const double* c, const double* s, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d worst = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Pair vc = deinterleave(c + 2 * i);
    const Pair vs = deinterleave(s + 2 * i);
    const __m256d cc = _mm256_add_pd(_mm256_mul_pd(vc.re, vc.re), _mm256_mul_pd(vc.im, vc.im));
    const __m256d ss = _mm256_add_pd(_mm256_mul_pd(vs.re, vs.re), _mm256_mul_pd(vs.im, vs.im));
    const __m256d d = _mm256_sub_pd(_mm256_sub_pd(cc, ss), one);
    worst = _mm256_max_pd(worst, _mm256_andnot_pd(sign_bit, d));
  }
  return std::max(hmax(worst), scalar::determinant_drift(c + 2 * i, s + 2 * i, n - i));
}

void apply_pair(const double* c, const double* s, const double* u0, double* u1, double* u2, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(u0[0]);
  const __m256d ai = _mm256_set1_pd(u0[1]);
  const __m256d br = _mm256_set1_pd(u0[2]);
  const __m256d bi = _mm256_set1_pd(u0[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Pair vc = deinterleave(c + 2 * i);
    const Pair vs = deinterleave(s + 2 * i);
    const __m256d u1r = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(vc.re, ar), _mm256_mul_pd(vc.im, ai)),
                                      _mm256_sub_pd(_mm256_mul_pd(vs.re, br), _mm256_mul_pd(vs.im, bi)));
    const __m256d u1i = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vc.re, ai), _mm256_mul_pd(vc.im, ar)),
                                      _mm256_add_pd(_mm256_mul_pd(vs.re, bi), _mm256_mul_pd(vs.im, br)));
    const __m256d u2r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vs.re, ar), _mm256_mul_pd(vs.im, ai)),
                                      _mm256_add_pd(_mm256_mul_pd(vc.re, br), _mm256_mul_pd(vc.im, bi)));
    const __m256d u2i = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(vs.re, ai), _mm256_mul_pd(vs.im, ar)),
                                      _mm256_sub_pd(_mm256_mul_pd(vc.re, bi), _mm256_mul_pd(vc.im, br)));
    interleave(u1 + 2 * i, u1r, u1i);
    interleave(u2 + 2 * i, u2r, u2i);
  }
  scalar::apply_pair(c + 2 * i, s + 2 * i, u0, u1 + 2 * i, u2 + 2 * i, n - i);
}

}  // namespace antilinear::kernels::avx2
