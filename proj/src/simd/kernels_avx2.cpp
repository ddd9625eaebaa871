// AVX2 variants of the statevector kernels. This translation unit is built
// with -mavx2 and must only be entered after a runtime CPU check.
//
// A __m256d holds two complex amplitudes: [re0, im0, re1, im1]. Elementwise
// kernels perform the same multiplications and additions as the scalar
// reference in the same association order, so their results are identical
// bit-for-bit. Reductions differ only in summation order.

#include <immintrin.h>

#include "qns/simd/kernels.hpp"

namespace qns::simd {
namespace {

// (c * a) for two interleaved complex lanes, with cr/ci broadcast per lane.
inline __m256d cmul(__m256d a, __m256d cr, __m256d ci) {
  const __m256d swapped = _mm256_permute_pd(a, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(a, cr), _mm256_mul_pd(swapped, ci));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void negate_marked_avx2(double* amps, const std::uint8_t* marked, std::size_t dim) {
  std::size_t i = 0;
  for (; i + 2 <= dim; i += 2) {
    if ((marked[i] | marked[i + 1]) == 0) continue;
    const double s0 = marked[i] ? -0.0 : 0.0;
    const double s1 = marked[i + 1] ? -0.0 : 0.0;
    const __m256d sign = _mm256_set_pd(s1, s1, s0, s0);
    double* p = amps + 2 * i;
    _mm256_storeu_pd(p, _mm256_xor_pd(_mm256_loadu_pd(p), sign));
  }
  for (; i < dim; ++i) {
    if (marked[i]) {
      amps[2 * i] = -amps[2 * i];
      amps[2 * i + 1] = -amps[2 * i + 1];
    }
  }
}

void reflect_about_mean_avx2(double* amps, std::size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= dim; i += 2) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(amps + 2 * i));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum_re = lanes[0] + lanes[2];
  double sum_im = lanes[1] + lanes[3];
  for (; i < dim; ++i) {
    sum_re += amps[2 * i];
    sum_im += amps[2 * i + 1];
  }
  const double two_mean_re = 2.0 * (sum_re / static_cast<double>(dim));
  const double two_mean_im = 2.0 * (sum_im / static_cast<double>(dim));
  const __m256d two_mean = _mm256_set_pd(two_mean_im, two_mean_re, two_mean_im, two_mean_re);
  i = 0;
  for (; i + 2 <= dim; i += 2) {
    double* p = amps + 2 * i;
    _mm256_storeu_pd(p, _mm256_sub_pd(two_mean, _mm256_loadu_pd(p)));
  }
  for (; i < dim; ++i) {
    amps[2 * i] = two_mean_re - amps[2 * i];
    amps[2 * i + 1] = two_mean_im - amps[2 * i + 1];
  }
}

void multiply_elementwise_avx2(double* amps, const double* phases, std::size_t dim) {
  std::size_t i = 0;
  for (; i + 2 <= dim; i += 2) {
    double* p = amps + 2 * i;
    const __m256d a = _mm256_loadu_pd(p);
    const __m256d ph = _mm256_loadu_pd(phases + 2 * i);
    const __m256d pr = _mm256_movedup_pd(ph);
    const __m256d pi = _mm256_permute_pd(ph, 0b1111);
    _mm256_storeu_pd(p, cmul(a, pr, pi));
  }
  for (; i < dim; ++i) {
    const double ar = amps[2 * i];
    const double ai = amps[2 * i + 1];
    const double pr = phases[2 * i];
    const double pi = phases[2 * i + 1];
    amps[2 * i] = ar * pr - ai * pi;
    amps[2 * i + 1] = ai * pr + ar * pi;
  }
}

void apply_gate_avx2(double* amps, std::size_t dim, std::size_t qubit, const Gate2x2& g) {
  if (dim < 2) return;
  if (qubit == 0) {
    // Both members of a pair share one register: [a0, a1].
    const __m256d c0r = _mm256_set_pd(g.m[4], g.m[4], g.m[0], g.m[0]);
    const __m256d c0i = _mm256_set_pd(g.m[5], g.m[5], g.m[1], g.m[1]);
    const __m256d c1r = _mm256_set_pd(g.m[6], g.m[6], g.m[2], g.m[2]);
    const __m256d c1i = _mm256_set_pd(g.m[7], g.m[7], g.m[3], g.m[3]);
    for (std::size_t i = 0; i < dim; i += 2) {
      double* p = amps + 2 * i;
      const __m256d v = _mm256_loadu_pd(p);
      const __m256d a0 = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d a1 = _mm256_permute2f128_pd(v, v, 0x11);
      _mm256_storeu_pd(p, _mm256_add_pd(cmul(a0, c0r, c0i), cmul(a1, c1r, c1i)));
    }
    return;
  }
  const std::size_t stride = std::size_t{1} << qubit;
  const __m256d m00r = _mm256_set1_pd(g.m[0]), m00i = _mm256_set1_pd(g.m[1]);
  const __m256d m01r = _mm256_set1_pd(g.m[2]), m01i = _mm256_set1_pd(g.m[3]);
  const __m256d m10r = _mm256_set1_pd(g.m[4]), m10i = _mm256_set1_pd(g.m[5]);
  const __m256d m11r = _mm256_set1_pd(g.m[6]), m11i = _mm256_set1_pd(g.m[7]);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; off += 2) {
      double* p0 = amps + 2 * (base + off);
      double* p1 = amps + 2 * (base + off + stride);
      const __m256d a0 = _mm256_loadu_pd(p0);
      const __m256d a1 = _mm256_loadu_pd(p1);
      const __m256d n0 = _mm256_add_pd(cmul(a0, m00r, m00i), cmul(a1, m01r, m01i));
      const __m256d n1 = _mm256_add_pd(cmul(a0, m10r, m10i), cmul(a1, m11r, m11i));
      _mm256_storeu_pd(p0, n0);
      _mm256_storeu_pd(p1, n1);
    }
  }
}

double weighted_norm_avx2(const double* amps, const double* weights, std::size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    const __m256d a = _mm256_loadu_pd(amps + 2 * i);
    const __m256d b = _mm256_loadu_pd(amps + 2 * i + 4);
    // (p0, p2, p1, p3)
    const __m256d p = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    const __m256d w = _mm256_permute4x64_pd(_mm256_loadu_pd(weights + i), 0b11011000);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, w));
  }
  double total = hsum(acc);
  for (; i < dim; ++i) {
    const double p = amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
    total += p * weights[i];
  }
  return total;
}

double norm_squared_avx2(const double* amps, std::size_t dim) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= dim; i += 2) {
    const __m256d a = _mm256_loadu_pd(amps + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(a, a));
  }
  double total = hsum(acc);
  for (; i < dim; ++i) {
    total += amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
  }
  return total;
}

void probabilities_avx2(const double* amps, double* out, std::size_t dim) {
  std::size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    const __m256d a = _mm256_loadu_pd(amps + 2 * i);
    const __m256d b = _mm256_loadu_pd(amps + 2 * i + 4);
    const __m256d p = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(p, 0b11011000));
  }
  for (; i < dim; ++i) {
    out[i] = amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{
      "avx2",
      &negate_marked_avx2,
      &reflect_about_mean_avx2,
      &multiply_elementwise_avx2,
      &apply_gate_avx2,
      &weighted_norm_avx2,
      &norm_squared_avx2,
      &probabilities_avx2,
  };
  return table;
}

}  // namespace qns::simd
