#include "qns/simd/kernels.hpp"

namespace qns::simd {
namespace {

void negate_marked_scalar(double* amps, const std::uint8_t* marked, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    if (marked[i]) {
      amps[2 * i] = -amps[2 * i];
      amps[2 * i + 1] = -amps[2 * i + 1];
    }
  }
}

void reflect_about_mean_scalar(double* amps, std::size_t dim) {
  double sum_re = 0.0;
  double sum_im = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    sum_re += amps[2 * i];
    sum_im += amps[2 * i + 1];
  }
  const double two_mean_re = 2.0 * (sum_re / static_cast<double>(dim));
  const double two_mean_im = 2.0 * (sum_im / static_cast<double>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    amps[2 * i] = two_mean_re - amps[2 * i];
    amps[2 * i + 1] = two_mean_im - amps[2 * i + 1];
  }
}

void multiply_elementwise_scalar(double* amps, const double* phases, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    const double ar = amps[2 * i];
    const double ai = amps[2 * i + 1];
    const double pr = phases[2 * i];
    const double pi = phases[2 * i + 1];
    amps[2 * i] = ar * pr - ai * pi;
    amps[2 * i + 1] = ai * pr + ar * pi;
  }
}

void apply_gate_scalar(double* amps, std::size_t dim, std::size_t qubit, const Gate2x2& g) {
  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      double* a0 = amps + 2 * (base + off);
      double* a1 = amps + 2 * (base + off + stride);
      const double r0 = a0[0], i0 = a0[1];
      const double r1 = a1[0], i1 = a1[1];
      // m * a: (mr*ar - mi*ai, mr*ai + mi*ar)
      const double p00r = g.m[0] * r0 - g.m[1] * i0;
      const double p00i = g.m[0] * i0 + g.m[1] * r0;
      const double p01r = g.m[2] * r1 - g.m[3] * i1;
      const double p01i = g.m[2] * i1 + g.m[3] * r1;
      const double p10r = g.m[4] * r0 - g.m[5] * i0;
      const double p10i = g.m[4] * i0 + g.m[5] * r0;
      const double p11r = g.m[6] * r1 - g.m[7] * i1;
      const double p11i = g.m[6] * i1 + g.m[7] * r1;
      a0[0] = p00r + p01r;
      a0[1] = p00i + p01i;
      a1[0] = p10r + p11r;
      a1[1] = p10i + p11i;
    }
  }
}

double weighted_norm_scalar(const double* amps, const double* weights, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double p = amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
    acc += p * weights[i];
  }
  return acc;
}

double norm_squared_scalar(const double* amps, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
  }
  return acc;
}

void probabilities_scalar(const double* amps, double* out, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = amps[2 * i] * amps[2 * i] + amps[2 * i + 1] * amps[2 * i + 1];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",
      &negate_marked_scalar,
      &reflect_about_mean_scalar,
      &multiply_elementwise_scalar,
      &apply_gate_scalar,
      &weighted_norm_scalar,
      &norm_squared_scalar,
      &probabilities_scalar,
  };
  return table;
}

}  // namespace qns::simd
