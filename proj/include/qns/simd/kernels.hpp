#pragma once

// Data-parallel inner loops for the statevector simulator.
//
// Every kernel exists as a scalar reference implementation and, when the
// build and the host CPU allow it, as an AVX2 variant. The active table is
// picked once at first use; QNS_SIMD=scalar in the environment forces the
// reference path.
//
// Amplitudes are passed as interleaved (re, im) doubles, which is the
// layout of a contiguous std::complex<double> array.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace qns::simd {

/// Row-major 2x2 complex matrix, interleaved: m00.re, m00.im, m01.re, ...
struct Gate2x2 {
  double m[8];
};

struct KernelTable {
  std::string_view name;

  // a[i] = -a[i] wherever marked[i] != 0.
  void (*negate_marked)(double* amps, const std::uint8_t* marked, std::size_t dim);

  // a[i] = 2 * mean(a) - a[i].
  void (*reflect_about_mean)(double* amps, std::size_t dim);

  // a[i] *= phase[i] (complex elementwise product).
  void (*multiply_elementwise)(double* amps, const double* phases, std::size_t dim);

  // Applies a 2x2 complex matrix to every amplitude pair differing in `qubit`.
  void (*apply_gate)(double* amps, std::size_t dim, std::size_t qubit, const Gate2x2& gate);

  // Sum of |a[i]|^2 * weight[i].
  double (*weighted_norm)(const double* amps, const double* weights, std::size_t dim);

  // Sum of |a[i]|^2.
  double (*norm_squared)(const double* amps, std::size_t dim);

  // out[i] = |a[i]|^2.
  void (*probabilities)(const double* amps, double* out, std::size_t dim);
};

const KernelTable& scalar_kernels();

/// Null when the AVX2 variants were not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table used by the simulator.
const KernelTable& active_kernels();

/// Overrides the dispatch choice (tests and benchmarks). Passing null
/// restores automatic selection.
void force_kernels(const KernelTable* table);

}  // namespace qns::simd
