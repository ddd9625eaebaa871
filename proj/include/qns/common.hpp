#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qns {

/// Every stochastic component draws from this engine so a seed fixes a run.
using Rng = std::mt19937_64;

/// Default ceiling on simulated register width; QNS_MAX_QUBITS overrides it.
inline constexpr std::size_t kDefaultMaxQubits = 16;

/// Effective qubit ceiling, read from QNS_MAX_QUBITS on each call.
std::size_t max_qubits();

/// Invalid experiment configuration. The harness maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A method ran but could not produce what it promised (search exhausted,
/// optimizer diverged). The harness maps it to exit code 3.
class MethodFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform draw in [0, 1) that only depends on the engine state.
inline double uniform01(Rng& rng) {
  // 53 random mantissa bits; std::generate_canonical is allowed to return 1.0
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qns
