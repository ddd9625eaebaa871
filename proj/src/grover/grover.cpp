#include "qns/grover/grover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qns/masknet/flat_mask.hpp"

namespace qns::grover {

std::size_t optimal_iterations(std::uint64_t search_space, std::uint64_t solutions) {
  if (solutions == 0 || solutions > search_space) {
    throw std::invalid_argument("optimal_iterations needs 1 <= k <= N");
  }
  const double t = std::numbers::pi / 4.0 *
                   std::sqrt(static_cast<double>(search_space) / static_cast<double>(solutions));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(t)));
}

double analytic_success_probability(std::uint64_t search_space, std::uint64_t solutions, std::size_t iterations) {
  const double theta = std::asin(std::sqrt(static_cast<double>(solutions) / static_cast<double>(search_space)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s;
}

qsim::StateVector grover_state(oracle::QueryOracle& oracle, std::size_t iterations) {
  qsim::StateVector state = qsim::uniform_superposition(oracle.qubits());
  for (std::size_t t = 0; t < iterations; ++t) {
    oracle.apply_phase(state);
    qsim::apply_diffusion(state);
  }
  return state;
}

GroverResult grover_search(oracle::QueryOracle& oracle, const GroverConfig& config) {
  if (config.max_restarts < 1) throw std::invalid_argument("max_restarts must be >= 1");
  const std::uint64_t n = oracle.search_space();
  std::size_t iterations = 0;
  if (config.iterations) {
    iterations = *config.iterations;
  } else {
    iterations = optimal_iterations(n, config.known_k.value_or(1));
  }

  Rng rng(config.seed);
  GroverResult result;
  result.iterations = iterations;
  result.seed = config.seed;
  const std::size_t calls_before = oracle.calls();
  for (std::size_t attempt = 0; attempt < config.max_restarts; ++attempt) {
    const qsim::StateVector state = grover_state(oracle, iterations);
    result.index = qsim::measure(state, rng);
    result.attempts = attempt + 1;
    result.measured_good = oracle.is_good(result.index);
    if (result.measured_good) break;
  }
  result.oracle_calls = oracle.calls() - calls_before;
  return result;
}

std::size_t unknown_k_budget(std::uint64_t search_space) {
  const double n = static_cast<double>(search_space);
  return static_cast<std::size_t>(std::ceil(3.0 * std::sqrt(n) * std::max(1.0, std::log2(n))));
}

GroverResult search_unknown_k(oracle::QueryOracle& oracle, std::uint64_t seed) {
  const std::uint64_t n = oracle.search_space();
  const std::size_t budget = unknown_k_budget(n);
  const auto cap = static_cast<std::size_t>(std::ceil(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n))));
  Rng rng(seed);
  GroverResult result;
  result.seed = seed;
  const std::size_t calls_before = oracle.calls();
  double m = 1.0;
  while (oracle.calls() - calls_before < budget) {
    const std::size_t upper = std::min(static_cast<std::size_t>(std::ceil(m)), cap);
    const std::size_t remaining = budget - (oracle.calls() - calls_before);
    // one call is reserved for verification
    const std::size_t t = std::min(static_cast<std::size_t>(rng() % (upper + 1)), remaining - 1);
    qsim::StateVector state = grover_state(oracle, t);
    result.index = qsim::measure(state, rng);
    result.iterations = t;
    result.attempts += 1;
    result.measured_good = oracle.is_good(result.index);
    if (result.measured_good) break;
    m *= kUnknownKGrowth;
  }
  result.oracle_calls = oracle.calls() - calls_before;
  return result;
}

nlohmann::json result_to_json(const GroverResult& result, std::size_t n_qubits) {
  masknet::MaskLayout layout(n_qubits);
  const auto mask = masknet::FlatMask::from_index(result.index, std::move(layout));
  return {{"seed", result.seed},
          {"t", result.iterations},
          {"restarts", result.attempts},
          {"oracle_calls", result.oracle_calls},
          {"success", result.measured_good},
          {"bitstring", mask.to_hex()}};
}

}  // namespace qns::grover
