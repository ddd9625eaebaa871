#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qns/oracle/oracle.hpp"
#include "qns/qsim/state_vector.hpp"

namespace qns::grover {

/// floor(pi/4 * sqrt(N/k)), clamped to at least 1. Throws
/// std::invalid_argument unless 1 <= k <= N.
std::size_t optimal_iterations(std::uint64_t search_space, std::uint64_t solutions);

/// sin^2((2t + 1) asin(sqrt(k/N))): success probability after t iterations.
double analytic_success_probability(std::uint64_t search_space, std::uint64_t solutions, std::size_t iterations);

/// (U_d U_f)^t |s>.
qsim::StateVector grover_state(oracle::QueryOracle& oracle, std::size_t iterations);

struct GroverConfig {
  /// Unset means automatic: optimal_iterations(N, known_k or 1).
  std::optional<std::size_t> iterations;
  std::optional<std::uint64_t> known_k;
  /// Maximum number of prepare/iterate/measure/verify attempts.
  std::size_t max_restarts = 3;
  std::uint64_t seed = 0;
};

struct GroverResult {
  std::uint64_t index = 0;    // last measured basis index
  bool measured_good = false; // classical verification of `index`
  std::size_t oracle_calls = 0;
  std::size_t iterations = 0; // per attempt (last attempt for unknown-k)
  std::size_t attempts = 0;
  std::uint64_t seed = 0;
};

/// Las-Vegas Grover search: each attempt prepares |s>, applies `iterations`
/// oracle+diffusion rounds, measures, and verifies the outcome with one
/// classical predicate call. Stops at the first verified outcome or after
/// max_restarts attempts.
GroverResult grover_search(oracle::QueryOracle& oracle, const GroverConfig& config);

/// Growth factor of the unknown-k schedule.
inline constexpr double kUnknownKGrowth = 6.0 / 5.0;

/// Call budget of the unknown-k schedule: 3 sqrt(N) log2(N).
std::size_t unknown_k_budget(std::uint64_t search_space);

/// Search without knowing k: round r draws t uniformly from
/// [0, min(ceil(m), ceil(pi/4 sqrt(N)))], runs t iterations, measures and
/// verifies; m starts at 1 and grows by 6/5 per round. Stops on success or
/// when the call budget is spent.
GroverResult search_unknown_k(oracle::QueryOracle& oracle, std::uint64_t seed);

/// {"seed", "t", "restarts", "oracle_calls", "success", "bitstring"}; the
/// bitstring is the measured index in hex.
nlohmann::json result_to_json(const GroverResult& result, std::size_t n_qubits);

}  // namespace qns::grover
