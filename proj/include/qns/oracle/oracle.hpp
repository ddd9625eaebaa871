#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"
#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/state_vector.hpp"

namespace qns::oracle {

/// Threshold predicate f over n-bit basis indices, queried either
/// classically (is_good) or as the phase oracle U_f|x> = (-1)^f(x)|x>.
///
/// Every is_good() call and every U_f application counts as one oracle
/// call. Simulating U_f on a dense statevector needs f on all 2^n indices;
/// that table is evaluated once, cached, and not counted, since a quantum
/// device answers the superposed query in a single application.
class QueryOracle {
 public:
  explicit QueryOracle(std::size_t n_qubits);
  virtual ~QueryOracle() = default;
  QueryOracle(const QueryOracle&) = delete;
  QueryOracle& operator=(const QueryOracle&) = delete;

  std::size_t qubits() const noexcept { return n_qubits_; }
  std::uint64_t search_space() const noexcept { return std::uint64_t{1} << n_qubits_; }

  bool is_good(std::uint64_t index);
  void apply_phase(qsim::StateVector& state);

  std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() noexcept { calls_.store(0, std::memory_order_relaxed); }

  /// Cached predicate table (uncounted simulation bookkeeping).
  const std::vector<std::uint8_t>& marked_table();
  /// Number of indices satisfying the predicate (uncounted).
  std::uint64_t solution_count();

 protected:
  virtual bool evaluate(std::uint64_t index) const = 0;

 private:
  std::size_t n_qubits_;
  std::atomic<std::size_t> calls_{0};
  std::optional<std::vector<std::uint8_t>> marked_;
};

/// cost[x] < epsilon over an explicit cost vector.
class ThresholdOracle final : public QueryOracle {
 public:
  ThresholdOracle(std::vector<double> costs, double epsilon);

  double epsilon() const noexcept { return epsilon_; }
  double cost(std::uint64_t index) const { return costs_.at(index); }

 protected:
  bool evaluate(std::uint64_t index) const override;

 private:
  std::vector<double> costs_;
  double epsilon_;
};

/// The subnetwork predicate: dataset_loss(net with mask x) < epsilon.
class SubnetworkOracle final : public QueryOracle {
 public:
  /// Masks range over `layout` (default: every weight). Throws
  /// std::invalid_argument if epsilon is negative or NaN, or the layout
  /// exceeds max_qubits(). With epsilon = 0 nothing is accepted.
  SubnetworkOracle(masknet::MaskedNetwork net, masknet::Dataset data, double epsilon,
                   std::optional<masknet::MaskLayout> layout = std::nullopt);

  using QueryOracle::is_good;
  /// Counted predicate on an explicit mask; throws on a length mismatch.
  bool is_good(const masknet::FlatMask& mask);

  /// Loss under mask `index` (uncounted).
  double loss(std::uint64_t index) const;

  double epsilon() const noexcept { return epsilon_; }
  const masknet::MaskLayout& layout() const noexcept { return layout_; }
  const masknet::MaskedNetwork& network() const noexcept { return net_; }
  const masknet::Dataset& data() const noexcept { return data_; }

 protected:
  bool evaluate(std::uint64_t index) const override;

 private:
  masknet::MaskedNetwork net_;
  masknet::Dataset data_;
  double epsilon_;
  masknet::MaskLayout layout_;
};

/// costs[x] = dataset_loss under mask x for every x in [0, 2^n), with n the
/// layout width. Throws std::invalid_argument when n exceeds max_qubits().
qsim::DiagonalCostHamiltonian build_cost_hamiltonian(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                                                     const masknet::MaskLayout& layout);

/// Same with the full weight layout; `bit_count` must equal the network's
/// parameter count.
qsim::DiagonalCostHamiltonian build_cost_hamiltonian(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                                                     std::size_t bit_count);

/// Number of basis states with cost < epsilon.
std::uint64_t count_solutions(const qsim::DiagonalCostHamiltonian& h, double epsilon);

/// Default threshold: 0.5 x the median loss of `samples` uniformly random
/// masks drawn with `seed`.
double default_epsilon(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                       const masknet::MaskLayout& layout, std::uint64_t seed, std::size_t samples = 64);

}  // namespace qns::oracle
