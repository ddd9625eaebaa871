#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qns/qsim/state_vector.hpp"

namespace qns::qsim {

/// Problem Hamiltonian diagonal in the computational basis: H|x> = C(x)|x>.
class DiagonalCostHamiltonian {
 public:
  /// Throws std::invalid_argument if the length is not 2^n (n >= 1) or any
  /// cost is not finite.
  explicit DiagonalCostHamiltonian(std::vector<double> costs);

  std::size_t qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return costs_.size(); }
  double cost(std::uint64_t index) const { return costs_[index]; }
  std::span<const double> costs() const noexcept { return costs_; }

  double min_cost() const;
  double max_cost() const;

 private:
  std::size_t n_qubits_;
  std::vector<double> costs_;
};

/// <psi|H|psi> = sum_i |a_i|^2 C(i). Throws std::invalid_argument on a
/// qubit-count mismatch.
double expectation(const StateVector& state, const DiagonalCostHamiltonian& h);

/// exp(-i * gamma * H) applied as exact per-amplitude phases.
void apply_cost_phase(StateVector& state, const DiagonalCostHamiltonian& h, double gamma);

}  // namespace qns::qsim
