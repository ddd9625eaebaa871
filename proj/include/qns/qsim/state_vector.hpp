#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qns/common.hpp"

namespace qns::qsim {

using Complex = std::complex<double>;

/// Dense register of n qubits: 2^n amplitudes, basis index bit q is qubit q.
class StateVector {
 public:
  /// |index> on n qubits.
  static StateVector basis(std::size_t n_qubits, std::uint64_t index = 0);

  /// Wraps explicit amplitudes; the length must be a power of two and the
  /// vector normalized within 1e-9.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  std::size_t qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  const Complex& operator[](std::uint64_t i) const { return amplitudes_[i]; }

  double* raw() noexcept { return reinterpret_cast<double*>(amplitudes_.data()); }
  const double* raw() const noexcept { return reinterpret_cast<const double*>(amplitudes_.data()); }

  double norm_squared() const;
  double probability(std::uint64_t index) const;
  std::vector<double> probabilities() const;

 private:
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Throws std::invalid_argument unless 1 <= n <= max_qubits().
void check_qubit_count(std::size_t n_qubits);

/// Every amplitude 1/sqrt(2^n).
StateVector uniform_superposition(std::size_t n_qubits);

void apply_h(StateVector& state, std::size_t qubit);
void apply_x(StateVector& state, std::size_t qubit);
void apply_z(StateVector& state, std::size_t qubit);

/// Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
void apply_ry(StateVector& state, std::size_t qubit, double theta);

/// Rx(theta) = exp(-i theta X / 2).
void apply_rx(StateVector& state, std::size_t qubit, double theta);

void apply_cz(StateVector& state, std::size_t control, std::size_t target);

/// Negates the amplitude of every basis index with marked[i] != 0.
void apply_phase_oracle(StateVector& state, std::span<const std::uint8_t> marked);

/// Same, with the marked set given as a predicate over basis indices. The
/// predicate is evaluated once per basis index.
void apply_phase_oracle(StateVector& state, const std::function<bool(std::uint64_t)>& marked);

/// 2|s><s| - I: every amplitude a_i becomes 2 * mean(a) - a_i.
void apply_diffusion(StateVector& state);

/// Multiplies amplitude i by phases[i].
void apply_diagonal(StateVector& state, std::span<const Complex> phases);

/// Non-destructive sampling: returns i with probability |a_i|^2 and leaves
/// the state untouched. Consumes exactly one draw from `rng`.
std::uint64_t measure(const StateVector& state, Rng& rng);

/// Total probability mass on the given basis indices.
double probability_of(const StateVector& state, std::span<const std::uint64_t> indices);

}  // namespace qns::qsim
