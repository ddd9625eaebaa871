#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qns/qsim/state_vector.hpp"

namespace qns::qsim {

enum class MixerKind { TransverseField, BitFlipGraph };

/// Adjacency lists over qubit indices.
using Graph = std::vector<std::vector<std::size_t>>;

/// Ring over n vertices: v is adjacent to v-1 and v+1 (mod n).
Graph ring_graph(std::size_t n);

/// Mixing Hamiltonian H_0.
///
/// TransverseField is -sum_q X_q, whose ground state is the uniform
/// superposition. BitFlipGraph is
///
///   H_M = sum_v 2^{-d(v)} X_v prod_{w in N(v)} (I + (-1)^b Z_w),
///
/// which flips v exactly when every neighbour of v holds bit b.
struct MixerSpec {
  MixerKind kind = MixerKind::TransverseField;
  Graph graph;
  int target_bit = 0;

  static MixerSpec transverse_field() { return {}; }
  static MixerSpec bit_flip(Graph graph, int target_bit);

  /// Throws std::invalid_argument if a bit-flip graph has self-loops,
  /// out-of-range vertices, or a vertex count other than n_qubits.
  void validate(std::size_t n_qubits) const;
};

/// Largest register for which the bit-flip mixer is expanded densely.
inline constexpr std::size_t kDenseMixerLimit = 12;

/// Dense real-symmetric matrix of H_0 on n qubits (n <= kDenseMixerLimit).
Eigen::MatrixXd mixer_matrix(const MixerSpec& mixer, std::size_t n_qubits);

/// Applies H_0 itself (not its exponential) to a state vector.
std::vector<Complex> apply_mixer_operator(const MixerSpec& mixer, std::span<const Complex> amplitudes,
                                          std::size_t n_qubits);

/// Applies exp(-i * beta * H_0) for arbitrary beta. The transverse field
/// factorizes into per-qubit rotations; the bit-flip mixer is diagonalized
/// once at construction and exponentiated through its eigenbasis.
class MixerPropagator {
 public:
  MixerPropagator(MixerSpec mixer, std::size_t n_qubits);

  void apply(StateVector& state, double beta) const;

  const MixerSpec& spec() const noexcept { return mixer_; }
  std::size_t qubits() const noexcept { return n_qubits_; }

 private:
  MixerSpec mixer_;
  std::size_t n_qubits_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
};

}  // namespace qns::qsim
