#pragma once

#include <cstddef>
#include <vector>

#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/state_vector.hpp"
#include "qns/variational/nelder_mead.hpp"

namespace qns::variational {

enum class Entangler { RingCZ, None };

/// Hardware-efficient ansatz on |0...0>: each layer applies Ry(theta_{l,q})
/// to every qubit, then CZ(q, q+1 mod n) around the ring (a single CZ for
/// n = 2, none for n = 1).
struct VqeAnsatz {
  std::size_t layers = 1;
  Entangler entangler = Entangler::RingCZ;

  std::size_t parameter_count(std::size_t n_qubits) const { return layers * n_qubits; }
};

/// thetas are layer-major: thetas[l * n + q].
qsim::StateVector vqe_state(std::size_t n_qubits, const VqeAnsatz& ansatz, const std::vector<double>& thetas);
double vqe_expectation(const qsim::DiagonalCostHamiltonian& h_c, const VqeAnsatz& ansatz,
                       const std::vector<double>& thetas);

struct VqeResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  OptimizeResult optimization;
};

/// Minimizes <psi(theta)|H_C|psi(theta)> from angles drawn uniformly in
/// [-pi, pi] with optimizer.seed.
VqeResult vqe_run(const qsim::DiagonalCostHamiltonian& h_c, const VqeAnsatz& ansatz, const OptimizerConfig& optimizer);

}  // namespace qns::variational
