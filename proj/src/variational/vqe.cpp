#include "qns/variational/vqe.hpp"

#include <numbers>
#include <stdexcept>

#include "qns/common.hpp"

namespace qns::variational {

qsim::StateVector vqe_state(std::size_t n_qubits, const VqeAnsatz& ansatz, const std::vector<double>& thetas) {
  if (ansatz.layers < 1) throw std::invalid_argument("VQE ansatz needs at least one layer");
  if (thetas.size() != ansatz.parameter_count(n_qubits)) {
    throw std::invalid_argument("VQE parameter count must be layers * qubits");
  }
  qsim::StateVector s = qsim::StateVector::basis(n_qubits, 0);
  for (std::size_t l = 0; l < ansatz.layers; ++l) {
    for (std::size_t q = 0; q < n_qubits; ++q) qsim::apply_ry(s, q, thetas[l * n_qubits + q]);
    if (ansatz.entangler == Entangler::RingCZ && n_qubits >= 2) {
      const std::size_t pairs = n_qubits == 2 ? 1 : n_qubits;
      for (std::size_t q = 0; q < pairs; ++q) qsim::apply_cz(s, q, (q + 1) % n_qubits);
    }
  }
  return s;
}

double vqe_expectation(const qsim::DiagonalCostHamiltonian& h_c, const VqeAnsatz& ansatz,
                       const std::vector<double>& thetas) {
  return qsim::expectation(vqe_state(h_c.qubits(), ansatz, thetas), h_c);
}

VqeResult vqe_run(const qsim::DiagonalCostHamiltonian& h_c, const VqeAnsatz& ansatz, const OptimizerConfig& optimizer) {
  Rng rng(optimizer.seed);
  std::vector<double> init(ansatz.parameter_count(h_c.qubits()));
  for (double& t : init) t = std::numbers::pi * (2.0 * uniform01(rng) - 1.0);

  // the optimizer draws restart simplices from its own stream
  OptimizerConfig cfg = optimizer;
  cfg.seed = rng();
  VqeResult result;
  result.optimization = optimize_variational(
      [&](const std::vector<double>& x) { return vqe_expectation(h_c, ansatz, x); }, init, cfg);
  result.best_params = result.optimization.best_params;
  result.best_value = result.optimization.best_value;
  return result;
}

}  // namespace qns::variational
