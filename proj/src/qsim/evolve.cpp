#include "qns/qsim/evolve.hpp"

#include <cmath>
#include <stdexcept>

namespace qns::qsim {

void evolve(StateVector& state, const DiagonalCostHamiltonian& h_c, const MixerSpec& mixer,
            const EvolutionSchedule& schedule) {
  if (state.qubits() > kDenseEvolutionLimit) {
    throw std::invalid_argument("evolution limited to 12 qubits");
  }
  if (state.qubits() != h_c.qubits()) throw std::invalid_argument("state/Hamiltonian qubit count mismatch");
  if (schedule.steps < 1) throw std::invalid_argument("evolution needs at least one step");
  if (!(schedule.total_time > 0.0) || !std::isfinite(schedule.total_time)) {
    throw std::invalid_argument("total evolution time must be positive");
  }
  const MixerPropagator propagator(mixer, state.qubits());
  const double dt = schedule.total_time / static_cast<double>(schedule.steps);
  for (std::size_t k = 0; k < schedule.steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(schedule.steps);
    apply_cost_phase(state, h_c, s * dt);
    propagator.apply(state, (1.0 - s) * dt);
  }
}

Eigen::MatrixXd instantaneous_hamiltonian(const DiagonalCostHamiltonian& h_c, const MixerSpec& mixer, double t,
                                          double total_time) {
  if (!(total_time > 0.0)) throw std::invalid_argument("total evolution time must be positive");
  const double s = t / total_time;
  Eigen::MatrixXd h = (1.0 - s) * mixer_matrix(mixer, h_c.qubits());
  for (std::size_t i = 0; i < h_c.dimension(); ++i) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += s * h_c.cost(i);
  }
  return h;
}

}  // namespace qns::qsim
