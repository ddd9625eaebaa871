#include "qns/qsim/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qns/simd/kernels.hpp"

namespace qns::qsim {

DiagonalCostHamiltonian::DiagonalCostHamiltonian(std::vector<double> costs) : costs_(std::move(costs)) {
  const std::size_t dim = costs_.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("cost vector length must be 2^n with n >= 1");
  }
  for (double c : costs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("cost Hamiltonian entries must be finite");
  }
  n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
}

double DiagonalCostHamiltonian::min_cost() const { return *std::min_element(costs_.begin(), costs_.end()); }

double DiagonalCostHamiltonian::max_cost() const { return *std::max_element(costs_.begin(), costs_.end()); }

double expectation(const StateVector& state, const DiagonalCostHamiltonian& h) {
  if (state.qubits() != h.qubits()) throw std::invalid_argument("state/Hamiltonian qubit count mismatch");
  return simd::active_kernels().weighted_norm(state.raw(), h.costs().data(), state.dimension());
}

void apply_cost_phase(StateVector& state, const DiagonalCostHamiltonian& h, double gamma) {
  if (state.qubits() != h.qubits()) throw std::invalid_argument("state/Hamiltonian qubit count mismatch");
  if (gamma == 0.0) return;
  std::vector<Complex> phases(h.dimension());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double angle = -gamma * h.cost(i);
    phases[i] = Complex{std::cos(angle), std::sin(angle)};
  }
  apply_diagonal(state, phases);
}

}  // namespace qns::qsim
