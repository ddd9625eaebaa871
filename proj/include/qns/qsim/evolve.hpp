#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/mixer.hpp"

namespace qns::qsim {

struct EvolutionSchedule {
  double total_time = 10.0;
  std::size_t steps = 400;
};

/// Largest register accepted by evolve().
inline constexpr std::size_t kDenseEvolutionLimit = 12;

/// First-order Trotterized evolution under
///
///   H(t) = (1 - t/T) H_0 + (t/T) H_C.
///
/// Step k (of `steps`) samples the interpolation at its midpoint s and
/// applies exp(-i s dt H_C) followed by exp(-i (1 - s) dt H_0).
void evolve(StateVector& state, const DiagonalCostHamiltonian& h_c, const MixerSpec& mixer,
            const EvolutionSchedule& schedule);

/// Dense H(t) for diagnostics (n <= kDenseMixerLimit).
Eigen::MatrixXd instantaneous_hamiltonian(const DiagonalCostHamiltonian& h_c, const MixerSpec& mixer,
                                          double t, double total_time);

}  // namespace qns::qsim
