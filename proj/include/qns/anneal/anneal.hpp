#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "qns/qsim/evolve.hpp"
#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/mixer.hpp"
#include "qns/qsim/state_vector.hpp"

namespace qns::anneal {

struct AnnealSchedule {
  double total_time = 10.0;
  std::size_t steps = 400;
  qsim::MixerSpec mixer = qsim::MixerSpec::transverse_field();
};

struct AnnealResult {
  qsim::StateVector final_state;
  double p_ground = 0.0;
  double final_expectation = 0.0;
};

/// Indices whose cost lies within 1e-12 of the minimum.
std::vector<std::uint64_t> ground_states(const qsim::DiagonalCostHamiltonian& h);

/// Starts in the uniform superposition and evolves under the interpolated
/// Hamiltonian. p_ground is the mass on ground_states(h_c).
AnnealResult anneal(const qsim::DiagonalCostHamiltonian& h_c, const AnnealSchedule& schedule);

/// Smallest gap between the two lowest eigenvalues of H(t) over `samples` + 1
/// evenly spaced points of the schedule, by exact diagonalization.
double minimum_gap(const qsim::DiagonalCostHamiltonian& h_c, const qsim::MixerSpec& mixer,
                   std::size_t samples = 200);

struct SweepRow {
  double total_time = 0.0;
  std::size_t steps = 0;
  double p_ground = 0.0;
  double final_expectation = 0.0;
};

std::vector<SweepRow> sweep_total_time(const qsim::DiagonalCostHamiltonian& h_c, const AnnealSchedule& base,
                                       const std::vector<double>& total_times);

/// "T,steps,p_ground,final_expectation"
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace qns::anneal
