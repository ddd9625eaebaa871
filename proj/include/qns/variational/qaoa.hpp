#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/mixer.hpp"
#include "qns/qsim/state_vector.hpp"
#include "qns/variational/nelder_mead.hpp"

namespace qns::variational {

/// QAOA is limited to 10 qubits when the bit-flip mixer is exponentiated densely.
inline constexpr std::size_t kQaoaDenseMixerLimit = 10;

struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  std::size_t p() const noexcept { return gammas.size(); }
  /// Throws std::invalid_argument unless p >= 1, the lengths agree and
  /// every angle is finite.
  void validate() const;

  /// (gamma_1, beta_1, gamma_2, beta_2, ...)
  std::vector<double> flatten() const;
  static QaoaParams unflatten(const std::vector<double>& flat);

  /// Discretized linear anneal over total time T: with dt = T / p and
  /// s_j = (j - 1/2) / p, gamma_j = s_j dt and beta_j = (1 - s_j) dt. The
  /// resulting state equals qsim::evolve with `p` steps.
  static QaoaParams linear_ramp(std::size_t p, double total_time);

  /// Appends zero-angle blocks up to depth `p`; the state is unchanged.
  QaoaParams extended(std::size_t p) const;
};

/// prod_j U(beta_j) U(gamma_j) |s>, with U(gamma) = exp(-i gamma H_C) and
/// U(beta) = exp(-i beta H_0). Caches the mixer propagator across calls.
class QaoaCircuit {
 public:
  QaoaCircuit(qsim::DiagonalCostHamiltonian h_c, qsim::MixerSpec mixer);

  qsim::StateVector state(const QaoaParams& params) const;
  /// F_p = <psi_p|H_C|psi_p>.
  double expectation(const QaoaParams& params) const;

  const qsim::DiagonalCostHamiltonian& cost() const noexcept { return h_c_; }

 private:
  qsim::DiagonalCostHamiltonian h_c_;
  qsim::MixerPropagator mixer_;
};

qsim::StateVector qaoa_state(const qsim::DiagonalCostHamiltonian& h_c, const QaoaParams& params,
                             const qsim::MixerSpec& mixer);
double qaoa_expectation(const qsim::DiagonalCostHamiltonian& h_c, const QaoaParams& params,
                        const qsim::MixerSpec& mixer);

struct QaoaConfig {
  std::size_t p = 1;
  qsim::MixerSpec mixer = qsim::MixerSpec::transverse_field();
  OptimizerConfig optimizer;
  /// Starting angles; default is linear_ramp(p, p * ramp_dt).
  std::optional<QaoaParams> init;
  double ramp_dt = 0.5;
};

struct QaoaResult {
  QaoaParams best;
  double best_value = 0.0;
  /// Probability mass on the minimum-cost indices in the best state.
  double p_ground = 0.0;
  /// Most probable basis index of the best state (lowest index on ties).
  std::uint64_t mode_index = 0;
  OptimizeResult optimization;
};

/// Minimizes F_p over the angles with optimize_variational.
QaoaResult qaoa_run(const qsim::DiagonalCostHamiltonian& h_c, const QaoaConfig& config);

}  // namespace qns::variational
