#include "qns/variational/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qns/anneal/anneal.hpp"

namespace qns::variational {

void QaoaParams::validate() const {
  if (gammas.empty()) throw std::invalid_argument("QAOA needs p >= 1");
  if (gammas.size() != betas.size()) throw std::invalid_argument("QAOA gammas and betas differ in length");
  for (double a : gammas)
    if (!std::isfinite(a)) throw std::invalid_argument("QAOA angle must be finite");
  for (double a : betas)
    if (!std::isfinite(a)) throw std::invalid_argument("QAOA angle must be finite");
}

std::vector<double> QaoaParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(2 * p());
  for (std::size_t j = 0; j < p(); ++j) {
    flat.push_back(gammas[j]);
    flat.push_back(betas[j]);
  }
  return flat;
}

QaoaParams QaoaParams::unflatten(const std::vector<double>& flat) {
  if (flat.empty() || flat.size() % 2 != 0) throw std::invalid_argument("flat QAOA vector must have even length >= 2");
  QaoaParams q;
  for (std::size_t j = 0; j < flat.size(); j += 2) {
    q.gammas.push_back(flat[j]);
    q.betas.push_back(flat[j + 1]);
  }
  return q;
}

QaoaParams QaoaParams::linear_ramp(std::size_t p, double total_time) {
  if (p < 1) throw std::invalid_argument("QAOA needs p >= 1");
  if (!(total_time > 0.0)) throw std::invalid_argument("ramp time must be positive");
  QaoaParams q;
  const double dt = total_time / static_cast<double>(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double s = (static_cast<double>(j) + 0.5) / static_cast<double>(p);
    q.gammas.push_back(s * dt);
    q.betas.push_back((1.0 - s) * dt);
  }
  return q;
}

QaoaParams QaoaParams::extended(std::size_t p_new) const {
  if (p_new < p()) throw std::invalid_argument("cannot shrink QAOA depth");
  QaoaParams q = *this;
  q.gammas.resize(p_new, 0.0);
  q.betas.resize(p_new, 0.0);
  return q;
}

namespace {

qsim::MixerPropagator make_propagator(const qsim::MixerSpec& mixer, std::size_t n) {
  if (mixer.kind == qsim::MixerKind::BitFlipGraph && n > kQaoaDenseMixerLimit) {
    throw std::invalid_argument("QAOA with the bit-flip mixer is limited to 10 qubits");
  }
  return qsim::MixerPropagator(mixer, n);
}

}  // namespace

QaoaCircuit::QaoaCircuit(qsim::DiagonalCostHamiltonian h_c, qsim::MixerSpec mixer)
    : h_c_(std::move(h_c)), mixer_(make_propagator(mixer, h_c_.qubits())) {}

qsim::StateVector QaoaCircuit::state(const QaoaParams& params) const {
  params.validate();
  qsim::StateVector s = qsim::uniform_superposition(h_c_.qubits());
  for (std::size_t j = 0; j < params.p(); ++j) {
    qsim::apply_cost_phase(s, h_c_, params.gammas[j]);
    mixer_.apply(s, params.betas[j]);
  }
  return s;
}

double QaoaCircuit::expectation(const QaoaParams& params) const { return qsim::expectation(state(params), h_c_); }

qsim::StateVector qaoa_state(const qsim::DiagonalCostHamiltonian& h_c, const QaoaParams& params,
                             const qsim::MixerSpec& mixer) {
  return QaoaCircuit(h_c, mixer).state(params);
}

double qaoa_expectation(const qsim::DiagonalCostHamiltonian& h_c, const QaoaParams& params,
                        const qsim::MixerSpec& mixer) {
  return QaoaCircuit(h_c, mixer).expectation(params);
}

QaoaResult qaoa_run(const qsim::DiagonalCostHamiltonian& h_c, const QaoaConfig& config) {
  const QaoaCircuit circuit(h_c, config.mixer);
  const QaoaParams init =
      config.init ? *config.init : QaoaParams::linear_ramp(config.p, static_cast<double>(config.p) * config.ramp_dt);
  init.validate();
  if (init.p() != config.p) throw std::invalid_argument("initial QAOA angles do not match p");

  QaoaResult result;
  result.optimization = optimize_variational(
      [&](const std::vector<double>& x) { return circuit.expectation(QaoaParams::unflatten(x)); }, init.flatten(),
      config.optimizer);
  result.best = QaoaParams::unflatten(result.optimization.best_params);
  result.best_value = result.optimization.best_value;

  const qsim::StateVector best_state = circuit.state(result.best);
  const auto ground = anneal::ground_states(h_c);
  result.p_ground = qsim::probability_of(best_state, ground);
  const auto probs = best_state.probabilities();
  result.mode_index = static_cast<std::uint64_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  return result;
}

}  // namespace qns::variational
