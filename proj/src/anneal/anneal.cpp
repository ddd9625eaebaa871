#include "qns/anneal/anneal.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace qns::anneal {

std::vector<std::uint64_t> ground_states(const qsim::DiagonalCostHamiltonian& h) {
  const double lo = h.min_cost();
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < h.dimension(); ++i) {
    if (h.cost(i) - lo <= 1e-12) out.push_back(i);
  }
  return out;
}

AnnealResult anneal(const qsim::DiagonalCostHamiltonian& h_c, const AnnealSchedule& schedule) {
  if (h_c.qubits() > qsim::kDenseEvolutionLimit) throw std::invalid_argument("annealing limited to 12 qubits");
  qsim::StateVector state = qsim::uniform_superposition(h_c.qubits());
  qsim::evolve(state, h_c, schedule.mixer, {schedule.total_time, schedule.steps});
  const auto ground = ground_states(h_c);
  const double p_ground = qsim::probability_of(state, ground);
  const double energy = qsim::expectation(state, h_c);
  return AnnealResult{std::move(state), p_ground, energy};
}

double minimum_gap(const qsim::DiagonalCostHamiltonian& h_c, const qsim::MixerSpec& mixer, std::size_t samples) {
  if (samples < 1) throw std::invalid_argument("minimum_gap needs at least one interval");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= samples; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(samples);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qsim::instantaneous_hamiltonian(h_c, mixer, s, 1.0),
                                                      Eigen::EigenvaluesOnly);
    gap = std::min(gap, es.eigenvalues()(1) - es.eigenvalues()(0));
  }
  return gap;
}

std::vector<SweepRow> sweep_total_time(const qsim::DiagonalCostHamiltonian& h_c, const AnnealSchedule& base,
                                       const std::vector<double>& total_times) {
  std::vector<SweepRow> rows;
  for (double t : total_times) {
    AnnealSchedule s = base;
    s.total_time = t;
    const AnnealResult r = anneal(h_c, s);
    rows.push_back({t, s.steps, r.p_ground, r.final_expectation});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "T,steps,p_ground,final_expectation\n" << std::setprecision(17);
  for (const SweepRow& r : rows) {
    out << r.total_time << ',' << r.steps << ',' << r.p_ground << ',' << r.final_expectation << '\n';
  }
}

}  // namespace qns::anneal
