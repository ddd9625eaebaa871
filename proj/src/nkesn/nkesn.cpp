#include "qns/nkesn/nkesn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qns/common.hpp"
#include "qns/grover/grover.hpp"
#include "qns/oracle/oracle.hpp"

namespace qns::nkesn {

using nlohmann::json;

namespace {

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = 2.0 * uniform01(rng) - 1.0;
  return m;
}

double phi_of(OutputActivation a, double v) { return a == OutputActivation::Tanh ? std::tanh(v) : v; }

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(std::string(name) + " must be a nonempty matrix");
  const auto cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != cols) throw std::invalid_argument(std::string(name) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

void check_dims(const ProbeFilter& pf, const NKLandscape& land, const Eigen::MatrixXd& w_out,
                const std::vector<std::uint8_t>& bits) {
  if (pf.size() != land.n || bits.size() != land.n || static_cast<std::size_t>(w_out.rows()) != land.n ||
      static_cast<std::size_t>(w_out.cols()) != land.n) {
    throw std::invalid_argument("probe filter, landscape, readout and mask sizes must all equal N");
  }
}

}  // namespace

EchoStateNetwork make_esn(const EsnConfig& config) {
  if (config.probes == 0) throw std::invalid_argument("ESN needs at least one probe neuron");
  EchoStateNetwork esn;
  esn.reservoir = make_reservoir(config.reservoir);
  Rng rng(config.seed);
  const auto n = static_cast<Eigen::Index>(config.probes);
  esn.probe.w_pf = uniform_matrix(n, static_cast<Eigen::Index>(esn.reservoir.size()), rng);
  esn.probe.mask.assign(config.probes, 1);
  esn.w_out = uniform_matrix(n, n, rng);
  esn.phi = config.phi;
  esn.washout = config.washout;
  return esn;
}

Eigen::VectorXd nkesn_output(const Eigen::VectorXd& z, const ProbeFilter& pf, const NKLandscape& land,
                             const Eigen::MatrixXd& w_out, OutputActivation phi, const std::vector<std::uint8_t>& bits) {
  check_dims(pf, land, w_out, bits);
  if (z.size() != pf.w_pf.cols()) throw std::invalid_argument("reservoir state size differs from the probe filter");
  const Eigen::VectorXd raw = pf.w_pf * z;
  Eigen::VectorXd y(static_cast<Eigen::Index>(land.n));
  for (std::size_t i = 0; i < land.n; ++i) {
    double sum = 0.0;
    for (std::size_t m : land.neighborhoods[i]) {
      if (!bits[m]) continue;
      const auto mi = static_cast<Eigen::Index>(m);
      sum += w_out(mi, static_cast<Eigen::Index>(i)) * raw(mi);
    }
    y(static_cast<Eigen::Index>(i)) = phi_of(phi, sum);
  }
  return y;
}

double ensemble_output(const Eigen::VectorXd& outputs) {
  if (outputs.size() == 0) throw std::invalid_argument("ensemble of zero outputs");
  return outputs.mean();
}

std::vector<Eigen::VectorXd> rollout(const Reservoir& r, const masknet::Dataset& data) {
  data.validate();
  std::vector<Eigen::VectorXd> states;
  states.reserve(data.size());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r.size()));
  for (const auto& x : data.inputs) {
    z = reservoir_step(r, z, x);
    states.push_back(z);
  }
  return states;
}

double output_loss(const EchoStateNetwork& esn, const NKLandscape& land, const std::vector<Eigen::VectorXd>& states,
                   const masknet::Dataset& data, std::size_t output, const std::vector<std::uint8_t>& bits) {
  if (states.size() != data.size()) throw std::invalid_argument("one reservoir state per sample is required");
  if (data.size() <= esn.washout) throw std::invalid_argument("series is not longer than the washout");
  const auto td = data.target_dim();
  if (td != 1 && td != land.n) throw std::invalid_argument("targets need one value or one per output");
  double sum = 0.0;
  for (std::size_t t = esn.washout; t < data.size(); ++t) {
    const double y = nkesn_output(states[t], esn.probe, land, esn.w_out, esn.phi, bits)(static_cast<Eigen::Index>(output));
    const double target = data.targets[t](td == 1 ? 0 : static_cast<Eigen::Index>(output));
    sum += (y - target) * (y - target);
  }
  return sum / static_cast<double>(data.size() - esn.washout);
}

LossTable build_table(const EchoStateNetwork& esn, const NKLandscape& land, const masknet::Dataset& data) {
  land.validate();
  if (land.k > 20) throw std::invalid_argument("build_table supports K <= 20");
  const auto states = rollout(esn.reservoir, data);
  LossTable table(std::size_t{1} << land.k, std::vector<double>(land.n));
  std::vector<std::uint8_t> bits(land.n, 0);
  for (std::size_t i = 0; i < land.n; ++i) {
    for (std::uint64_t p = 0; p < table.size(); ++p) {
      std::fill(bits.begin(), bits.end(), 0);
      for (std::size_t j = 0; j < land.k; ++j) bits[land.neighborhoods[i][j]] = static_cast<std::uint8_t>((p >> j) & 1U);
      table[p][i] = output_loss(esn, land, states, data, i, bits);
    }
  }
  return table;
}

std::vector<double> table_column(const LossTable& table, std::size_t output) {
  std::vector<double> col;
  col.reserve(table.size());
  for (const auto& row : table) col.push_back(row.at(output));
  return col;
}

TableSelectResult grover_table_select(const std::vector<double>& column, const TableSelectConfig& config) {
  TableSelectResult res;
  res.epsilon = config.epsilon ? *config.epsilon : *std::min_element(column.begin(), column.end()) + 1e-12;
  oracle::ThresholdOracle o(column, res.epsilon);
  if (o.qubits() > max_qubits()) throw std::invalid_argument("K exceeds the qubit ceiling");
  const std::uint64_t k = o.solution_count();
  grover::GroverConfig gc;
  gc.iterations = grover::optimal_iterations(o.search_space(), std::max<std::uint64_t>(k, 1));
  gc.max_restarts = config.max_restarts;
  gc.seed = config.seed;
  const auto r = grover::grover_search(o, gc);
  res.pattern = r.index;
  res.success = r.measured_good;
  res.oracle_calls = r.oracle_calls;
  res.iterations = r.iterations;
  res.attempts = r.attempts;
  return res;
}

CombineResult combine_per_output(const std::vector<std::uint64_t>& patterns, const NKLandscape& land,
                                 const LossTable* table) {
  land.validate();
  if (patterns.size() != land.n) throw std::invalid_argument("need one pattern per output");
  std::vector<int> ones(land.n, 0), zeros(land.n, 0);
  for (std::size_t i = 0; i < land.n; ++i) {
    for (std::size_t j = 0; j < land.k; ++j) {
      const std::size_t b = land.neighborhoods[i][j];
      ((patterns[i] >> j) & 1U ? ones : zeros)[b]++;
    }
  }
  CombineResult res;
  res.bits.resize(land.n);
  for (std::size_t b = 0; b < land.n; ++b) {
    res.bits[b] = ones[b] >= zeros[b] ? 1 : 0;
    if (ones[b] > 0 && zeros[b] > 0) res.conflicts.push_back(b);
  }
  if (table) {
    res.mean_loss = mean_loss(land, *table, res.bits);
    if (land.topology == Topology::Adjacent && land.n <= 64 && land.k <= 12) {
      res.gap_vs_dp = *res.mean_loss - dp_optimize(land, *table).mean_loss;
    }
  }
  return res;
}

json esn_to_json(const EchoStateNetwork& esn) {
  const auto& r = esn.reservoir;
  return {{"esn",
           {{"reservoir",
             {{"size", r.size()},
              {"input_dim", r.input_dim()},
              {"spectral_radius", r.spectral_radius},
              {"connectivity", r.connectivity},
              {"nonlinearity", r.nonlinearity == Nonlinearity::Tanh ? "tanh" : "linear"},
              {"seed", r.seed},
              {"w_res", matrix_to_json(r.w_res)},
              {"w_in", matrix_to_json(r.w_in)}}},
            {"probe", {{"w_pf", matrix_to_json(esn.probe.w_pf)}, {"mask", esn.probe.mask}}},
            {"w_out", matrix_to_json(esn.w_out)},
            {"phi", esn.phi == OutputActivation::Tanh ? "tanh" : "identity"},
            {"washout", esn.washout}}}};
}

EchoStateNetwork esn_from_json(const json& j) {
  const json& e = j.at("esn");
  const json& r = e.at("reservoir");
  EchoStateNetwork esn;
  esn.reservoir.w_res = matrix_from_json(r.at("w_res"), "w_res");
  esn.reservoir.w_in = matrix_from_json(r.at("w_in"), "w_in");
  esn.reservoir.spectral_radius = r.at("spectral_radius").get<double>();
  esn.reservoir.connectivity = r.at("connectivity").get<double>();
  const auto nl = r.at("nonlinearity").get<std::string>();
  if (nl != "tanh" && nl != "linear") throw std::invalid_argument("unknown reservoir nonlinearity '" + nl + "'");
  esn.reservoir.nonlinearity = nl == "tanh" ? Nonlinearity::Tanh : Nonlinearity::Linear;
  esn.reservoir.seed = r.at("seed").get<std::uint64_t>();
  esn.probe.w_pf = matrix_from_json(e.at("probe").at("w_pf"), "w_pf");
  esn.probe.mask = e.at("probe").at("mask").get<std::vector<std::uint8_t>>();
  esn.w_out = matrix_from_json(e.at("w_out"), "w_out");
  const auto phi = e.at("phi").get<std::string>();
  if (phi != "tanh" && phi != "identity") throw std::invalid_argument("unknown output activation '" + phi + "'");
  esn.phi = phi == "tanh" ? OutputActivation::Tanh : OutputActivation::Identity;
  esn.washout = e.at("washout").get<std::size_t>();
  if (esn.reservoir.w_res.rows() != esn.reservoir.w_res.cols() ||
      esn.reservoir.w_in.rows() != esn.reservoir.w_res.rows() || esn.probe.w_pf.cols() != esn.reservoir.w_res.rows() ||
      esn.w_out.rows() != esn.probe.w_pf.rows() || esn.w_out.cols() != esn.w_out.rows() ||
      esn.probe.mask.size() != static_cast<std::size_t>(esn.probe.w_pf.rows())) {
    throw std::invalid_argument("ESN matrices have inconsistent shapes");
  }
  return esn;
}

}  // namespace qns::nkesn
