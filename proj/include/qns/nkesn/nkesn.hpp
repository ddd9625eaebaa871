#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qns/masknet/dataset.hpp"
#include "qns/nkesn/landscape.hpp"
#include "qns/nkesn/reservoir.hpp"

namespace qns::nkesn {

enum class OutputActivation { Tanh, Identity };

struct ProbeFilter {
  Eigen::MatrixXd w_pf;  // N x reservoir size
  std::vector<std::uint8_t> mask;

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_pf.rows()); }
};

struct EsnConfig {
  ReservoirConfig reservoir;
  std::size_t probes = 8;
  OutputActivation phi = OutputActivation::Tanh;
  std::size_t washout = 20;
  std::uint64_t seed = 0;
};

struct EchoStateNetwork {
  Reservoir reservoir;
  ProbeFilter probe;
  /// w_out(j, i): weight from probe neuron j to output i (N x N).
  Eigen::MatrixXd w_out;
  OutputActivation phi = OutputActivation::Tanh;
  std::size_t washout = 20;
};

/// Reservoir from config.reservoir; probe and readout weights uniform in
/// [-1, 1] drawn with config.seed; all-ones probe mask.
EchoStateNetwork make_esn(const EsnConfig& config);

/// Per-output values y_i = phi(sum_j w_out(m_ij, i) z_pf(m_ij) x(m_ij)) with
/// z_pf = x . (W_pf z) and m_ij the j-th index of neighbourhood i.
Eigen::VectorXd nkesn_output(const Eigen::VectorXd& z, const ProbeFilter& pf, const NKLandscape& land,
                             const Eigen::MatrixXd& w_out, OutputActivation phi, const std::vector<std::uint8_t>& bits);

/// Ensemble prediction (1/N) sum_i y_i.
double ensemble_output(const Eigen::VectorXd& outputs);

/// Reservoir states z_1..z_T from z_0 = 0 driven by data.inputs.
std::vector<Eigen::VectorXd> rollout(const Reservoir& r, const masknet::Dataset& data);

/// Loss of output i under the full mask: mean squared error of y_i(t)
/// against the target after the washout. Targets hold one value shared by
/// all outputs or one per output.
double output_loss(const EchoStateNetwork& esn, const NKLandscape& land, const std::vector<Eigen::VectorXd>& states,
                   const masknet::Dataset& data, std::size_t output, const std::vector<std::uint8_t>& bits);

/// table[p][i] for every K-bit pattern and output. Bits outside output i's
/// neighbourhood are set to 0. Throws std::invalid_argument when K > 20 or
/// the series is not longer than the washout.
LossTable build_table(const EchoStateNetwork& esn, const NKLandscape& land, const masknet::Dataset& data);

struct TableSelectConfig {
  /// Unset means verification mode: column minimum + 1e-12.
  std::optional<double> epsilon;
  std::size_t max_restarts = 3;
  std::uint64_t seed = 0;
};

struct TableSelectResult {
  std::uint64_t pattern = 0;
  bool success = false;
  double epsilon = 0.0;
  std::size_t oracle_calls = 0;
  std::size_t iterations = 0;
  std::size_t attempts = 0;
};

/// Grover search over the K-bit patterns of one table column with predicate
/// column[p] < epsilon. The number of solutions is read from the table
/// (uncounted), fixing the iteration count; with no solution the k = 1 count
/// is used and the search reports failure. Throws std::invalid_argument when
/// K exceeds max_qubits().
TableSelectResult grover_table_select(const std::vector<double>& column, const TableSelectConfig& config);

/// Column i of the table.
std::vector<double> table_column(const LossTable& table, std::size_t output);

struct CombineResult {
  std::vector<std::uint8_t> bits;
  /// Probe bits whose referencing patterns disagree.
  std::vector<std::size_t> conflicts;
  std::optional<double> mean_loss;
  /// mean_loss minus the dp optimum (Adjacent landscapes only).
  std::optional<double> gap_vs_dp;
};

/// Majority vote per probe bit over every pattern that references it; ties
/// and unreferenced bits go to 1. With a table, the result's mean loss and
/// its gap to dp_optimize are filled in.
CombineResult combine_per_output(const std::vector<std::uint64_t>& patterns, const NKLandscape& land,
                                 const LossTable* table = nullptr);

/// {"esn": {...}} with reservoir, probe filter and readout weights.
nlohmann::json esn_to_json(const EchoStateNetwork& esn);
EchoStateNetwork esn_from_json(const nlohmann::json& j);

}  // namespace qns::nkesn
