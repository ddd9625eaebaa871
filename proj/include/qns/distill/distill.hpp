#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qns/anneal/anneal.hpp"
#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"
#include "qns/qsim/hamiltonian.hpp"
#include "qns/variational/qaoa.hpp"

namespace qns::distill {

/// activations[l][s]: output of layer l for sample s.
struct ActivationTrace {
  std::vector<std::vector<Eigen::VectorXd>> activations;

  std::size_t layers() const noexcept { return activations.size(); }
  std::size_t samples() const { return activations.empty() ? 0 : activations.front().size(); }
};

/// Post-activation outputs of every layer for every input of `data`.
ActivationTrace record_activations(const masknet::MaskedNetwork& net, const masknet::Dataset& data);

enum class CompressMode { AveragePool, MagnitudeTopK };

/// AveragePool: means over contiguous groups of size dim/target_dim.
/// MagnitudeTopK: the target_dim largest-magnitude entries in original order
/// (earlier index wins ties). Throws std::invalid_argument when the source is
/// shorter than target_dim, target_dim is 0, or pooling does not divide.
Eigen::VectorXd compress(const Eigen::VectorXd& v, std::size_t target_dim, CompressMode mode);

struct StudentConfig {
  /// Hidden width of each block: ceil(width_factor x teacher fan_out).
  double width_factor = 4.0;
  /// Block output width: output_factor x teacher fan_out, compressed back.
  std::size_t output_factor = 1;
  masknet::Activation hidden_activation = masknet::Activation::ReLU;
  std::uint64_t seed = 0;
};

/// Teacher of depth l and a random student of depth 2l held as l two-layer
/// blocks. Block i maps teacher layer i's fan_in to a hidden layer and then
/// to output_factor x its fan_out under the teacher's activation.
struct TeacherStudentPair {
  masknet::MaskedNetwork teacher;
  std::vector<masknet::MaskedNetwork> blocks;
  double width_factor = 1.0;

  std::size_t student_depth() const noexcept { return 2 * blocks.size(); }
  /// Throws std::invalid_argument if depths or widths break the pairing.
  void validate() const;
};

TeacherStudentPair make_pair(masknet::MaskedNetwork teacher, const StudentConfig& config);

/// Mask layout over both layers of a block.
masknet::MaskLayout block_layout(const masknet::MaskedNetwork& block);

/// Mean over samples of ||teacher[s] - compress(block(inputs[s]))||_2 under
/// the block's current masks.
double block_loss(const std::vector<Eigen::VectorXd>& teacher_activations, const masknet::MaskedNetwork& block,
                  const std::vector<Eigen::VectorXd>& inputs, CompressMode mode);

/// Compressed outputs of `block` for each input.
std::vector<Eigen::VectorXd> block_outputs(const masknet::MaskedNetwork& block,
                                           const std::vector<Eigen::VectorXd>& inputs, std::size_t target_dim,
                                           CompressMode mode);

/// Block loss of every mask over block_layout(block), indexed by mask.
qsim::DiagonalCostHamiltonian block_cost_hamiltonian(const std::vector<Eigen::VectorXd>& teacher_activations,
                                                     const masknet::MaskedNetwork& block,
                                                     const std::vector<Eigen::VectorXd>& inputs, CompressMode mode);

enum class Backend { Exhaustive, Grover, Qaoa, Anneal };
enum class Chaining { Student, Teacher };

struct DistillConfig {
  Backend backend = Backend::Exhaustive;
  CompressMode compress = CompressMode::AveragePool;
  Chaining chaining = Chaining::Student;
  std::size_t per_block_bit_budget = 12;
  std::uint64_t seed = 0;
  /// Grover threshold per block; unset means 1.1 x the best of 16 random
  /// masks.
  std::optional<std::vector<double>> grover_epsilons;
  variational::QaoaConfig qaoa;
  anneal::AnnealSchedule anneal;
};

struct BlockResult {
  masknet::FlatMask mask;
  double loss = 0.0;
  /// Exact block optimum and the selected mask's distance to it.
  double exhaustive_min = 0.0;
  double gap = 0.0;
  std::optional<double> epsilon;
  std::size_t oracle_calls = 0;
  std::vector<Eigen::VectorXd> inputs;
};

struct DistillResult {
  std::vector<BlockResult> blocks;
  double total_loss = 0.0;
};

/// Optimizes the blocks in order, each against the teacher's activation of
/// the matching layer. Under Student chaining block i sees block i-1's
/// compressed masked outputs; under Teacher chaining it sees the teacher's.
/// Throws std::invalid_argument when a block exceeds the bit budget or a
/// quantum backend's budget exceeds max_qubits(), and MethodFailure when
/// Grover finds no mask below its threshold.
DistillResult distill_select(const TeacherStudentPair& pair, const masknet::Dataset& data,
                             const DistillConfig& config);

/// Compressed outputs of each block when the student is run with `masks`
/// chained from the data inputs.
std::vector<std::vector<Eigen::VectorXd>> replay_student(const TeacherStudentPair& pair,
                                                         const std::vector<masknet::FlatMask>& masks,
                                                         const masknet::Dataset& data, CompressMode mode);

/// Sum of block losses of `masks` with student chaining.
double student_total_loss(const TeacherStudentPair& pair, const std::vector<masknet::FlatMask>& masks,
                          const masknet::Dataset& data, CompressMode mode);

/// Single Identity layer fitted by least squares on (inputs, targets).
masknet::MaskedNetwork fit_linear_teacher(const masknet::Dataset& data);

/// {"total_loss", "blocks": [{"mask", "loss", "exhaustive_min", "gap",
/// "epsilon", "oracle_calls"}]} with masks as hex plus layout.
nlohmann::json result_to_json(const DistillResult& result);

}  // namespace qns::distill
