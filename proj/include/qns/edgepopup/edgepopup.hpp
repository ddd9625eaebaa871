#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qns/common.hpp"
#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"

namespace qns::edgepopup {

/// Rotation angles live in [-kThetaLimit, kThetaLimit].
inline constexpr double kThetaLimit = std::numbers::pi / 2.0;

/// P(|1>) after H then Ry(theta) on |0>: (1 + sin theta) / 2. Throws
/// std::invalid_argument outside the clamp range.
double prob_one(double theta);

/// One angle per weight, shaped like the layer's weight matrix.
struct PopupCircuit {
  std::vector<Eigen::MatrixXd> thetas;

  /// All angles zero (keep-probability 1/2).
  static PopupCircuit zeros(const masknet::MaskedNetwork& net);
};

/// Independent draws: entry 1 with probability prob_one(theta).
Eigen::MatrixXd sample_mask(const Eigen::MatrixXd& thetas, Rng& rng);
std::vector<Eigen::MatrixXd> sample_masks(const PopupCircuit& circuit, Rng& rng);

/// Entry 1 iff prob_one(theta) >= 1/2. With `keep_fraction` set, each
/// layer instead keeps its ceil(fraction * size) largest angles (lowest
/// flat index first on ties).
std::vector<Eigen::MatrixXd> threshold_masks(const PopupCircuit& circuit,
                                             std::optional<double> keep_fraction = std::nullopt);

/// dL/dI_v for every neuron v, with L = ||F(x) - y||_2 and I_v the
/// pre-activation of v in the forward pass recorded in `trace` (the masked
/// network's pass). With `straight_through` the backward pass multiplies by
/// the full weights W, as if every connection were used; otherwise by the
/// masked weights M . W (plain backprop).
std::vector<Eigen::VectorXd> preactivation_gradients(const masknet::MaskedNetwork& net,
                                                     const masknet::ForwardTrace& trace, const Eigen::VectorXd& y,
                                                     bool straight_through = true);

enum class EvalMode { SampledMask, ThresholdMask };
enum class MaskSampling { PerSample, PerEpoch };
/// Constant: alpha every epoch. Linear: alpha * (1 - e / epochs) in epoch e
/// (counted from 0).
enum class AlphaSchedule { Constant, Linear };

struct PopupTrainConfig {
  double alpha = 0.1;
  AlphaSchedule schedule = AlphaSchedule::Constant;
  std::size_t epochs = 20;
  EvalMode eval_mode = EvalMode::ThresholdMask;
  MaskSampling sampling = MaskSampling::PerSample;
  /// Per-layer top-k rule for the evaluation mask; unset means threshold.
  std::optional<double> keep_fraction;
  std::uint64_t seed = 0;
};

/// One straight-through step on sample (x, y) under the given masks:
/// theta_uv -= alpha * dL/dI_v * Z_u * w_uv, then clamped. Z_u is the
/// output of neuron u feeding the layer. Returns the sample loss. Throws
/// MethodFailure naming `sample_index` on a non-finite gradient.
double popup_update(const masknet::MaskedNetwork& net, PopupCircuit& circuit, const std::vector<Eigen::MatrixXd>& masks,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& y, double alpha, std::size_t sample_index = 0);

struct PopupResult {
  PopupCircuit final_thetas;
  std::vector<double> loss_curve;  // one entry per epoch, under eval_mode
  masknet::FlatMask final_mask;    // over weight_layout(net)
  double final_loss = 0.0;         // loss under final_mask
};

/// Runs `epochs` passes over a seeded shuffle of the data, updating after
/// every sample. Masks are sampled per sample or once per epoch.
PopupResult popup_train(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                        const PopupTrainConfig& config);

/// Flat mask over weight_layout(net) from per-layer matrices.
masknet::FlatMask masks_to_flat(const masknet::MaskedNetwork& net, const std::vector<Eigen::MatrixXd>& masks);

/// {"epoch": e, "seed": s, "thetas": [layer][row][col]}
nlohmann::json checkpoint_to_json(const PopupCircuit& circuit, std::size_t epoch, std::uint64_t seed);
PopupCircuit checkpoint_from_json(const nlohmann::json& j, const masknet::MaskedNetwork& net);
void save_checkpoint(const PopupCircuit& circuit, std::size_t epoch, std::uint64_t seed,
                     const std::filesystem::path& path);

/// "epoch,loss", epochs numbered from 1.
void write_loss_curve_csv(const std::vector<double>& loss_curve, const std::filesystem::path& path);

}  // namespace qns::edgepopup
