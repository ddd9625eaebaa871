#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace qns::masknet {

enum class Activation { ReLU, Identity };

struct LayerSpec {
  std::size_t fan_in = 1;
  std::size_t fan_out = 1;
  Activation activation = Activation::ReLU;

  bool operator==(const LayerSpec&) const = default;
};

/// Fixed parameters of one layer. Weights are fan_in x fan_out so a row
/// vector input x maps to x * W + b.
struct LayerParameters {
  Eigen::MatrixXd weights;
  Eigen::VectorXd biases;
};

/// Per-layer forward intermediates for one input.
struct ForwardTrace {
  std::vector<Eigen::VectorXd> inputs;           // input to layer l
  std::vector<Eigen::VectorXd> pre_activations;  // x * (M . W) + b
  std::vector<Eigen::VectorXd> outputs;          // activation applied
};

double activate(Activation a, double z);
Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z);

/// A feed-forward network whose weights never change after construction.
///
/// Copies share the immutable weights and own their masks, so a copy is a
/// cheap mask view that may be evaluated concurrently with the original.
class MaskedNetwork {
 public:
  /// Random network: weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)],
  /// zero biases, all-ones masks. Throws std::invalid_argument when the
  /// layer chain is empty or fan_out/fan_in do not match.
  static MaskedNetwork random(std::vector<LayerSpec> specs, std::uint64_t seed);

  /// Network with explicit parameters (for example a trained teacher).
  static MaskedNetwork from_parameters(std::vector<LayerSpec> specs, std::vector<LayerParameters> params,
                                       std::uint64_t seed = 0);

  std::size_t depth() const noexcept { return specs_.size(); }
  const std::vector<LayerSpec>& specs() const noexcept { return specs_; }
  const LayerSpec& spec(std::size_t layer) const { return specs_.at(layer); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t input_dim() const { return specs_.front().fan_in; }
  std::size_t output_dim() const { return specs_.back().fan_out; }

  const Eigen::MatrixXd& weights(std::size_t layer) const { return params_->at(layer).weights; }
  const Eigen::VectorXd& biases(std::size_t layer) const { return params_->at(layer).biases; }
  const Eigen::MatrixXd& mask(std::size_t layer) const { return masks_.at(layer); }
  /// Bias masks are all-ones unless a layout that includes biases is applied.
  const Eigen::VectorXd& bias_mask(std::size_t layer) const { return bias_masks_.at(layer); }

  /// Replaces one layer's mask; entries must be exactly 0 or 1.
  void set_mask(std::size_t layer, const Eigen::MatrixXd& mask);
  void set_mask_entry(std::size_t layer, std::size_t row, std::size_t col, bool keep);
  void set_bias_mask_entry(std::size_t layer, std::size_t unit, bool keep);
  void reset_masks();

  /// Number of maskable parameters (weights) over all layers.
  std::size_t parameter_count() const;

  /// True when both networks share the same weight storage.
  bool shares_weights_with(const MaskedNetwork& other) const noexcept { return params_ == other.params_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  ForwardTrace forward_trace(const Eigen::VectorXd& x) const;

 private:
  MaskedNetwork(std::vector<LayerSpec> specs, std::shared_ptr<const std::vector<LayerParameters>> params,
                std::uint64_t seed);

  std::vector<LayerSpec> specs_;
  std::shared_ptr<const std::vector<LayerParameters>> params_;
  std::vector<Eigen::MatrixXd> masks_;
  std::vector<Eigen::VectorXd> bias_masks_;
  std::uint64_t seed_ = 0;
};

/// Throws std::invalid_argument unless the specs form a valid chain.
void validate_specs(const std::vector<LayerSpec>& specs);

}  // namespace qns::masknet
