#include "qns/masknet/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qns/common.hpp"

namespace qns::masknet {

double activate(Activation a, double z) { return a == Activation::ReLU ? (z > 0.0 ? z : 0.0) : z; }

Eigen::VectorXd activate(Activation a, const Eigen::VectorXd& z) {
  if (a == Activation::Identity) return z;
  return z.cwiseMax(0.0);
}

void validate_specs(const std::vector<LayerSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t l = 0; l < specs.size(); ++l) {
    if (specs[l].fan_in < 1 || specs[l].fan_out < 1) {
      throw std::invalid_argument("layer " + std::to_string(l) + " has zero width");
    }
    if (l > 0 && specs[l - 1].fan_out != specs[l].fan_in) {
      throw std::invalid_argument("layer " + std::to_string(l) + " fan_in " + std::to_string(specs[l].fan_in) +
                                  " does not match previous fan_out " + std::to_string(specs[l - 1].fan_out));
    }
  }
}

MaskedNetwork::MaskedNetwork(std::vector<LayerSpec> specs, std::shared_ptr<const std::vector<LayerParameters>> params,
                             std::uint64_t seed)
    : specs_(std::move(specs)), params_(std::move(params)), seed_(seed) {
  reset_masks();
}

MaskedNetwork MaskedNetwork::random(std::vector<LayerSpec> specs, std::uint64_t seed) {
  validate_specs(specs);
  Rng rng(seed);
  auto params = std::make_shared<std::vector<LayerParameters>>();
  params->reserve(specs.size());
  for (const LayerSpec& s : specs) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.fan_in));
    LayerParameters p;
    p.weights.resize(static_cast<Eigen::Index>(s.fan_in), static_cast<Eigen::Index>(s.fan_out));
    for (Eigen::Index r = 0; r < p.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.weights.cols(); ++c) {
        p.weights(r, c) = bound * (2.0 * uniform01(rng) - 1.0);
      }
    }
    p.biases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.fan_out));
    params->push_back(std::move(p));
  }
  return MaskedNetwork(std::move(specs), std::move(params), seed);
}

MaskedNetwork MaskedNetwork::from_parameters(std::vector<LayerSpec> specs, std::vector<LayerParameters> params,
                                             std::uint64_t seed) {
  validate_specs(specs);
  if (params.size() != specs.size()) throw std::invalid_argument("parameter/layer count mismatch");
  for (std::size_t l = 0; l < specs.size(); ++l) {
    const auto& p = params[l];
    if (static_cast<std::size_t>(p.weights.rows()) != specs[l].fan_in ||
        static_cast<std::size_t>(p.weights.cols()) != specs[l].fan_out) {
      throw std::invalid_argument("weight shape mismatch in layer " + std::to_string(l));
    }
    if (static_cast<std::size_t>(p.biases.size()) != specs[l].fan_out) {
      throw std::invalid_argument("bias length mismatch in layer " + std::to_string(l));
    }
  }
  return MaskedNetwork(std::move(specs), std::make_shared<const std::vector<LayerParameters>>(std::move(params)),
                       seed);
}

void MaskedNetwork::set_mask(std::size_t layer, const Eigen::MatrixXd& mask) {
  const Eigen::MatrixXd& w = weights(layer);
  if (mask.rows() != w.rows() || mask.cols() != w.cols()) {
    throw std::invalid_argument("mask shape mismatch in layer " + std::to_string(layer));
  }
  if (((mask.array() != 0.0) && (mask.array() != 1.0)).any()) {
    throw std::invalid_argument("mask entries must be 0 or 1");
  }
  masks_[layer] = mask;
}

void MaskedNetwork::set_mask_entry(std::size_t layer, std::size_t row, std::size_t col, bool keep) {
  Eigen::MatrixXd& m = masks_.at(layer);
  if (row >= static_cast<std::size_t>(m.rows()) || col >= static_cast<std::size_t>(m.cols())) {
    throw std::out_of_range("mask entry out of range");
  }
  m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = keep ? 1.0 : 0.0;
}

void MaskedNetwork::set_bias_mask_entry(std::size_t layer, std::size_t unit, bool keep) {
  Eigen::VectorXd& m = bias_masks_.at(layer);
  if (unit >= static_cast<std::size_t>(m.size())) throw std::out_of_range("bias mask entry out of range");
  m(static_cast<Eigen::Index>(unit)) = keep ? 1.0 : 0.0;
}

void MaskedNetwork::reset_masks() {
  masks_.clear();
  bias_masks_.clear();
  for (const LayerParameters& p : *params_) {
    masks_.push_back(Eigen::MatrixXd::Ones(p.weights.rows(), p.weights.cols()));
    bias_masks_.push_back(Eigen::VectorXd::Ones(p.biases.size()));
  }
}

std::size_t MaskedNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const LayerSpec& s : specs_) n += s.fan_in * s.fan_out;
  return n;
}

Eigen::VectorXd MaskedNetwork::forward(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(x.size()) + " != " + std::to_string(input_dim()));
  }
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const LayerParameters& p = (*params_)[l];
    Eigen::VectorXd z = p.weights.cwiseProduct(masks_[l]).transpose() * h + p.biases.cwiseProduct(bias_masks_[l]);
    h = activate(specs_[l].activation, z);
  }
  return h;
}

ForwardTrace MaskedNetwork::forward_trace(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim()) throw std::invalid_argument("input dimension mismatch");
  ForwardTrace trace;
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const LayerParameters& p = (*params_)[l];
    trace.inputs.push_back(h);
    Eigen::VectorXd z = p.weights.cwiseProduct(masks_[l]).transpose() * h + p.biases.cwiseProduct(bias_masks_[l]);
    h = activate(specs_[l].activation, z);
    trace.pre_activations.push_back(std::move(z));
    trace.outputs.push_back(h);
  }
  return trace;
}

}  // namespace qns::masknet
