#include "qns/edgepopup/edgepopup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qns::edgepopup {

double prob_one(double theta) {
  if (!(std::abs(theta) <= kThetaLimit)) throw std::invalid_argument("rotation angle outside [-pi/2, pi/2]");
  return (1.0 + std::sin(theta)) / 2.0;
}

PopupCircuit PopupCircuit::zeros(const masknet::MaskedNetwork& net) {
  PopupCircuit c;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    c.thetas.push_back(Eigen::MatrixXd::Zero(net.weights(l).rows(), net.weights(l).cols()));
  }
  return c;
}

Eigen::MatrixXd sample_mask(const Eigen::MatrixXd& thetas, Rng& rng) {
  Eigen::MatrixXd m(thetas.rows(), thetas.cols());
  // row-major draw order so that the stream does not depend on storage order
  for (Eigen::Index i = 0; i < thetas.rows(); ++i) {
    for (Eigen::Index j = 0; j < thetas.cols(); ++j) m(i, j) = uniform01(rng) < prob_one(thetas(i, j)) ? 1.0 : 0.0;
  }
  return m;
}

std::vector<Eigen::MatrixXd> sample_masks(const PopupCircuit& circuit, Rng& rng) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& t : circuit.thetas) out.push_back(sample_mask(t, rng));
  return out;
}

std::vector<Eigen::MatrixXd> threshold_masks(const PopupCircuit& circuit, std::optional<double> keep_fraction) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& t : circuit.thetas) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    if (!keep_fraction) {
      for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j) m(i, j) = prob_one(t(i, j)) >= 0.5 ? 1.0 : 0.0;
    } else {
      if (!(*keep_fraction >= 0.0 && *keep_fraction <= 1.0)) throw std::invalid_argument("keep fraction must lie in [0, 1]");
      const auto size = static_cast<std::size_t>(t.size());
      const auto keep = static_cast<std::size_t>(std::ceil(*keep_fraction * static_cast<double>(size)));
      std::vector<std::size_t> idx(size);
      std::iota(idx.begin(), idx.end(), 0);
      const auto at = [&](std::size_t k) { return t(static_cast<Eigen::Index>(k / t.cols()), static_cast<Eigen::Index>(k % t.cols())); };
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return at(a) > at(b); });
      for (std::size_t k = 0; k < keep; ++k) {
        m(static_cast<Eigen::Index>(idx[k] / t.cols()), static_cast<Eigen::Index>(idx[k] % t.cols())) = 1.0;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Eigen::VectorXd> preactivation_gradients(const masknet::MaskedNetwork& net,
                                                     const masknet::ForwardTrace& trace, const Eigen::VectorXd& y,
                                                     bool straight_through) {
  const std::size_t depth = net.depth();
  if (trace.pre_activations.size() != depth) throw std::invalid_argument("trace depth does not match network");
  const Eigen::VectorXd& out = trace.outputs.back();
  if (out.size() != y.size()) throw std::invalid_argument("target dimension does not match network output");

  const Eigen::VectorXd residual = out - y;
  const double norm = residual.norm();
  // the L2 norm is not differentiable at zero residual; its subgradient 0 is used
  Eigen::VectorXd upstream = (norm > 0.0 || std::isnan(norm)) ? Eigen::VectorXd(residual / norm) : Eigen::VectorXd::Zero(y.size());

  std::vector<Eigen::VectorXd> grads(depth);
  for (std::size_t l = depth; l-- > 0;) {
    Eigen::VectorXd delta = upstream;
    if (net.spec(l).activation == masknet::Activation::ReLU) {
      const Eigen::VectorXd& z = trace.pre_activations[l];
      for (Eigen::Index v = 0; v < delta.size(); ++v)
        if (!(z(v) > 0.0)) delta(v) = 0.0;
    }
    grads[l] = delta;
    if (l > 0) {
      if (straight_through) {
        upstream = net.weights(l) * delta;
      } else {
        upstream = net.weights(l).cwiseProduct(net.mask(l)) * delta;
      }
    }
  }
  return grads;
}

double popup_update(const masknet::MaskedNetwork& net, PopupCircuit& circuit, const std::vector<Eigen::MatrixXd>& masks,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& y, double alpha, std::size_t sample_index) {
  if (circuit.thetas.size() != net.depth() || masks.size() != net.depth()) {
    throw std::invalid_argument("circuit/mask depth does not match network");
  }
  masknet::MaskedNetwork view = net;
  for (std::size_t l = 0; l < net.depth(); ++l) view.set_mask(l, masks[l]);
  const masknet::ForwardTrace trace = view.forward_trace(x);
  const auto grads = preactivation_gradients(view, trace, y, true);

  for (std::size_t l = 0; l < net.depth(); ++l) {
    if (!grads[l].allFinite()) {
      throw MethodFailure("non-finite edge-popup gradient at sample " + std::to_string(sample_index));
    }
    const Eigen::VectorXd& z_in = trace.inputs[l];
    const Eigen::MatrixXd step = (z_in * grads[l].transpose()).cwiseProduct(net.weights(l));
    circuit.thetas[l] = (circuit.thetas[l] - alpha * step).cwiseMax(-kThetaLimit).cwiseMin(kThetaLimit);
  }
  return (trace.outputs.back() - y).norm();
}

masknet::FlatMask masks_to_flat(const masknet::MaskedNetwork& net, const std::vector<Eigen::MatrixXd>& masks) {
  masknet::MaskLayout layout = masknet::weight_layout(net);
  masknet::FlatMask flat;
  flat.bits.reserve(layout.size());
  for (const auto& s : layout) {
    flat.bits.push_back(masks.at(s.layer)(static_cast<Eigen::Index>(s.row), static_cast<Eigen::Index>(s.col)) != 0.0);
  }
  flat.layout = std::move(layout);
  return flat;
}

namespace {

double masked_loss(const masknet::MaskedNetwork& net, const std::vector<Eigen::MatrixXd>& masks,
                   const masknet::Dataset& data) {
  masknet::MaskedNetwork view = net;
  for (std::size_t l = 0; l < net.depth(); ++l) view.set_mask(l, masks[l]);
  return masknet::dataset_loss(view, data);
}

}  // namespace

PopupResult popup_train(const masknet::MaskedNetwork& net, const masknet::Dataset& data,
                        const PopupTrainConfig& config) {
  if (!(config.alpha > 0.0)) throw std::invalid_argument("edge-popup learning rate must be positive");
  data.validate();
  if (data.empty()) throw std::invalid_argument("edge-popup needs a nonempty dataset");

  Rng rng(config.seed);
  PopupResult result;
  result.final_thetas = PopupCircuit::zeros(net);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double alpha = config.schedule == AlphaSchedule::Linear
                             ? config.alpha * (1.0 - static_cast<double>(epoch) / static_cast<double>(config.epochs))
                             : config.alpha;
    std::vector<Eigen::MatrixXd> masks;
    if (config.sampling == MaskSampling::PerEpoch) masks = sample_masks(result.final_thetas, rng);
    for (std::size_t i : order) {
      if (config.sampling == MaskSampling::PerSample) masks = sample_masks(result.final_thetas, rng);
      popup_update(net, result.final_thetas, masks, data.inputs[i], data.targets[i], alpha, i);
    }
    const auto eval = config.eval_mode == EvalMode::ThresholdMask
                          ? threshold_masks(result.final_thetas, config.keep_fraction)
                          : sample_masks(result.final_thetas, rng);
    result.loss_curve.push_back(masked_loss(net, eval, data));
  }

  const auto final_masks = threshold_masks(result.final_thetas, config.keep_fraction);
  result.final_mask = masks_to_flat(net, final_masks);
  result.final_loss = masked_loss(net, final_masks, data);
  return result;
}

nlohmann::json checkpoint_to_json(const PopupCircuit& circuit, std::size_t epoch, std::uint64_t seed) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& t : circuit.thetas) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < t.cols(); ++j) row.push_back(t(i, j));
      rows.push_back(std::move(row));
    }
    layers.push_back(std::move(rows));
  }
  return {{"epoch", epoch}, {"seed", seed}, {"thetas", std::move(layers)}};
}

PopupCircuit checkpoint_from_json(const nlohmann::json& j, const masknet::MaskedNetwork& net) {
  const auto& layers = j.at("thetas");
  if (layers.size() != net.depth()) throw std::invalid_argument("checkpoint depth does not match network");
  PopupCircuit c = PopupCircuit::zeros(net);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    auto& t = c.thetas[l];
    if (layers[l].size() != static_cast<std::size_t>(t.rows())) throw std::invalid_argument("checkpoint shape mismatch");
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const auto& row = layers[l][static_cast<std::size_t>(i)];
      if (row.size() != static_cast<std::size_t>(t.cols())) throw std::invalid_argument("checkpoint shape mismatch");
      for (Eigen::Index k = 0; k < t.cols(); ++k) {
        const double v = row[static_cast<std::size_t>(k)].get<double>();
        if (!(std::abs(v) <= kThetaLimit)) throw std::invalid_argument("checkpoint angle outside clamp range");
        t(i, k) = v;
      }
    }
  }
  return c;
}

void save_checkpoint(const PopupCircuit& circuit, std::size_t epoch, std::uint64_t seed,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << checkpoint_to_json(circuit, epoch, seed).dump(2) << '\n';
}

void write_loss_curve_csv(const std::vector<double>& loss_curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t e = 0; e < loss_curve.size(); ++e) out << e + 1 << ',' << loss_curve[e] << '\n';
}

}  // namespace qns::edgepopup
