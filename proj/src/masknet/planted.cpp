#include "qns/masknet/planted.hpp"

#include <stdexcept>

#include "qns/common.hpp"

namespace qns::masknet {

PlantedTask make_planted_task(const PlantedTaskConfig& config) {
  if (config.samples == 0) throw std::invalid_argument("planted task needs at least one sample");
  if (config.keep_fraction < 0.0 || config.keep_fraction > 1.0) {
    throw std::invalid_argument("keep_fraction must lie in [0, 1]");
  }
  MaskedNetwork net = MaskedNetwork::random(config.specs, config.network_seed);
  Rng rng(config.task_seed);

  MaskLayout layout = weight_layout(net);
  FlatMask hidden = FlatMask::ones(layout);
  for (auto& b : hidden.bits) b = uniform01(rng) < config.keep_fraction ? 1 : 0;

  const MaskedNetwork teacher = apply_flat_mask(net, hidden);
  Dataset data;
  data.name = "planted";
  for (std::size_t i = 0; i < config.samples; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(net.input_dim()));
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = config.input_scale * (2.0 * uniform01(rng) - 1.0);
    data.targets.push_back(teacher.forward(x));
    data.inputs.push_back(std::move(x));
  }
  return PlantedTask{std::move(net), std::move(data), std::move(hidden)};
}

}  // namespace qns::masknet
