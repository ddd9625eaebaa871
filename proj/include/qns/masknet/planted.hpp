#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"

namespace qns::masknet {

/// Benchmark whose targets are produced by a hidden sub-mask of a fixed
/// random network, so at least one zero-loss mask exists.
struct PlantedTaskConfig {
  std::vector<LayerSpec> specs;
  std::uint64_t network_seed = 1;
  std::uint64_t task_seed = 2;
  std::size_t samples = 16;
  double keep_fraction = 0.5;
  double input_scale = 1.0;  // inputs uniform in [-scale, scale]
};

struct PlantedTask {
  MaskedNetwork network;  // masks all-ones
  Dataset data;
  FlatMask hidden_mask;   // over weight_layout(network)
};

PlantedTask make_planted_task(const PlantedTaskConfig& config);

}  // namespace qns::masknet
