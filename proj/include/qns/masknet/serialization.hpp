#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"

namespace qns::masknet {

// Network document:
//   {"specs": [{"fan_in": 2, "fan_out": 4, "activation": "relu"}, ...],
//    "seed": 7,
//    "weights": [[[...], ...], ...],   optional, one fan_in x fan_out array per layer
//    "biases":  [[...], ...]}          optional
// Without "weights" the network is regenerated from (specs, seed).

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

nlohmann::json specs_to_json(const std::vector<LayerSpec>& specs);
std::vector<LayerSpec> specs_from_json(const nlohmann::json& j);

nlohmann::json network_to_json(const MaskedNetwork& net, bool include_weights = true);
MaskedNetwork network_from_json(const nlohmann::json& j);

MaskedNetwork load_network(const std::filesystem::path& path);
void save_network(const MaskedNetwork& net, const std::filesystem::path& path, bool include_weights = true);

nlohmann::json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const nlohmann::json& j);

nlohmann::json layout_to_json(const MaskLayout& layout);
MaskLayout layout_from_json(const nlohmann::json& j);

/// {"hex": ..., "bits": n, "layout": [...]}
nlohmann::json flat_mask_to_json(const FlatMask& mask);
FlatMask flat_mask_from_json(const nlohmann::json& j);

}  // namespace qns::masknet
