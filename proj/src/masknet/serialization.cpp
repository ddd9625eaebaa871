#include "qns/masknet/serialization.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace qns::masknet {

using nlohmann::json;

std::string_view activation_name(Activation a) { return a == Activation::ReLU ? "relu" : "identity"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu" || name == "ReLU") return Activation::ReLU;
  if (name == "identity" || name == "Identity" || name == "linear") return Activation::Identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

json specs_to_json(const std::vector<LayerSpec>& specs) {
  json arr = json::array();
  for (const LayerSpec& s : specs) {
    arr.push_back({{"fan_in", s.fan_in}, {"fan_out", s.fan_out}, {"activation", activation_name(s.activation)}});
  }
  return arr;
}

std::vector<LayerSpec> specs_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("network specs must be an array");
  std::vector<LayerSpec> specs;
  for (const json& e : j) {
    LayerSpec s;
    s.fan_in = e.at("fan_in").get<std::size_t>();
    s.fan_out = e.at("fan_out").get<std::size_t>();
    s.activation = parse_activation(e.value("activation", std::string("relu")));
    specs.push_back(s);
  }
  validate_specs(specs);
  return specs;
}

json network_to_json(const MaskedNetwork& net, bool include_weights) {
  json j{{"specs", specs_to_json(net.specs())}, {"seed", net.seed()}};
  if (include_weights) {
    json weights = json::array();
    json biases = json::array();
    for (std::size_t l = 0; l < net.depth(); ++l) {
      const Eigen::MatrixXd& w = net.weights(l);
      json rows = json::array();
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
        rows.push_back(std::move(row));
      }
      weights.push_back(std::move(rows));
      const Eigen::VectorXd& b = net.biases(l);
      biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
    }
    j["weights"] = std::move(weights);
    j["biases"] = std::move(biases);
  }
  return j;
}

MaskedNetwork network_from_json(const json& j) {
  std::vector<LayerSpec> specs = specs_from_json(j.at("specs"));
  const auto seed = j.value("seed", std::uint64_t{0});
  if (!j.contains("weights")) return MaskedNetwork::random(std::move(specs), seed);

  const json& weights = j.at("weights");
  if (!weights.is_array() || weights.size() != specs.size()) {
    throw std::invalid_argument("network weights must hold one matrix per layer");
  }
  std::vector<LayerParameters> params;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    LayerParameters p;
    const json& rows = weights[l];
    if (rows.size() != specs[l].fan_in) throw std::invalid_argument("weight rows != fan_in in layer " + std::to_string(l));
    p.weights.resize(static_cast<Eigen::Index>(specs[l].fan_in), static_cast<Eigen::Index>(specs[l].fan_out));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != specs[l].fan_out) {
        throw std::invalid_argument("weight cols != fan_out in layer " + std::to_string(l));
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        p.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
      }
    }
    p.biases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(specs[l].fan_out));
    if (j.contains("biases")) {
      const auto b = j.at("biases").at(l).get<std::vector<double>>();
      if (b.size() != specs[l].fan_out) throw std::invalid_argument("bias length mismatch in layer " + std::to_string(l));
      for (std::size_t c = 0; c < b.size(); ++c) p.biases(static_cast<Eigen::Index>(c)) = b[c];
    }
    params.push_back(std::move(p));
  }
  return MaskedNetwork::from_parameters(std::move(specs), std::move(params), seed);
}

MaskedNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path.string());
  return network_from_json(json::parse(in));
}

void save_network(const MaskedNetwork& net, const std::filesystem::path& path, bool include_weights) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << network_to_json(net, include_weights).dump(2) << '\n';
}

json dataset_to_json(const Dataset& data) {
  json inputs = json::array();
  json targets = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    inputs.push_back(std::vector<double>(data.inputs[i].data(), data.inputs[i].data() + data.inputs[i].size()));
    targets.push_back(std::vector<double>(data.targets[i].data(), data.targets[i].data() + data.targets[i].size()));
  }
  return {{"name", data.name}, {"inputs", std::move(inputs)}, {"targets", std::move(targets)}};
}

Dataset dataset_from_json(const json& j) {
  Dataset d;
  d.name = j.value("name", std::string{});
  for (const json& row : j.at("inputs")) {
    const auto v = row.get<std::vector<double>>();
    d.inputs.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  for (const json& row : j.at("targets")) {
    const auto v = row.get<std::vector<double>>();
    d.targets.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  d.validate();
  return d;
}

json layout_to_json(const MaskLayout& layout) {
  json arr = json::array();
  for (const MaskSlot& s : layout) {
    if (s.bias) arr.push_back({{"layer", s.layer}, {"bias", s.col}});
    else arr.push_back({{"layer", s.layer}, {"row", s.row}, {"col", s.col}});
  }
  return arr;
}

MaskLayout layout_from_json(const json& j) {
  MaskLayout layout;
  for (const json& e : j) {
    MaskSlot s;
    s.layer = e.at("layer").get<std::size_t>();
    if (e.contains("bias")) {
      s.bias = true;
      s.col = e.at("bias").get<std::size_t>();
    } else {
      s.row = e.at("row").get<std::size_t>();
      s.col = e.at("col").get<std::size_t>();
    }
    layout.push_back(s);
  }
  return layout;
}

json flat_mask_to_json(const FlatMask& mask) {
  return {{"hex", mask.to_hex()}, {"bits", mask.size()}, {"layout", layout_to_json(mask.layout)}};
}

FlatMask flat_mask_from_json(const json& j) {
  MaskLayout layout = layout_from_json(j.at("layout"));
  if (j.at("bits").get<std::size_t>() != layout.size()) throw std::invalid_argument("mask width/layout mismatch");
  return FlatMask::from_hex(j.at("hex").get<std::string>(), std::move(layout));
}

}  // namespace qns::masknet
