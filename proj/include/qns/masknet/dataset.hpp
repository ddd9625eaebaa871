#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qns/masknet/network.hpp"

namespace qns::masknet {

struct Dataset {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> targets;
  std::string name;

  std::size_t size() const noexcept { return inputs.size(); }
  bool empty() const noexcept { return inputs.empty(); }
  std::size_t input_dim() const { return inputs.empty() ? 0 : static_cast<std::size_t>(inputs.front().size()); }
  std::size_t target_dim() const { return targets.empty() ? 0 : static_cast<std::size_t>(targets.front().size()); }

  /// Throws std::invalid_argument on unequal lengths or ragged dimensions.
  void validate() const;
};

/// Mean L2 distance (1/N) sum_i ||F(x_i) - y_i||_2 under the network's
/// current masks. Throws std::invalid_argument on an empty dataset.
double dataset_loss(const MaskedNetwork& net, const Dataset& data);

/// Loads rows of `input_dim` input values followed by the targets. Lines
/// starting with '#' and a non-numeric header row are skipped.
Dataset load_csv(const std::filesystem::path& path, std::size_t input_dim, std::string name = {});

void save_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace qns::masknet
