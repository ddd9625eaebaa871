#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qns/masknet/dataset.hpp"
#include "qns/masknet/flat_mask.hpp"
#include "qns/masknet/network.hpp"

namespace qns::harness {

enum class Method { Grover, Anneal, Qaoa, Vqe, EdgePopup, Distill, NkEsn, Exhaustive };

std::string_view method_name(Method m);
/// Case-insensitive; throws ConfigError naming the field on unknown names.
Method parse_method(std::string_view name);

/// A parsed experiment. `task`, `network` and `params` stay JSON because
/// their schema depends on the method; `snapshot` is the document as given.
struct ExperimentConfig {
  Method method = Method::Exhaustive;
  nlohmann::json task;
  nlohmann::json network;
  nlohmann::json params;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
  /// Directory that relative paths in the document resolve against.
  std::filesystem::path base_dir;
  nlohmann::json snapshot;
};

/// Validates the document: known method, nonempty distinct seeds, a task
/// object with a known type, and every referenced path present. Throws
/// ConfigError with a message naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets doc[a][b][c] for "a.b.c", creating objects as needed. Throws
/// ConfigError when an intermediate value is not an object.
void set_dotted(nlohmann::json& doc, std::string_view dotted_path, nlohmann::json value);

/// Parses a command-line value as JSON when possible and as a string
/// otherwise, so "0.5" is a number and "linear" a string.
nlohmann::json parse_value(std::string_view text);

/// Materialized task: a masked-network task (planted or CSV with a network)
/// or a time series for the ESN.
struct Task {
  std::optional<masknet::MaskedNetwork> network;
  masknet::Dataset data;
  std::optional<masknet::FlatMask> hidden_mask;
};

/// Builds the task described by config.task and config.network.
Task build_task(const ExperimentConfig& config);

/// Identifier shared by every run on the same task: FNV-1a of the task and
/// network documents plus the bytes of any referenced files.
std::string task_id(const ExperimentConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);
/// FNV-1a of a file's bytes; throws ConfigError when unreadable.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

}  // namespace qns::harness
