#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qns/harness/config.hpp"

namespace qns::harness {

struct Artifact {
  std::string file;  // relative to the record's directory
  std::string fnv1a;
};

struct SeedRun {
  std::uint64_t seed = 0;
  /// Deterministic payload: a function of (config, seed) only.
  nlohmann::json metrics;
  double wall_seconds = 0.0;
  std::vector<Artifact> artifacts;
  /// Set when the method raised MethodFailure for this seed.
  std::optional<std::string> error;
};

struct ExperimentRecord {
  nlohmann::json config;
  std::string task_id;
  Method method = Method::Exhaustive;
  std::vector<SeedRun> runs;

  bool any_failed() const;
};

/// Runs every seed of the experiment. Seeds that raise MethodFailure are
/// recorded with their error and success = false; ConfigError and
/// std::invalid_argument propagate. Artifacts (loss curves, traces, tables)
/// are written below `artifact_dir` when it is given.
ExperimentRecord run_experiment(const ExperimentConfig& config,
                                const std::optional<std::filesystem::path>& artifact_dir = std::nullopt);

/// Metrics of one seed; exposed so tests can check payload determinism.
nlohmann::json run_seed(const ExperimentConfig& config, const Task& task, std::uint64_t seed,
                        const std::optional<std::filesystem::path>& artifact_dir, std::vector<Artifact>& artifacts);

}  // namespace qns::harness
