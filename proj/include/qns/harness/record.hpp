#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qns/harness/runner.hpp"

namespace qns::harness {

/// {"schema", "method", "task_id", "config", "runs": [{"seed", "metrics",
/// "error"?}], "timing": [{"seed", "wall_seconds"}], "artifacts": [...]}.
/// Timing is kept apart so "runs" is byte-identical across reruns.
nlohmann::json record_to_json(const ExperimentRecord& record);
ExperimentRecord record_from_json(const nlohmann::json& j);

/// A fresh "<method>-<UTC timestamp>" stem in `dir` that no existing record
/// or artifact directory uses; a counter suffix breaks ties.
std::string unique_stem(const std::filesystem::path& dir, const ExperimentConfig& config);

/// Writes `record` to dir/<stem>.json, refusing to overwrite.
std::filesystem::path write_record(const ExperimentRecord& record, const std::filesystem::path& dir,
                                   const std::string& stem);
ExperimentRecord load_record(const std::filesystem::path& path);

struct SummaryRow {
  std::string method;
  std::size_t runs = 0;
  double mean_loss = 0.0;
  double min_loss = 0.0;
  double mean_oracle_calls = 0.0;
  double success_rate = 0.0;
};

/// One row per method, in first-seen order. Throws ConfigError on an empty
/// input or records from different tasks.
std::vector<SummaryRow> compare(const std::vector<ExperimentRecord>& records);

std::string format_table(const std::vector<SummaryRow>& rows);
std::string format_csv(const std::vector<SummaryRow>& rows);

}  // namespace qns::harness
