#include "qns/harness/record.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qns/common.hpp"

namespace qns::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchema = 1;

std::string utc_stamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return os.str();
}

double metric(const json& m, const char* key, double fallback) {
  if (!m.contains(key)) return fallback;
  const auto& v = m.at(key);
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  return v.is_number() ? v.get<double>() : fallback;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

json record_to_json(const ExperimentRecord& r) {
  json runs = json::array();
  json timing = json::array();
  json artifacts = json::array();
  for (const auto& s : r.runs) {
    json run{{"seed", s.seed}, {"metrics", s.metrics}};
    if (s.error) run["error"] = *s.error;
    runs.push_back(std::move(run));
    timing.push_back({{"seed", s.seed}, {"wall_seconds", s.wall_seconds}});
    for (const auto& a : s.artifacts) artifacts.push_back({{"seed", s.seed}, {"file", a.file}, {"fnv1a", a.fnv1a}});
  }
  return {{"schema", kSchema},         {"method", method_name(r.method)}, {"task_id", r.task_id},
          {"config", r.config},        {"runs", std::move(runs)},         {"timing", std::move(timing)},
          {"artifacts", std::move(artifacts)}};
}

ExperimentRecord record_from_json(const json& j) {
  try {
    if (j.at("schema").get<int>() != kSchema) throw ConfigError("record: unsupported schema");
    ExperimentRecord r;
    r.method = parse_method(j.at("method").get<std::string>());
    r.task_id = j.at("task_id").get<std::string>();
    r.config = j.value("config", json());
    for (const auto& e : j.at("runs")) {
      SeedRun s;
      s.seed = e.at("seed").get<std::uint64_t>();
      s.metrics = e.at("metrics");
      if (e.contains("error")) s.error = e.at("error").get<std::string>();
      r.runs.push_back(std::move(s));
    }
    for (const auto& t : j.value("timing", json::array())) {
      for (auto& s : r.runs)
        if (s.seed == t.at("seed").get<std::uint64_t>()) s.wall_seconds = t.at("wall_seconds").get<double>();
    }
    for (const auto& a : j.value("artifacts", json::array())) {
      for (auto& s : r.runs)
        if (s.seed == a.at("seed").get<std::uint64_t>())
          s.artifacts.push_back({a.at("file").get<std::string>(), a.at("fnv1a").get<std::string>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("record: ") + e.what());
  }
}

std::string unique_stem(const fs::path& dir, const ExperimentConfig& config) {
  const std::string base = std::string(method_name(config.method)) + "-" + utc_stamp();
  std::string stem = base;
  for (int i = 1; fs::exists(dir / (stem + ".json")) || fs::exists(dir / stem); ++i) {
    stem = base + "-" + std::to_string(i);
  }
  return stem;
}

fs::path write_record(const ExperimentRecord& record, const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  const fs::path path = dir / (stem + ".json");
  if (fs::exists(path)) throw ConfigError("record: refusing to overwrite " + path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("record: cannot write " + path.string());
  out << record_to_json(record).dump(2) << '\n';
  return path;
}

ExperimentRecord load_record(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("record: cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("record " + path.string() + ": " + e.what());
  }
  return record_from_json(j);
}

std::vector<SummaryRow> compare(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw ConfigError("compare: no records given");
  const auto& task = records.front().task_id;
  std::vector<SummaryRow> rows;
  std::vector<std::size_t> loss_counts;
  for (const auto& r : records) {
    if (r.task_id != task) {
      throw ConfigError("compare: records come from different tasks (" + task + " vs " + r.task_id + ")");
    }
    const std::string name(method_name(r.method));
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) { return s.method == name; });
    if (it == rows.end()) {
      rows.push_back({name, 0, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0});
      loss_counts.push_back(0);
      it = rows.end() - 1;
    }
    auto& losses = loss_counts[static_cast<std::size_t>(it - rows.begin())];
    for (const auto& s : r.runs) {
      ++it->runs;
      it->success_rate += metric(s.metrics, "success", 0.0);
      it->mean_oracle_calls += metric(s.metrics, "oracle_calls", 0.0);
      if (s.metrics.contains("loss") && s.metrics.at("loss").is_number()) {
        const double l = s.metrics.at("loss").get<double>();
        it->mean_loss += l;
        it->min_loss = std::min(it->min_loss, l);
        ++losses;
      }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    const auto n = static_cast<double>(row.runs);
    row.success_rate /= n;
    row.mean_oracle_calls /= n;
    if (loss_counts[i] > 0) {
      row.mean_loss /= static_cast<double>(loss_counts[i]);
    } else {
      row.mean_loss = row.min_loss = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

std::string format_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "method" << std::right << std::setw(6) << "runs" << std::setw(14) << "mean_loss"
     << std::setw(14) << "min_loss" << std::setw(14) << "mean_calls" << std::setw(10) << "success" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(12) << r.method << std::right << std::setw(6) << r.runs << std::setw(14)
       << fmt(r.mean_loss) << std::setw(14) << fmt(r.min_loss) << std::setw(14) << fmt(r.mean_oracle_calls)
       << std::setw(10) << fmt(r.success_rate) << '\n';
  }
  return os.str();
}

std::string format_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "method,runs,mean_loss,min_loss,mean_oracle_calls,success_rate\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.runs << ',' << fmt(r.mean_loss) << ',' << fmt(r.min_loss) << ','
       << fmt(r.mean_oracle_calls) << ',' << fmt(r.success_rate) << '\n';
  }
  return os.str();
}

}  // namespace qns::harness
