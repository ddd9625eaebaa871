#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qns/common.hpp"
#include "qns/harness/config.hpp"
#include "qns/harness/record.hpp"
#include "qns/harness/runner.hpp"

namespace fs = std::filesystem;
using namespace qns;
using namespace qns::harness;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kConfigError = 2;
constexpr int kMethodFailure = 3;

int execute(const ExperimentConfig& config, std::ostream& out) {
  const auto stem = unique_stem(config.output_dir, config);
  const auto record = run_experiment(config, config.output_dir / stem);
  const auto path = write_record(record, config.output_dir, stem);
  out << "wrote " << path.string() << '\n';
  for (const auto& r : record.runs) {
    out << "  seed " << r.seed;
    if (r.error) {
      out << "  FAILED: " << *r.error << '\n';
      continue;
    }
    if (r.metrics.contains("loss")) out << "  loss " << r.metrics.at("loss");
    if (r.metrics.contains("success")) out << "  success " << r.metrics.at("success");
    if (r.metrics.contains("oracle_calls")) out << "  oracle_calls " << r.metrics.at("oracle_calls");
    out << '\n';
  }
  return record.any_failed() ? kMethodFailure : kOk;
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw ConfigError("--values: empty entry in '" + list + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError("--values: no values given");
  return out;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file not found: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask search over fixed-weight networks with simulated quantum and classical optimizers"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its record");
  run->add_option("config", run_path, "Experiment config (JSON)")->required();

  std::vector<std::string> record_paths;
  std::string csv_path;
  auto* cmp = app.add_subcommand("compare", "Summarize records that share a task");
  cmp->add_option("records", record_paths, "Record files")->required();
  cmp->add_option("--csv", csv_path, "Also write the summary as CSV");

  std::string sweep_path, sweep_param, sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run a config once per value of one parameter");
  sweep->add_option("config", sweep_path, "Experiment config (JSON)")->required();
  sweep->add_option("--param", sweep_param, "Dotted path into the config, e.g. params.alpha")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return execute(load_config(run_path), std::cout);

    if (*cmp) {
      std::vector<ExperimentRecord> records;
      for (const auto& p : record_paths) records.push_back(load_record(p));
      const auto rows = compare(records);
      std::cout << format_table(rows);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ConfigError("--csv: cannot write " + csv_path);
        out << format_csv(rows);
      }
      return kOk;
    }

    const auto doc = read_json(sweep_path);
    const fs::path base = fs::path(sweep_path).parent_path();
    const auto values = split_values(sweep_values);
    std::vector<ExperimentConfig> configs;
    for (const auto& v : values) {
      auto variant = doc;
      set_dotted(variant, sweep_param, parse_value(v));
      configs.push_back(parse_config(variant, base));
    }
    int code = kOk;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      std::cout << sweep_param << " = " << values[i] << '\n';
      if (execute(configs[i], std::cout) != kOk) code = kMethodFailure;
    }
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const MethodFailure& e) {
    std::cerr << "method failure: " << e.what() << '\n';
    return kMethodFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
}
