#include "qns/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "qns/common.hpp"
#include "qns/masknet/planted.hpp"
#include "qns/masknet/serialization.hpp"

namespace qns::harness {

using nlohmann::json;

namespace {

constexpr std::pair<Method, std::string_view> kMethods[] = {
    {Method::Grover, "grover"}, {Method::Anneal, "anneal"},       {Method::Qaoa, "qaoa"},
    {Method::Vqe, "vqe"},       {Method::EdgePopup, "edgepopup"}, {Method::Distill, "distill"},
    {Method::NkEsn, "nkesn"},   {Method::Exhaustive, "exhaustive"}};

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::filesystem::path resolve(const ExperimentConfig& c, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || c.base_dir.empty() ? path : c.base_dir / path;
}

void require_file(const ExperimentConfig& c, const json& holder, const char* field, const std::string& where) {
  if (!holder.contains("path")) throw ConfigError(where + ".path is required");
  if (!holder.at("path").is_string()) throw ConfigError(where + ".path must be a string");
  const auto path = resolve(c, holder.at("path").get<std::string>());
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError(where + "." + field + ": file not found: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [k, v] : kMethods)
    if (k == m) return v;
  return "unknown";
}

Method parse_method(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& [k, v] : kMethods)
    if (v == key) return k;
  throw ConfigError("method: unknown method '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  ExperimentConfig c;
  c.snapshot = doc;
  c.base_dir = base_dir;
  if (!doc.contains("method") || !doc.at("method").is_string()) throw ConfigError("method: required string");
  c.method = parse_method(doc.at("method").get<std::string>());

  if (!doc.contains("seeds") || !doc.at("seeds").is_array() || doc.at("seeds").empty()) {
    throw ConfigError("seeds: must be a nonempty array of non-negative integers");
  }
  std::set<std::uint64_t> seen;
  for (const auto& s : doc.at("seeds")) {
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seeds: entries must be non-negative integers");
    }
    const auto v = s.get<std::uint64_t>();
    if (!seen.insert(v).second) throw ConfigError("seeds: duplicate seed " + std::to_string(v));
    c.seeds.push_back(v);
  }

  if (!doc.contains("task") || !doc.at("task").is_object()) throw ConfigError("task: required object");
  c.task = doc.at("task");
  c.network = doc.value("network", json());
  c.params = doc.value("params", json::object());
  if (!c.params.is_object()) throw ConfigError("params: must be an object");
  const auto out = doc.value("output_dir", std::string("results"));
  c.output_dir = out;

  const auto type = c.task.value("type", std::string());
  if (type == "planted") {
    if (!c.task.contains("specs")) throw ConfigError("task.specs: required for planted tasks");
    try {
      masknet::specs_from_json(c.task.at("specs"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("task.specs: ") + e.what());
    }
  } else if (type == "csv") {
    require_file(c, c.task, "path", "task");
    if (!c.task.contains("input_dim") || !c.task.at("input_dim").is_number_integer() ||
        c.task.at("input_dim").get<std::int64_t>() <= 0) {
      throw ConfigError("task.input_dim: required positive integer for csv tasks");
    }
  } else if (type == "sine") {
    if (c.task.value("length", 200) <= 0) throw ConfigError("task.length: must be positive");
  } else {
    throw ConfigError("task.type: expected 'planted', 'csv' or 'sine', got '" + type + "'");
  }

  if (c.network.is_object() && c.network.contains("path")) require_file(c, c.network, "path", "network");
  const bool needs_network = c.method != Method::NkEsn && c.method != Method::Distill;
  if (needs_network && type == "csv" && !c.network.is_object()) {
    throw ConfigError("network: required for csv tasks with method " + std::string(method_name(c.method)));
  }
  if (needs_network && type == "sine") throw ConfigError("task.type: sine series are only valid for nkesn");
  if (c.method == Method::NkEsn && type == "planted") throw ConfigError("task.type: nkesn needs a csv or sine series");
  if (c.params.contains("teacher") && c.params.at("teacher").is_object() && c.params.at("teacher").contains("path")) {
    require_file(c, c.params.at("teacher"), "path", "params.teacher");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

void set_dotted(json& doc, std::string_view dotted_path, json value) {
  if (dotted_path.empty()) throw ConfigError("--param: empty path");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_path.find('.', start);
    const std::string key(dotted_path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (key.empty()) throw ConfigError("--param: empty component in '" + std::string(dotted_path) + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("--param: '" + std::string(dotted_path) + "' crosses a non-object value");
      *node = json::object();
    }
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

json parse_value(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return std::string(text);
  }
}

Task build_task(const ExperimentConfig& c) {
  Task t;
  const auto type = c.task.at("type").get<std::string>();
  try {
    if (type == "planted") {
      masknet::PlantedTaskConfig pc;
      pc.specs = masknet::specs_from_json(c.task.at("specs"));
      pc.network_seed = c.task.value("network_seed", pc.network_seed);
      pc.task_seed = c.task.value("task_seed", pc.task_seed);
      pc.samples = c.task.value("samples", pc.samples);
      pc.keep_fraction = c.task.value("keep_fraction", pc.keep_fraction);
      pc.input_scale = c.task.value("input_scale", pc.input_scale);
      auto planted = masknet::make_planted_task(pc);
      t.network = std::move(planted.network);
      t.data = std::move(planted.data);
      t.hidden_mask = std::move(planted.hidden_mask);
    } else if (type == "csv") {
      t.data = masknet::load_csv(resolve(c, c.task.at("path").get<std::string>()),
                                 c.task.at("input_dim").get<std::size_t>());
    } else {
      const auto length = c.task.value("length", std::size_t{200});
      const double step = c.task.value("step", 0.3);
      const double phase = c.task.value("phase", 0.0);
      for (std::size_t i = 0; i < length; ++i) {
        const double x = static_cast<double>(i);
        t.data.inputs.push_back(Eigen::VectorXd::Constant(1, std::sin(step * x + phase)));
        t.data.targets.push_back(Eigen::VectorXd::Constant(1, std::sin(step * (x + 1) + phase)));
      }
    }
    if (c.network.is_object()) {
      t.network = c.network.contains("path")
                      ? masknet::load_network(resolve(c, c.network.at("path").get<std::string>()))
                      : masknet::network_from_json(c.network);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("task: " + std::string(e.what()));
  }
  if (t.network && !t.data.empty() && t.network->input_dim() != t.data.input_dim()) {
    throw ConfigError("network: input width " + std::to_string(t.network->input_dim()) +
                      " does not match the task's " + std::to_string(t.data.input_dim()));
  }
  return t;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) { return fnv1a64(read_file(path)); }

std::string task_id(const ExperimentConfig& c) {
  std::uint64_t h = fnv1a64(c.task.dump());
  h = fnv1a64(c.network.dump(), h);
  if (c.task.contains("path")) h = fnv1a64(read_file(resolve(c, c.task.at("path").get<std::string>())), h);
  if (c.network.is_object() && c.network.contains("path")) {
    h = fnv1a64(read_file(resolve(c, c.network.at("path").get<std::string>())), h);
  }
  return hex64(h);
}

}  // namespace qns::harness
