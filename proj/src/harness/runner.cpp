#include "qns/harness/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "qns/anneal/anneal.hpp"
#include "qns/common.hpp"
#include "qns/distill/distill.hpp"
#include "qns/edgepopup/edgepopup.hpp"
#include "qns/grover/grover.hpp"
#include "qns/masknet/serialization.hpp"
#include "qns/nkesn/nkesn.hpp"
#include "qns/oracle/oracle.hpp"
#include "qns/variational/qaoa.hpp"
#include "qns/variational/vqe.hpp"

namespace qns::harness {

using nlohmann::json;
namespace fs = std::filesystem;

bool ExperimentRecord::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const SeedRun& r) { return r.error.has_value(); });
}

namespace {

template <typename T>
T param(const ExperimentConfig& c, const char* key, T fallback) {
  if (!c.params.contains(key)) return fallback;
  try {
    return c.params.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params.") + key + ": " + e.what());
  }
}

std::string choice(const ExperimentConfig& c, const char* key, std::string fallback,
                   std::initializer_list<const char*> allowed) {
  const auto v = param<std::string>(c, key, std::move(fallback));
  for (const char* a : allowed)
    if (v == a) return v;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(std::string("params.") + key + ": '" + v + "' is not one of " + list);
}

const masknet::MaskedNetwork& require_network(const Task& t) {
  if (!t.network) throw ConfigError("network: this method needs a network");
  return *t.network;
}

struct MaskProblem {
  masknet::MaskLayout layout;
  qsim::DiagonalCostHamiltonian h;
};

MaskProblem enumerate(const Task& t) {
  const auto& net = require_network(t);
  auto layout = masknet::weight_layout(net);
  if (layout.size() > max_qubits()) {
    throw ConfigError("network: " + std::to_string(layout.size()) + " maskable weights exceed the qubit ceiling " +
                      std::to_string(max_qubits()));
  }
  auto h = oracle::build_cost_hamiltonian(net, t.data, layout);
  return {std::move(layout), std::move(h)};
}

qsim::MixerSpec mixer_from(const ExperimentConfig& c, std::size_t n) {
  const auto kind = choice(c, "mixer", "transverse", {"transverse", "bitflip"});
  if (kind == "transverse") return qsim::MixerSpec::transverse_field();
  return qsim::MixerSpec::bit_flip(qsim::ring_graph(n), param<int>(c, "target_bit", 0));
}

bool is_ground(const qsim::DiagonalCostHamiltonian& h, std::uint64_t x) {
  return h.cost(x) <= h.min_cost() + 1e-12;
}

json mask_json(std::uint64_t index, const masknet::MaskLayout& layout) {
  return masknet::FlatMask::from_index(index, layout).to_hex();
}

std::string artifact(const std::optional<fs::path>& dir, const std::string& name, std::vector<Artifact>& out,
                     const std::function<void(const fs::path&)>& write) {
  if (!dir) return {};
  fs::create_directories(*dir);
  const fs::path path = *dir / name;
  write(path);
  const std::string rel = (dir->filename() / name).generic_string();
  out.push_back({rel, hex64(fnv1a64_file(path))});
  return rel;
}

std::string tag(std::uint64_t seed, const char* what) { return "seed-" + std::to_string(seed) + "-" + what; }

json run_exhaustive(const Task& t) {
  const auto p = enumerate(t);
  const auto costs = p.h.costs();
  const auto best = static_cast<std::uint64_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
  return {{"loss", p.h.cost(best)},
          {"success", true},
          {"oracle_calls", costs.size()},
          {"mask", mask_json(best, p.layout)},
          {"optimum_count", anneal::ground_states(p.h).size()}};
}

json run_grover(const ExperimentConfig& c, const Task& t, std::uint64_t seed) {
  const auto& net = require_network(t);
  const auto layout = masknet::weight_layout(net);
  const double eps = c.params.contains("epsilon")
                         ? param<double>(c, "epsilon", 0.0)
                         : oracle::default_epsilon(net, t.data, layout, param<std::uint64_t>(c, "epsilon_seed", 0));
  oracle::SubnetworkOracle o(net, t.data, eps, layout);
  const auto mode = choice(c, "mode", "unknown_k", {"unknown_k", "known_k"});
  grover::GroverResult r;
  if (mode == "unknown_k") {
    r = grover::search_unknown_k(o, seed);
  } else {
    grover::GroverConfig g;
    g.known_k = std::max<std::uint64_t>(o.solution_count(), 1);
    g.max_restarts = param<std::size_t>(c, "max_restarts", 3);
    g.seed = seed;
    if (c.params.contains("iterations")) g.iterations = param<std::size_t>(c, "iterations", 1);
    r = grover::grover_search(o, g);
  }
  json m = grover::result_to_json(r, layout.size());
  m["loss"] = o.loss(r.index);
  m["epsilon"] = eps;
  m["mask"] = mask_json(r.index, layout);
  return m;
}

json run_anneal(const ExperimentConfig& c, const Task& t, std::uint64_t seed) {
  const auto p = enumerate(t);
  anneal::AnnealSchedule s;
  s.total_time = param<double>(c, "total_time", s.total_time);
  s.steps = param<std::size_t>(c, "steps", s.steps);
  s.mixer = mixer_from(c, p.layout.size());
  const auto r = anneal::anneal(p.h, s);
  Rng rng(seed);
  const auto x = qsim::measure(r.final_state, rng);
  return {{"loss", p.h.cost(x)},
          {"success", is_ground(p.h, x)},
          {"oracle_calls", 0},
          {"mask", mask_json(x, p.layout)},
          {"p_ground", r.p_ground},
          {"final_expectation", r.final_expectation}};
}

json run_qaoa(const ExperimentConfig& c, const Task& t, std::uint64_t seed, const std::optional<fs::path>& dir,
              std::vector<Artifact>& arts) {
  const auto p = enumerate(t);
  variational::QaoaConfig q;
  q.p = param<std::size_t>(c, "p", q.p);
  q.mixer = mixer_from(c, p.layout.size());
  q.optimizer.budget = param<std::size_t>(c, "budget", q.optimizer.budget);
  q.optimizer.seed = seed;
  q.ramp_dt = param<double>(c, "ramp_dt", q.ramp_dt);
  const auto r = variational::qaoa_run(p.h, q);
  json m{{"loss", p.h.cost(r.mode_index)},
         {"success", is_ground(p.h, r.mode_index)},
         {"oracle_calls", 0},
         {"mask", mask_json(r.mode_index, p.layout)},
         {"expectation", r.best_value},
         {"p_ground", r.p_ground},
         {"evaluations", r.optimization.trace.size()},
         {"gammas", r.best.gammas},
         {"betas", r.best.betas}};
  artifact(dir, tag(seed, "trace.csv"), arts,
           [&](const fs::path& path) { variational::write_trace_csv(r.optimization.trace, path); });
  return m;
}

json run_vqe(const ExperimentConfig& c, const Task& t, std::uint64_t seed, const std::optional<fs::path>& dir,
             std::vector<Artifact>& arts) {
  const auto p = enumerate(t);
  variational::VqeAnsatz a;
  a.layers = param<std::size_t>(c, "layers", a.layers);
  a.entangler = choice(c, "entangler", "ring_cz", {"ring_cz", "none"}) == "none" ? variational::Entangler::None
                                                                                 : variational::Entangler::RingCZ;
  variational::OptimizerConfig o;
  o.budget = param<std::size_t>(c, "budget", o.budget);
  o.seed = seed;
  const auto r = variational::vqe_run(p.h, a, o);
  const auto probs = variational::vqe_state(p.layout.size(), a, r.best_params).probabilities();
  const auto mode = static_cast<std::uint64_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  artifact(dir, tag(seed, "trace.csv"), arts,
           [&](const fs::path& path) { variational::write_trace_csv(r.optimization.trace, path); });
  return {{"loss", p.h.cost(mode)},
          {"success", is_ground(p.h, mode)},
          {"oracle_calls", 0},
          {"mask", mask_json(mode, p.layout)},
          {"expectation", r.best_value},
          {"evaluations", r.optimization.trace.size()}};
}

json run_popup(const ExperimentConfig& c, const Task& t, std::uint64_t seed, const std::optional<fs::path>& dir,
               std::vector<Artifact>& arts) {
  const auto& net = require_network(t);
  edgepopup::PopupTrainConfig p;
  p.alpha = param<double>(c, "alpha", p.alpha);
  p.epochs = param<std::size_t>(c, "epochs", p.epochs);
  p.schedule = choice(c, "schedule", "constant", {"constant", "linear"}) == "linear" ? edgepopup::AlphaSchedule::Linear
                                                                                    : edgepopup::AlphaSchedule::Constant;
  p.eval_mode = choice(c, "eval_mode", "threshold", {"threshold", "sampled"}) == "sampled"
                    ? edgepopup::EvalMode::SampledMask
                    : edgepopup::EvalMode::ThresholdMask;
  p.sampling = choice(c, "sampling", "per_sample", {"per_sample", "per_epoch"}) == "per_epoch"
                   ? edgepopup::MaskSampling::PerEpoch
                   : edgepopup::MaskSampling::PerSample;
  if (c.params.contains("keep_fraction")) p.keep_fraction = param<double>(c, "keep_fraction", 1.0);
  p.seed = seed;
  const auto r = edgepopup::popup_train(net, t.data, p);
  artifact(dir, tag(seed, "loss_curve.csv"), arts,
           [&](const fs::path& path) { edgepopup::write_loss_curve_csv(r.loss_curve, path); });
  artifact(dir, tag(seed, "checkpoint.json"), arts,
           [&](const fs::path& path) { edgepopup::save_checkpoint(r.final_thetas, p.epochs, seed, path); });
  return {{"loss", r.final_loss},
          {"success", true},
          {"oracle_calls", 0},
          {"mask", r.final_mask.to_hex()},
          {"epoch1_loss", r.loss_curve.empty() ? json(nullptr) : json(r.loss_curve.front())},
          {"epochs", p.epochs}};
}

json run_distill(const ExperimentConfig& c, const Task& t, std::uint64_t seed) {
  masknet::MaskedNetwork teacher = [&] {
    if (c.params.contains("teacher")) {
      const auto& spec = c.params.at("teacher");
      if (spec.is_string() && spec.get<std::string>() == "fit_linear") return distill::fit_linear_teacher(t.data);
      if (spec.is_object() && spec.contains("path")) {
        const fs::path path(spec.at("path").get<std::string>());
        return masknet::load_network(path.is_absolute() ? path : c.base_dir / path);
      }
      if (spec.is_object()) return masknet::network_from_json(spec);
      throw ConfigError("params.teacher: expected \"fit_linear\", a network object or {\"path\": ...}");
    }
    if (t.network && t.hidden_mask) return masknet::apply_flat_mask(*t.network, *t.hidden_mask);
    if (t.network) return *t.network;
    return distill::fit_linear_teacher(t.data);
  }();
  distill::StudentConfig s;
  s.width_factor = param<double>(c, "width_factor", s.width_factor);
  s.output_factor = param<std::size_t>(c, "output_factor", s.output_factor);
  s.seed = seed;
  const auto pair = distill::make_pair(std::move(teacher), s);
  distill::DistillConfig d;
  const auto backend = choice(c, "backend", "exhaustive", {"exhaustive", "grover", "qaoa", "anneal"});
  d.backend = backend == "grover"  ? distill::Backend::Grover
              : backend == "qaoa"  ? distill::Backend::Qaoa
              : backend == "anneal" ? distill::Backend::Anneal
                                    : distill::Backend::Exhaustive;
  d.compress = choice(c, "compress", "average_pool", {"average_pool", "magnitude_topk"}) == "magnitude_topk"
                   ? distill::CompressMode::MagnitudeTopK
                   : distill::CompressMode::AveragePool;
  d.chaining = choice(c, "chaining", "student", {"student", "teacher"}) == "teacher" ? distill::Chaining::Teacher
                                                                                     : distill::Chaining::Student;
  d.per_block_bit_budget = param<std::size_t>(c, "bit_budget", d.per_block_bit_budget);
  d.seed = seed;
  d.qaoa.optimizer.budget = param<std::size_t>(c, "budget", d.qaoa.optimizer.budget);
  d.anneal.total_time = param<double>(c, "total_time", d.anneal.total_time);
  d.anneal.steps = param<std::size_t>(c, "steps", d.anneal.steps);
  const auto r = distill::distill_select(pair, t.data, d);
  json m = distill::result_to_json(r);
  std::size_t calls = 0;
  for (const auto& b : r.blocks) calls += b.oracle_calls;
  m["loss"] = r.total_loss;
  m["success"] = true;
  m["oracle_calls"] = calls;
  return m;
}

json run_nkesn(const ExperimentConfig& c, const Task& t, std::uint64_t seed, const std::optional<fs::path>& dir,
               std::vector<Artifact>& arts) {
  nkesn::EsnConfig e;
  const json res = c.params.value("reservoir", json::object());
  e.reservoir.size = res.value("size", e.reservoir.size);
  e.reservoir.connectivity = res.value("connectivity", e.reservoir.connectivity);
  e.reservoir.spectral_radius = res.value("spectral_radius", e.reservoir.spectral_radius);
  e.reservoir.input_scale = res.value("input_scale", e.reservoir.input_scale);
  const auto nl = res.value("nonlinearity", std::string("linear"));
  if (nl != "linear" && nl != "tanh") throw ConfigError("params.reservoir.nonlinearity: expected linear or tanh");
  e.reservoir.nonlinearity = nl == "tanh" ? nkesn::Nonlinearity::Tanh : nkesn::Nonlinearity::Linear;
  e.reservoir.input_dim = t.data.input_dim();
  e.reservoir.seed = seed;
  e.probes = param<std::size_t>(c, "probes", e.probes);
  e.washout = param<std::size_t>(c, "washout", e.washout);
  e.phi = choice(c, "phi", "tanh", {"tanh", "identity"}) == "identity" ? nkesn::OutputActivation::Identity
                                                                       : nkesn::OutputActivation::Tanh;
  e.seed = seed + 1;
  const auto esn = nkesn::make_esn(e);
  const auto topology = choice(c, "topology", "adjacent", {"adjacent", "random"}) == "random"
                            ? nkesn::Topology::Random
                            : nkesn::Topology::Adjacent;
  const auto land = nkesn::make_landscape(e.probes, param<std::size_t>(c, "k", 2), topology, seed);
  const auto table = nkesn::build_table(esn, land, t.data);
  artifact(dir, tag(seed, "table.csv"), arts,
           [&](const fs::path& path) { nkesn::write_table_csv(land, table, path); });
  const auto selector = choice(c, "selector", "dp", {"dp", "exhaustive", "grover"});
  json m{{"success", true}, {"table_entries", table.size() * land.n}};
  if (selector == "grover") {
    std::vector<std::uint64_t> patterns;
    std::size_t calls = 0;
    bool ok = true;
    for (std::size_t i = 0; i < land.n; ++i) {
      const auto r = nkesn::grover_table_select(nkesn::table_column(table, i),
                                                {std::nullopt, param<std::size_t>(c, "max_restarts", 3), seed + i});
      patterns.push_back(r.pattern);
      calls += r.oracle_calls;
      ok = ok && r.success;
    }
    const auto comb = nkesn::combine_per_output(patterns, land, &table);
    m["loss"] = *comb.mean_loss;
    m["bits"] = nkesn::bits_to_string(comb.bits);
    m["oracle_calls"] = calls;
    m["success"] = ok;
    m["conflicts"] = comb.conflicts;
    m["gap_vs_dp"] = comb.gap_vs_dp ? json(*comb.gap_vs_dp) : json(nullptr);
  } else {
    const auto best = selector == "dp" ? nkesn::dp_optimize(land, table) : nkesn::exhaustive_optimize(land, table);
    m["loss"] = best.mean_loss;
    m["bits"] = nkesn::bits_to_string(best.bits);
    m["oracle_calls"] = table.size() * land.n;
  }
  return m;
}

}  // namespace

json run_seed(const ExperimentConfig& c, const Task& t, std::uint64_t seed, const std::optional<fs::path>& dir,
              std::vector<Artifact>& arts) {
  switch (c.method) {
    case Method::Exhaustive: return run_exhaustive(t);
    case Method::Grover: return run_grover(c, t, seed);
    case Method::Anneal: return run_anneal(c, t, seed);
    case Method::Qaoa: return run_qaoa(c, t, seed, dir, arts);
    case Method::Vqe: return run_vqe(c, t, seed, dir, arts);
    case Method::EdgePopup: return run_popup(c, t, seed, dir, arts);
    case Method::Distill: return run_distill(c, t, seed);
    case Method::NkEsn: return run_nkesn(c, t, seed, dir, arts);
  }
  throw ConfigError("method: unsupported");
}

ExperimentRecord run_experiment(const ExperimentConfig& config, const std::optional<fs::path>& artifact_dir) {
  const Task task = build_task(config);
  ExperimentRecord rec;
  rec.config = config.snapshot;
  rec.task_id = task_id(config);
  rec.method = config.method;
  for (const auto seed : config.seeds) {
    SeedRun run;
    run.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      run.metrics = run_seed(config, task, seed, artifact_dir, run.artifacts);
    } catch (const MethodFailure& e) {
      run.error = e.what();
      run.metrics = {{"success", false}, {"error", e.what()}};
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.runs.push_back(std::move(run));
  }
  return rec;
}

}  // namespace qns::harness
