#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace qns::variational {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimizerConfig {
  /// Total objective evaluations, including the initial point.
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  /// Edge length of the initial simplex.
  double initial_step = 0.5;
  /// A simplex whose value spread and diameter both fall below this
  /// tolerance has converged and triggers a restart.
  double tolerance = 1e-10;
};

struct TraceEntry {
  std::vector<double> params;
  double value = 0.0;
};

struct OptimizeResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  std::vector<TraceEntry> trace;  // every evaluation, in order
  std::size_t restarts = 0;
};

/// Nelder-Mead simplex descent (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). On convergence the search restarts from the best point with
/// a fresh simplex whose edges are drawn from the seeded generator, until the
/// evaluation budget is spent. The initial point is evaluated first, so
/// best_value <= objective(init).
OptimizeResult optimize_variational(const Objective& objective, std::vector<double> init,
                                    const OptimizerConfig& config);

/// "index,p0,...,p{d-1},value"
void write_trace_csv(const std::vector<TraceEntry>& trace, const std::filesystem::path& path);

}  // namespace qns::variational
