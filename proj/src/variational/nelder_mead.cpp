#include "qns/variational/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "qns/common.hpp"

namespace qns::variational {

namespace {

struct BudgetSpent {};

class Evaluator {
 public:
  Evaluator(const Objective& f, std::size_t budget, OptimizeResult& out) : f_(f), budget_(budget), out_(out) {}

  double operator()(const std::vector<double>& x) {
    if (out_.trace.size() >= budget_) throw BudgetSpent{};
    const double v = f_(x);
    out_.trace.push_back({x, v});
    if (out_.trace.size() == 1 || v < out_.best_value) {
      out_.best_value = v;
      out_.best_params = x;
    }
    return v;
  }

 private:
  const Objective& f_;
  std::size_t budget_;
  OptimizeResult& out_;
};

using Point = std::vector<double>;

Point affine(const Point& a, const Point& b, double t) {
  // a + t (b - a)
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

void simplex_descent(Evaluator& eval, std::vector<Point> simplex, double tolerance) {
  const std::size_t d = simplex.size() - 1;
  std::vector<double> values(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);
  std::vector<std::size_t> order(simplex.size());

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const Point& p : simplex)
      for (std::size_t i = 0; i < d; ++i) diameter = std::max(diameter, std::abs(p[i] - simplex[best][i]));
    if (values[worst] - values[best] <= tolerance && diameter <= tolerance) return;

    Point centroid(d, 0.0);
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);
    }

    const Point reflected = affine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Point expanded = affine(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point contracted = outside ? affine(centroid, reflected, 0.5) : affine(centroid, simplex[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k == best) continue;
      simplex[k] = affine(simplex[best], simplex[k], 0.5);
      values[k] = eval(simplex[k]);
    }
  }
}

}  // namespace

OptimizeResult optimize_variational(const Objective& objective, std::vector<double> init,
                                    const OptimizerConfig& config) {
  if (config.budget < 1) throw std::invalid_argument("optimizer budget must be >= 1");
  if (!(config.initial_step > 0.0)) throw std::invalid_argument("initial simplex step must be positive");
  OptimizeResult result;
  Evaluator eval(objective, config.budget, result);
  Rng rng(config.seed);
  const std::size_t d = init.size();
  try {
    if (d == 0) {
      eval(init);
      return result;
    }
    std::vector<Point> simplex{init};
    for (std::size_t i = 0; i < d; ++i) {
      Point p = init;
      p[i] += config.initial_step;
      simplex.push_back(std::move(p));
    }
    while (true) {
      simplex_descent(eval, simplex, config.tolerance);
      ++result.restarts;
      simplex.assign(1, result.best_params);
      for (std::size_t i = 0; i < d; ++i) {
        Point p = result.best_params;
        for (double& x : p) x += config.initial_step * (2.0 * uniform01(rng) - 1.0);
        simplex.push_back(std::move(p));
      }
    }
  } catch (const BudgetSpent&) {
  }
  return result;
}

void write_trace_csv(const std::vector<TraceEntry>& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::size_t d = trace.empty() ? 0 : trace.front().params.size();
  out << "index";
  for (std::size_t i = 0; i < d; ++i) out << ",p" << i;
  out << ",value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k;
    for (double x : trace[k].params) out << ',' << x;
    out << ',' << trace[k].value << '\n';
  }
}

}  // namespace qns::variational
