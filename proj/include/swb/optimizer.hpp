#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "swb/eval.hpp"
#include "swb/objectives.hpp"

namespace swb {

struct BarycenterConfig {
  Method method;
  double p = 2.0;
  Eigen::Index projections = 100;  // L
  double lr = 0.01;
  int iters = 1000;  // T
  std::uint64_t seed = 0;
  int metrics_every = 100;
  int snapshot_every = 0;            // 0 disables periodic snapshots
  std::vector<int> metrics_at;       // explicit schedule; overrides metrics_every
  std::vector<int> snapshot_at;      // explicit schedule; overrides snapshot_every

  void validate() const;
};

struct RunTrace {
  std::vector<MetricsRecord> records;
  std::vector<std::pair<int, DiscreteMeasure>> snapshots;
};

// Computes F and W for a scheduled iteration; the optimizer fills in the
// iteration index and objective estimate.
using MetricEvaluator = std::function<std::pair<double, double>(const DiscreteMeasure&)>;

// Deterministic per-iteration projection seed.
std::uint64_t iteration_seed(std::uint64_t seed, int t);

// Euclidean projection onto the probability simplex (sort-based).
Vector project_to_simplex(Vector v);

// SGD over support locations: supports <- supports - lr * free_grad each
// iteration, with a fresh ProjectionSet per iteration. Metrics and
// snapshots are recorded per schedule; iteration `iters` (the final state)
// is always recorded.
RunTrace run_free_support(const DiscreteMeasure& init,
                          const std::vector<DiscreteMeasure>& marginals,
                          const BarycenterConfig& cfg, const MetricEvaluator& evaluator);

// SGD over simplex weights on a fixed grid, re-projected each step.
RunTrace run_fixed_support(const Vector& init_weights, const Matrix& grid,
                           const std::vector<DiscreteMeasure>& marginals,
                           const BarycenterConfig& cfg, const MetricEvaluator& evaluator);

}  // namespace swb
