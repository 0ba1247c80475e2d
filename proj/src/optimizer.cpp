#include "swb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swb {

void BarycenterConfig::validate() const {
  if (lr <= 0.0) throw std::invalid_argument("BarycenterConfig: lr must be > 0");
  if (iters < 1) throw std::invalid_argument("BarycenterConfig: iters must be >= 1");
  if (projections < 1) throw std::invalid_argument("BarycenterConfig: L must be >= 1");
  if (metrics_every < 1) throw std::invalid_argument("BarycenterConfig: metrics_every must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("BarycenterConfig: p must be >= 1");
}

std::uint64_t iteration_seed(std::uint64_t seed, int t) {
  return mix_seed(seed, std::uint64_t(t));
}

Vector project_to_simplex(Vector v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, tau = u[0] - 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / double(i + 1);
    if (u[i] > t) tau = t;  // tau from the largest feasible prefix
  }
  return (v.array() - tau).max(0.0);
}

namespace {

bool scheduled(int t, int final_t, int every, const std::vector<int>& at) {
  if (!at.empty()) return std::find(at.begin(), at.end(), t) != at.end() || t == final_t;
  if (t == final_t) return true;
  if (every < 1) return false;
  return t % every == 0;
}

bool snapshot_scheduled(int t, int final_t, int every, const std::vector<int>& at) {
  if (t == final_t) return true;
  if (!at.empty()) return std::find(at.begin(), at.end(), t) != at.end();
  return every >= 1 && t % every == 0;
}

}  // namespace

RunTrace run_free_support(const DiscreteMeasure& init,
                          const std::vector<DiscreteMeasure>& marginals,
                          const BarycenterConfig& cfg, const MetricEvaluator& evaluator) {
  cfg.validate();
  DiscreteMeasure bary = init;
  RunTrace trace;
  const int T = cfg.iters;
  for (int t = 0; t <= T; ++t) {
    if (!bary.supports.allFinite())
      throw std::runtime_error("run_free_support: NaN/Inf in supports at iteration " +
                               std::to_string(t));
    const bool want_metrics = scheduled(t, T, cfg.metrics_every, cfg.metrics_at);
    const bool want_snapshot = snapshot_scheduled(t, T, cfg.snapshot_every, cfg.snapshot_at);
    GradientEstimate est;
    bool have_est = false;
    if (want_metrics || t < T) {
      const auto proj = sample_uniform_sphere(cfg.projections, bary.dim(),
                                              iteration_seed(cfg.seed, t));
      est = method_grad(cfg.method, bary, marginals, proj, cfg.p);
      have_est = true;
    }
    if (want_metrics) {
      MetricsRecord rec;
      rec.iteration = t;
      rec.objective = have_est ? est.objective_value : 0.0;
      if (evaluator) {
        const auto [F, W] = evaluator(bary);
        rec.F = F;
        rec.W = W;
      }
      trace.records.push_back(rec);
    }
    if (want_snapshot) trace.snapshots.emplace_back(t, bary);
    if (t < T) bary.supports -= cfg.lr * est.free_grad;
  }
  return trace;
}

RunTrace run_fixed_support(const Vector& init_weights, const Matrix& grid,
                           const std::vector<DiscreteMeasure>& marginals,
                           const BarycenterConfig& cfg, const MetricEvaluator& evaluator) {
  cfg.validate();
  Vector phi = init_weights;
  if (std::abs(phi.sum() - 1.0) > 1e-9 || phi.minCoeff() < -1e-12)
    throw std::invalid_argument("run_fixed_support: init weights not on the simplex");
  RunTrace trace;
  const int T = cfg.iters;
  for (int t = 0; t <= T; ++t) {
    if (!phi.allFinite())
      throw std::runtime_error("run_fixed_support: NaN/Inf in weights at iteration " +
                               std::to_string(t));
    const bool want_metrics = scheduled(t, T, cfg.metrics_every, cfg.metrics_at);
    const bool want_snapshot = snapshot_scheduled(t, T, cfg.snapshot_every, cfg.snapshot_at);
    GradientEstimate est;
    bool have_est = false;
    if (want_metrics || t < T) {
      const auto proj = sample_uniform_sphere(cfg.projections, grid.cols(),
                                              iteration_seed(cfg.seed, t));
      est = method_grad_fixed(cfg.method, grid, phi, marginals, proj, cfg.p);
      have_est = true;
    }
    if (want_metrics || want_snapshot) {
      DiscreteMeasure snap(grid, phi);
      if (want_metrics) {
        MetricsRecord rec;
        rec.iteration = t;
        rec.objective = have_est ? est.objective_value : 0.0;
        if (evaluator) {
          const auto [F, W] = evaluator(snap);
          rec.F = F;
          rec.W = W;
        }
        trace.records.push_back(rec);
      }
      if (want_snapshot) trace.snapshots.emplace_back(t, std::move(snap));
    }
    if (t < T) phi = project_to_simplex(phi - cfg.lr * est.fixed_grad);
  }
  return trace;
}

}  // namespace swb
