#include "swb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "swb/slicing.hpp"

namespace swb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix cost_matrix(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
  const Eigen::Index n = a.size(), m = b.size();
  Matrix c(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double dist = (a.supports.row(i) - b.supports.row(j)).norm();
      c(i, j) = p == 2.0 ? dist * dist : std::pow(dist, p);
    }
  return c;
}

// Transportation problem by successive shortest paths with potentials.
// Nodes 0..n-1 are sources, n..n+m-1 sinks; every augmentation exhausts a
// source or a sink, so there are at most n+m phases.
double min_cost_transport(const Matrix& c, Vector supply, Vector demand) {
  const Eigen::Index n = supply.size(), m = demand.size();
  const Eigen::Index N = n + m;
  Matrix flow = Matrix::Zero(n, m);
  Vector pot = Vector::Zero(N);
  const double mass_tol = 1e-15;

  while (supply.maxCoeff() > mass_tol) {
    std::vector<double> dist(N, kInf);
    std::vector<Eigen::Index> prev(N, -1);
    std::vector<char> done(N, 0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (supply[i] > mass_tol) dist[i] = 0.0;

    for (Eigen::Index it = 0; it < N; ++it) {
      Eigen::Index u = -1;
      double best = kInf;
      for (Eigen::Index v = 0; v < N; ++v)
        if (!done[v] && dist[v] < best) { best = dist[v]; u = v; }
      if (u < 0) break;
      done[u] = 1;
      // Skip finalized nodes: float drift can leave reduced costs slightly
      // negative, and re-relaxing a done node can knot prev into a cycle.
      if (u < n) {
        for (Eigen::Index j = 0; j < m; ++j) {
          if (done[n + j]) continue;
          const double rc = c(u, j) + pot[u] - pot[n + j];
          if (dist[u] + rc < dist[n + j] - 1e-18) {
            dist[n + j] = dist[u] + rc;
            prev[n + j] = u;
          }
        }
      } else {
        const Eigen::Index j = u - n;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (done[i] || flow(i, j) <= mass_tol) continue;
          const double rc = -c(i, j) + pot[n + j] - pot[i];
          if (dist[u] + rc < dist[i] - 1e-18) {
            dist[i] = dist[u] + rc;
            prev[i] = u;
          }
        }
      }
    }

    Eigen::Index sink = -1;
    double best = kInf;
    for (Eigen::Index j = 0; j < m; ++j)
      if (demand[j] > mass_tol && dist[n + j] < best) { best = dist[n + j]; sink = n + j; }
    if (sink < 0)
      throw std::runtime_error("min_cost_transport: no augmenting path (unbalanced input?)");

    // bottleneck along the path
    double push = demand[sink - n];
    Eigen::Index v = sink;
    while (prev[v] >= 0) {
      const Eigen::Index u = prev[v];
      if (u >= n) push = std::min(push, flow(v, u - n));  // backward arc
      v = u;
    }
    push = std::min(push, supply[v]);

    v = sink;
    while (prev[v] >= 0) {
      const Eigen::Index u = prev[v];
      if (u < n) flow(u, v - n) += push;
      else flow(v, u - n) -= push;
      v = u;
    }
    supply[v] -= push;
    demand[sink - n] -= push;

    const double reach = dist[sink];
    for (Eigen::Index w = 0; w < N; ++w)
      pot[w] += std::min(dist[w], reach);
  }
  return (flow.array() * c.array()).sum();
}

}  // namespace

double solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols())
    throw std::invalid_argument("solve_assignment: square matrix required");
  const int n = int(cost.rows());
  // Hungarian algorithm with row/column potentials.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
        if (minv[j] < delta) { delta = minv[j]; j1 = j; }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
        else minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double res = 0.0;
  for (int j = 1; j <= n; ++j) res += cost(p[j] - 1, j - 1);
  return res;
}

double exact_w_pp(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("exact_w_pp: dimension mismatch");
  const Matrix c = cost_matrix(a, b, p);
  if (a.size() == b.size() && a.has_uniform_weights(1e-9) && b.has_uniform_weights(1e-9))
    return solve_assignment(c) / double(a.size());
  return min_cost_transport(c, a.weights, b.weights);
}

double f_metric(const DiscreteMeasure& bary, const std::vector<DiscreteMeasure>& marginals,
                double p) {
  const Eigen::Index K = Eigen::Index(marginals.size());
  if (K < 2) throw std::invalid_argument("f_metric: needs K >= 2 marginals");
  Vector dists(K);
  for (Eigen::Index k = 0; k < K; ++k) dists[k] = exact_w_pp(bary, marginals[k], p);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = i + 1; j < K; ++j) sum += std::abs(dists[i] - dists[j]);
  return 2.0 * sum / (double(K) * double(K - 1));
}

double w_metric(const DiscreteMeasure& bary, const std::vector<DiscreteMeasure>& marginals,
                double p) {
  if (marginals.empty()) throw std::invalid_argument("w_metric: needs K >= 1 marginals");
  double sum = 0.0;
  for (const auto& m : marginals) sum += exact_w_pp(bary, m, p);
  return sum / double(marginals.size());
}

DiscreteMeasure subsample_for_eval(const DiscreteMeasure& m, Eigen::Index cap,
                                   std::uint64_t seed) {
  if (cap < 1) throw std::invalid_argument("subsample_for_eval: cap must be >= 1");
  if (m.size() <= cap) return m;

  // Weighted sampling without replacement: keep the cap largest keys
  // u^(1/w) (Efraimidis-Spirakis).
  Rng rng(seed);
  std::vector<std::pair<double, Eigen::Index>> keys(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double w = m.weights[i];
    const double key = w > 0.0 ? std::pow(rng.uniform(), 1.0 / w) : -1.0;
    keys[i] = {key, i};
  }
  std::nth_element(keys.begin(), keys.begin() + cap, keys.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  std::vector<Eigen::Index> chosen(cap);
  for (Eigen::Index r = 0; r < cap; ++r) chosen[r] = keys[r].second;
  std::sort(chosen.begin(), chosen.end());

  Matrix s(cap, m.dim());
  for (Eigen::Index r = 0; r < cap; ++r) s.row(r) = m.supports.row(chosen[r]);
  return DiscreteMeasure::uniform(std::move(s));
}

}  // namespace swb
