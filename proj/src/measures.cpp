#include "swb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swb {

DiscreteMeasure::DiscreteMeasure(Matrix s, Vector w)
    : supports(std::move(s)), weights(std::move(w)) {
  if (supports.rows() < 1 || supports.cols() < 1)
    throw std::invalid_argument("DiscreteMeasure: need n >= 1 and d >= 1");
  if (weights.size() != supports.rows())
    throw std::invalid_argument("DiscreteMeasure: weight/support size mismatch");
  if (!supports.allFinite() || !weights.allFinite())
    throw std::invalid_argument("DiscreteMeasure: non-finite entries");
  if (weights.minCoeff() < 0.0)
    throw std::invalid_argument("DiscreteMeasure: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(Matrix s) {
  const Eigen::Index n = s.rows();
  return DiscreteMeasure(std::move(s), Vector::Constant(n, 1.0 / double(n)));
}

bool DiscreteMeasure::has_uniform_weights(double tol) const {
  const double u = 1.0 / double(size());
  return (weights.array() - u).abs().maxCoeff() <= tol;
}

std::vector<Eigen::Index> stable_argsort(const Vector& v) {
  std::vector<Eigen::Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&v](Eigen::Index l, Eigen::Index r) { return v[l] < v[r]; });
  return idx;
}

ProjectedMeasure project(const DiscreteMeasure& measure, const Vector& direction) {
  if (direction.size() != measure.dim())
    throw std::invalid_argument("project: direction/support dimension mismatch");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("project: direction must have unit norm");
  return ProjectedMeasure{measure.supports * direction, measure.weights};
}

namespace {

void check_normalized(const ProjectedMeasure& m, const char* who) {
  if (std::abs(m.weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": weights must sum to 1");
}

}  // namespace

double wasserstein1d_pp(const ProjectedMeasure& a, const ProjectedMeasure& b, double p) {
  check_normalized(a, "wasserstein1d_pp");
  check_normalized(b, "wasserstein1d_pp");
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("wasserstein1d_pp: need finite p >= 1");

  const auto ia = stable_argsort(a.values);
  const auto ib = stable_argsort(b.values);
  const Eigen::Index n = a.size(), m = b.size();

  // Walk the merged quantile breakpoints of the two CDFs.
  double cost = 0.0;
  Eigen::Index i = 0, j = 0;
  double wa = a.weights[ia[0]], wb = b.weights[ib[0]];
  while (i < n && j < m) {
    const double mass = std::min(wa, wb);
    cost += mass * pow_abs(a.values[ia[i]] - b.values[ib[j]], p);
    wa -= mass;
    wb -= mass;
    if (wa <= 0.0 && i + 1 < n) wa = a.weights[ia[++i]];
    else if (wa <= 0.0) ++i;
    if (wb <= 0.0 && j + 1 < m) wb = b.weights[ib[++j]];
    else if (wb <= 0.0) ++j;
  }
  return cost;
}

SortedMatching sorted_matching(const ProjectedMeasure& a, const ProjectedMeasure& b) {
  if (a.size() != b.size())
    throw std::logic_error("sorted_matching: requires equal support counts");
  const double u = 1.0 / double(a.size());
  if ((a.weights.array() - u).abs().maxCoeff() > 1e-12 ||
      (b.weights.array() - u).abs().maxCoeff() > 1e-12)
    throw std::logic_error("sorted_matching: requires uniform weights");

  const auto ia = stable_argsort(a.values);
  const auto ib = stable_argsort(b.values);
  SortedMatching out;
  out.sigma.resize(a.size());
  for (Eigen::Index r = 0; r < a.size(); ++r) out.sigma[ia[r]] = ib[r];
  return out;
}

DualPotential dual_potential_1d(const ProjectedMeasure& a, const ProjectedMeasure& b,
                                double p) {
  check_normalized(a, "dual_potential_1d");
  check_normalized(b, "dual_potential_1d");

  const auto ia = stable_argsort(a.values);
  const auto ib = stable_argsort(b.values);
  const Eigen::Index n = a.size(), m = b.size();

  // North-west-corner traversal of the monotone coupling; the dual pair
  // (f, g) is propagated by complementary slackness f_i + g_j = c_ij on the
  // coupling's support, anchored at g_0 = 0.
  Vector f(n);
  double g = 0.0;
  Eigen::Index i = 0, j = 0;
  double wa = a.weights[ia[0]], wb = b.weights[ib[0]];
  f[0] = pow_abs(a.values[ia[0]] - b.values[ib[0]], p);
  while (i < n && j < m) {
    const double mass = std::min(wa, wb);
    wa -= mass;
    wb -= mass;
    const bool step_b = wb <= 0.0 && j + 1 < m;
    const bool step_a = wa <= 0.0 && i + 1 < n;
    if (step_b) {
      wb = b.weights[ib[++j]];
      g = pow_abs(a.values[ia[i]] - b.values[ib[j]], p) - f[i];
    }
    if (step_a) {
      wa = a.weights[ia[++i]];
      f[i] = pow_abs(a.values[ia[i]] - b.values[ib[j]], p) - g;
    }
    if (!step_a && !step_b) {
      // Rounding can strand trailing rows; they pair with the last b atom.
      for (Eigen::Index r = i + 1; r < n; ++r)
        f[r] = pow_abs(a.values[ia[r]] - b.values[ib[j]], p) - g;
      break;
    }
  }

  DualPotential out;
  out.f.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) out.f[ia[r]] = f[r];
  return out;
}

}  // namespace swb
