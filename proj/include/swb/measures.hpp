#pragma once

#include <Eigen/Dense>
#include <vector>

namespace swb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Discrete probability measure: n support points in R^d with a weight vector
// on the probability simplex.
struct DiscreteMeasure {
  Matrix supports;  // n x d
  Vector weights;   // n, nonnegative, sums to 1

  DiscreteMeasure() = default;
  DiscreteMeasure(Matrix s, Vector w);

  // Uniform weights 1/n over the given supports.
  static DiscreteMeasure uniform(Matrix s);

  Eigen::Index size() const { return supports.rows(); }
  Eigen::Index dim() const { return supports.cols(); }
  bool has_uniform_weights(double tol = 1e-12) const;
};

// One-dimensional pushforward of a DiscreteMeasure along a direction.
struct ProjectedMeasure {
  Vector values;   // theta^T x_i
  Vector weights;  // carried over from the source measure

  Eigen::Index size() const { return values.size(); }
};

// Optimal monotone matching between two equal-size uniform projected
// measures: sigma[i] is the index in the second measure matched to point i
// of the first.
struct SortedMatching {
  std::vector<Eigen::Index> sigma;
};

// First Kantorovich dual potential of the 1D transport problem, indexed by
// the first measure's supports. Defined up to an additive constant.
struct DualPotential {
  Vector f;
};

ProjectedMeasure project(const DiscreteMeasure& measure, const Vector& direction);

// Exact W_p^p between two 1D discrete measures via merged quantile
// breakpoints. Handles arbitrary sizes and weights in O(n log n).
double wasserstein1d_pp(const ProjectedMeasure& a, const ProjectedMeasure& b, double p);

// Monotone matching for equal-size uniform measures. The cost of the
// returned permutation equals wasserstein1d_pp on the same inputs.
SortedMatching sorted_matching(const ProjectedMeasure& a, const ProjectedMeasure& b);

DualPotential dual_potential_1d(const ProjectedMeasure& a, const ProjectedMeasure& b,
                                double p);

// |x|^p sign-carrying helpers used by the 1D gradients.
inline double pow_abs(double x, double p) {
  if (p == 2.0) return x * x;
  if (p == 1.0) return std::abs(x);
  return std::pow(std::abs(x), p);
}

// Indices that sort v ascending, ties broken by original index.
std::vector<Eigen::Index> stable_argsort(const Vector& v);

}  // namespace swb
