#pragma once

#include <cstdint>
#include <vector>

#include "swb/measures.hpp"

namespace swb {

struct MetricsRecord {
  int iteration = 0;
  double F = 0.0;          // mean absolute pairwise gap of exact W_p^p distances
  double W = 0.0;          // mean exact W_p^p distance to the marginals
  double objective = 0.0;  // running stochastic objective estimate
};

// Exact discrete W_p^p in R^d. Equal-size uniform measures go through a
// linear assignment solver; general weights through min-cost flow.
double exact_w_pp(const DiscreteMeasure& a, const DiscreteMeasure& b, double p);

// Marginal fairness degree: mean over unordered pairs of |W_p^p(mu, mu_i) -
// W_p^p(mu, mu_j)|.
double f_metric(const DiscreteMeasure& bary, const std::vector<DiscreteMeasure>& marginals,
                double p);

// Centerness: mean exact W_p^p distance from the barycenter to the marginals.
double w_metric(const DiscreteMeasure& bary, const std::vector<DiscreteMeasure>& marginals,
                double p);

// Caps the support count for affordable exact evaluation: draws `cap`
// supports without replacement proportionally to weight and renormalizes to
// uniform. Identity when n <= cap.
DiscreteMeasure subsample_for_eval(const DiscreteMeasure& m, Eigen::Index cap,
                                   std::uint64_t seed);

// Minimum-cost perfect matching value of a dense square cost matrix
// (Hungarian algorithm with potentials, O(n^3)). Exposed for reuse in tests.
double solve_assignment(const Matrix& cost);

}  // namespace swb
