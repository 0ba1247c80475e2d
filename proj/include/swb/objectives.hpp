#pragma once

#include <string>
#include <vector>

#include "swb/measures.hpp"
#include "swb/slicing.hpp"

namespace swb {

enum class MethodTag { Uswb, MfswbDual, SMfswb, UsMfswb, EsMfswb };

struct Method {
  MethodTag tag = MethodTag::Uswb;
  double lambda = 0.0;  // fairness penalty, MfswbDual only
  Vector omega;         // marginal weights, Uswb only; empty means uniform

  static Method uswb(Vector omega = Vector()) { return {MethodTag::Uswb, 0.0, std::move(omega)}; }
  static Method mfswb_dual(double lambda) { return {MethodTag::MfswbDual, lambda, {}}; }
  static Method s_mfswb() { return {MethodTag::SMfswb, 0.0, {}}; }
  static Method us_mfswb() { return {MethodTag::UsMfswb, 0.0, {}}; }
  static Method es_mfswb() { return {MethodTag::EsMfswb, 0.0, {}}; }
};

const char* method_name(MethodTag tag);
MethodTag method_from_name(const std::string& name);

// One stochastic objective/gradient evaluation. Exactly one of free_grad
// (per-support rows) or fixed_grad (per-weight entries) is populated.
struct GradientEstimate {
  Matrix free_grad;    // n x d when free-support
  Vector fixed_grad;   // n when fixed-support
  double objective_value = 0.0;
  bool is_free = true;
};

// Uniform/weighted SWB: sum_k omega_k * MC estimate of SW_p^p(bary, mu_k).
GradientEstimate swb_grad(const DiscreteMeasure& bary,
                          const std::vector<DiscreteMeasure>& marginals,
                          const ProjectionSet& proj, double p, const Vector& omega);

// Lagrangian dual of the fairness-constrained barycenter: mean SW plus the
// lambda-weighted mean absolute pairwise SW gap. Theta(K^2) pairwise terms.
GradientEstimate mfswb_dual_grad(const DiscreteMeasure& bary,
                                 const std::vector<DiscreteMeasure>& marginals,
                                 const ProjectionSet& proj, double p, double lambda);

// max_k of the MC SW estimates; gradient toward the argmax marginal only.
GradientEstimate s_mfswb_grad(const DiscreteMeasure& bary,
                              const std::vector<DiscreteMeasure>& marginals,
                              const ProjectionSet& proj, double p);

// Mean over projections of the per-projection max 1D distance.
GradientEstimate us_mfswb_grad(const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p);

// us-MFSWB with energy-based reweighting of projections; weights are
// treated as constants when differentiating.
GradientEstimate es_mfswb_grad(const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p);

// Fixed-support counterparts: the barycenter is (grid, phi) and the
// gradient is with respect to the simplex weights phi, via the first
// Kantorovich dual potential per projection.
GradientEstimate swb_grad_fixed(const Matrix& grid, const Vector& phi,
                                const std::vector<DiscreteMeasure>& marginals,
                                const ProjectionSet& proj, double p, const Vector& omega);
GradientEstimate mfswb_dual_grad_fixed(const Matrix& grid, const Vector& phi,
                                       const std::vector<DiscreteMeasure>& marginals,
                                       const ProjectionSet& proj, double p, double lambda);
GradientEstimate s_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                    const std::vector<DiscreteMeasure>& marginals,
                                    const ProjectionSet& proj, double p);
GradientEstimate us_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                     const std::vector<DiscreteMeasure>& marginals,
                                     const ProjectionSet& proj, double p);
GradientEstimate es_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                     const std::vector<DiscreteMeasure>& marginals,
                                     const ProjectionSet& proj, double p);

// Dispatch on Method for the optimizer loop.
GradientEstimate method_grad(const Method& method, const DiscreteMeasure& bary,
                             const std::vector<DiscreteMeasure>& marginals,
                             const ProjectionSet& proj, double p);
GradientEstimate method_grad_fixed(const Method& method, const Matrix& grid,
                                   const Vector& phi,
                                   const std::vector<DiscreteMeasure>& marginals,
                                   const ProjectionSet& proj, double p);

}  // namespace swb
