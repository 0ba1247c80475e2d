#include "swb/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace swb {

const char* method_name(MethodTag tag) {
  switch (tag) {
    case MethodTag::Uswb: return "uswb";
    case MethodTag::MfswbDual: return "mfswb";
    case MethodTag::SMfswb: return "s";
    case MethodTag::UsMfswb: return "us";
    case MethodTag::EsMfswb: return "es";
  }
  return "?";
}

MethodTag method_from_name(const std::string& name) {
  if (name == "uswb") return MethodTag::Uswb;
  if (name == "mfswb") return MethodTag::MfswbDual;
  if (name == "s") return MethodTag::SMfswb;
  if (name == "us") return MethodTag::UsMfswb;
  if (name == "es") return MethodTag::EsMfswb;
  throw std::invalid_argument("unknown method: " + name);
}

namespace {

// d/dx |x|^p = p |x|^{p-1} sign(x)
inline double dpow_abs(double x, double p) {
  if (p == 2.0) return 2.0 * x;
  if (p == 1.0) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  if (x == 0.0) return 0.0;
  return p * std::pow(std::abs(x), p - 1.0) * (x > 0.0 ? 1.0 : -1.0);
}

Vector resolve_omega(const Vector& omega, Eigen::Index K) {
  if (omega.size() == 0) return Vector::Constant(K, 1.0 / double(K));
  if (omega.size() != K)
    throw std::invalid_argument("omega length must equal the number of marginals");
  if (omega.minCoeff() < 0.0 || std::abs(omega.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("omega must be nonnegative and sum to 1");
  return omega;
}

// Shared per-iteration state for the free-support path: projected values and
// sort permutations for the barycenter and every marginal under every
// direction, plus the L x K matrix of 1D W_p^p values.
struct FreeContext {
  const DiscreteMeasure* bary;
  const std::vector<DiscreteMeasure>* marginals;
  const ProjectionSet* proj;
  double p;
  Matrix bvals;                                          // n x L
  std::vector<Matrix> mvals;                             // K matrices, n x L
  std::vector<std::vector<Eigen::Index>> bsort;          // per l
  std::vector<std::vector<std::vector<Eigen::Index>>> msort;  // per k, per l
  Matrix V;                                              // L x K
};

FreeContext build_free_context(const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p) {
  const Eigen::Index K = Eigen::Index(marginals.size());
  if (K < 1) throw std::invalid_argument("need at least one marginal");
  const Eigen::Index n = bary.size(), d = bary.dim(), L = proj.count();
  if (proj.dim() != d) throw std::invalid_argument("projection/barycenter dimension mismatch");
  if (!bary.has_uniform_weights(1e-9))
    throw std::invalid_argument("free-support path requires a uniform-weight barycenter");
  for (const auto& m : marginals) {
    if (m.dim() != d) throw std::invalid_argument("marginal dimension mismatch");
    if (m.size() != n || !m.has_uniform_weights(1e-9))
      throw std::invalid_argument(
          "free-support path requires equal-size uniform marginals");
  }

  FreeContext ctx;
  ctx.bary = &bary;
  ctx.marginals = &marginals;
  ctx.proj = &proj;
  ctx.p = p;
  ctx.bvals = bary.supports * proj.directions.transpose();
  ctx.bsort.resize(L);
  for (Eigen::Index l = 0; l < L; ++l) ctx.bsort[l] = stable_argsort(ctx.bvals.col(l));

  ctx.mvals.resize(K);
  ctx.msort.resize(K);
  ctx.V.resize(L, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    ctx.mvals[k] = marginals[k].supports * proj.directions.transpose();
    ctx.msort[k].resize(L);
    for (Eigen::Index l = 0; l < L; ++l) {
      auto& ms = ctx.msort[k][l];
      ms = stable_argsort(ctx.mvals[k].col(l));
      double cost = 0.0;
      for (Eigen::Index r = 0; r < n; ++r)
        cost += pow_abs(ctx.bvals(ctx.bsort[l][r], l) - ctx.mvals[k](ms[r], l), p);
      ctx.V(l, k) = cost / double(n);
    }
  }
  return ctx;
}

// grad = sum_{l,k} C(l,k) * per-support matched-pair gradient
// p |theta^T x_i - theta^T y_sigma(i)|^{p-1} sign(.) theta. This is the
// derivative of the summed matched-pair cost n * W_p^p, so the per-support
// step magnitude is independent of n and a single constant learning rate
// works across support counts.
Matrix accumulate_free(const FreeContext& ctx, const Matrix& C) {
  const Eigen::Index n = ctx.bary->size(), d = ctx.bary->dim();
  const Eigen::Index L = ctx.proj->count();
  const Eigen::Index K = Eigen::Index(ctx.marginals->size());
  Matrix grad = Matrix::Zero(n, d);
  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double c = C(l, k);
      if (c == 0.0) continue;
      const auto& bs = ctx.bsort[l];
      const auto& ms = ctx.msort[k][l];
      for (Eigen::Index r = 0; r < n; ++r) {
        const Eigen::Index i = bs[r];
        const double diff = ctx.bvals(i, l) - ctx.mvals[k](ms[r], l);
        const double coef = c * dpow_abs(diff, ctx.p);
        grad.row(i) += coef * ctx.proj->directions.row(l);
      }
    }
  }
  return grad;
}

// Per-method coefficient matrix C (L x K) and objective value from the value
// matrix V. The coefficients are frozen at the current iterate (Danskin /
// subgradient / stop-gradient choices), so the gradient is always
// sum C(l,k) * grad W_lk.
struct Combination {
  Matrix C;
  double objective;
};

Combination combine_uswb(const Matrix& V, const Vector& omega) {
  const Eigen::Index L = V.rows(), K = V.cols();
  Combination out;
  out.C.resize(L, K);
  for (Eigen::Index k = 0; k < K; ++k) out.C.col(k).setConstant(omega[k] / double(L));
  out.objective = V.colwise().mean().dot(omega);
  return out;
}

Combination combine_mfswb_dual(const Matrix& V, double lambda) {
  const Eigen::Index L = V.rows(), K = V.cols();
  if (K < 2) throw std::invalid_argument("dual MFSWB needs K >= 2 marginals");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const Vector sw = V.colwise().mean();  // per-marginal SW estimates
  const double pair_coef = 2.0 * lambda / (double(K) * double(K - 1));
  double penalty = 0.0;
  Vector coef = Vector::Constant(K, 1.0 / double(K));
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = i + 1; j < K; ++j) {
      const double gap = sw[i] - sw[j];
      penalty += std::abs(gap);
      const double s = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
      coef[i] += pair_coef * s;
      coef[j] -= pair_coef * s;
    }
  }
  Combination out;
  out.C.resize(L, K);
  for (Eigen::Index k = 0; k < K; ++k) out.C.col(k).setConstant(coef[k] / double(L));
  // same summation order as combine_uswb with uniform omega, so the
  // lambda = 0 dual reproduces USWB bitwise
  out.objective = sw.dot(Vector::Constant(K, 1.0 / double(K))) + pair_coef * penalty;
  return out;
}

Combination combine_s(const Matrix& V) {
  const Eigen::Index L = V.rows(), K = V.cols();
  const Vector sw = V.colwise().mean();
  Eigen::Index kstar = 0;
  for (Eigen::Index k = 1; k < K; ++k)
    if (sw[k] > sw[kstar]) kstar = k;  // ties keep the smallest index
  Combination out;
  out.C = Matrix::Zero(L, K);
  out.C.col(kstar).setConstant(1.0 / double(L));
  out.objective = sw[kstar];
  return out;
}

std::vector<Eigen::Index> rowwise_argmax(const Matrix& V) {
  std::vector<Eigen::Index> ks(V.rows());
  for (Eigen::Index l = 0; l < V.rows(); ++l) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < V.cols(); ++k)
      if (V(l, k) > V(l, best)) best = k;
    ks[l] = best;
  }
  return ks;
}

Combination combine_us(const Matrix& V) {
  const Eigen::Index L = V.rows(), K = V.cols();
  const auto ks = rowwise_argmax(V);
  Combination out;
  out.C = Matrix::Zero(L, K);
  out.objective = 0.0;
  for (Eigen::Index l = 0; l < L; ++l) {
    out.C(l, ks[l]) = 1.0 / double(L);
    out.objective += V(l, ks[l]);
  }
  out.objective /= double(L);
  return out;
}

Combination combine_es(const Matrix& V) {
  const Eigen::Index L = V.rows(), K = V.cols();
  const auto ks = rowwise_argmax(V);
  Vector a(L);
  for (Eigen::Index l = 0; l < L; ++l) a[l] = V(l, ks[l]);
  const Vector w = energy_weights(a).weights;
  Combination out;
  out.C = Matrix::Zero(L, K);
  for (Eigen::Index l = 0; l < L; ++l) out.C(l, ks[l]) = w[l];
  out.objective = w.dot(a);
  return out;
}

Combination combine(const Method& method, const Matrix& V) {
  switch (method.tag) {
    case MethodTag::Uswb: return combine_uswb(V, resolve_omega(method.omega, V.cols()));
    case MethodTag::MfswbDual: return combine_mfswb_dual(V, method.lambda);
    case MethodTag::SMfswb: return combine_s(V);
    case MethodTag::UsMfswb: return combine_us(V);
    case MethodTag::EsMfswb: return combine_es(V);
  }
  throw std::logic_error("unreachable");
}

GradientEstimate free_estimate(const Method& method, const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p) {
  const auto ctx = build_free_context(bary, marginals, proj, p);
  const auto comb = combine(method, ctx.V);
  GradientEstimate out;
  out.is_free = true;
  out.free_grad = accumulate_free(ctx, comb.C);
  out.objective_value = comb.objective;
  return out;
}

// Fixed-support path: the barycenter is (grid, phi); values and gradients
// come from the general-weights 1D solver and its dual potential.
GradientEstimate fixed_estimate(const Method& method, const Matrix& grid,
                                const Vector& phi,
                                const std::vector<DiscreteMeasure>& marginals,
                                const ProjectionSet& proj, double p) {
  const Eigen::Index K = Eigen::Index(marginals.size());
  if (K < 1) throw std::invalid_argument("need at least one marginal");
  const Eigen::Index n = grid.rows(), d = grid.cols(), L = proj.count();
  if (proj.dim() != d) throw std::invalid_argument("projection/grid dimension mismatch");
  if (phi.size() != n) throw std::invalid_argument("phi/grid size mismatch");
  if (phi.minCoeff() < -1e-12 || std::abs(phi.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("phi must lie on the probability simplex");
  for (const auto& m : marginals)
    if (m.dim() != d) throw std::invalid_argument("marginal dimension mismatch");

  const Matrix gvals = grid * proj.directions.transpose();  // n x L
  std::vector<Matrix> mvals(K);
  for (Eigen::Index k = 0; k < K; ++k)
    mvals[k] = marginals[k].supports * proj.directions.transpose();

  Matrix V(L, K);
  for (Eigen::Index l = 0; l < L; ++l) {
    const ProjectedMeasure pb{gvals.col(l), phi};
    for (Eigen::Index k = 0; k < K; ++k) {
      const ProjectedMeasure pm{mvals[k].col(l), marginals[k].weights};
      V(l, k) = wasserstein1d_pp(pb, pm, p);
    }
  }

  const auto comb = combine(method, V);
  Vector grad = Vector::Zero(n);
  for (Eigen::Index l = 0; l < L; ++l) {
    const ProjectedMeasure pb{gvals.col(l), phi};
    for (Eigen::Index k = 0; k < K; ++k) {
      if (comb.C(l, k) == 0.0) continue;
      const ProjectedMeasure pm{mvals[k].col(l), marginals[k].weights};
      grad += comb.C(l, k) * dual_potential_1d(pb, pm, p).f;
    }
  }

  GradientEstimate out;
  out.is_free = false;
  out.fixed_grad = std::move(grad);
  out.objective_value = comb.objective;
  return out;
}

}  // namespace

GradientEstimate swb_grad(const DiscreteMeasure& bary,
                          const std::vector<DiscreteMeasure>& marginals,
                          const ProjectionSet& proj, double p, const Vector& omega) {
  return free_estimate(Method::uswb(omega), bary, marginals, proj, p);
}

GradientEstimate mfswb_dual_grad(const DiscreteMeasure& bary,
                                 const std::vector<DiscreteMeasure>& marginals,
                                 const ProjectionSet& proj, double p, double lambda) {
  return free_estimate(Method::mfswb_dual(lambda), bary, marginals, proj, p);
}

GradientEstimate s_mfswb_grad(const DiscreteMeasure& bary,
                              const std::vector<DiscreteMeasure>& marginals,
                              const ProjectionSet& proj, double p) {
  return free_estimate(Method::s_mfswb(), bary, marginals, proj, p);
}

GradientEstimate us_mfswb_grad(const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p) {
  return free_estimate(Method::us_mfswb(), bary, marginals, proj, p);
}

GradientEstimate es_mfswb_grad(const DiscreteMeasure& bary,
                               const std::vector<DiscreteMeasure>& marginals,
                               const ProjectionSet& proj, double p) {
  return free_estimate(Method::es_mfswb(), bary, marginals, proj, p);
}

GradientEstimate swb_grad_fixed(const Matrix& grid, const Vector& phi,
                                const std::vector<DiscreteMeasure>& marginals,
                                const ProjectionSet& proj, double p, const Vector& omega) {
  return fixed_estimate(Method::uswb(omega), grid, phi, marginals, proj, p);
}

GradientEstimate mfswb_dual_grad_fixed(const Matrix& grid, const Vector& phi,
                                       const std::vector<DiscreteMeasure>& marginals,
                                       const ProjectionSet& proj, double p, double lambda) {
  return fixed_estimate(Method::mfswb_dual(lambda), grid, phi, marginals, proj, p);
}

GradientEstimate s_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                    const std::vector<DiscreteMeasure>& marginals,
                                    const ProjectionSet& proj, double p) {
  return fixed_estimate(Method::s_mfswb(), grid, phi, marginals, proj, p);
}

GradientEstimate us_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                     const std::vector<DiscreteMeasure>& marginals,
                                     const ProjectionSet& proj, double p) {
  return fixed_estimate(Method::us_mfswb(), grid, phi, marginals, proj, p);
}

GradientEstimate es_mfswb_grad_fixed(const Matrix& grid, const Vector& phi,
                                     const std::vector<DiscreteMeasure>& marginals,
                                     const ProjectionSet& proj, double p) {
  return fixed_estimate(Method::es_mfswb(), grid, phi, marginals, proj, p);
}

GradientEstimate method_grad(const Method& method, const DiscreteMeasure& bary,
                             const std::vector<DiscreteMeasure>& marginals,
                             const ProjectionSet& proj, double p) {
  return free_estimate(method, bary, marginals, proj, p);
}

GradientEstimate method_grad_fixed(const Method& method, const Matrix& grid,
                                   const Vector& phi,
                                   const std::vector<DiscreteMeasure>& marginals,
                                   const ProjectionSet& proj, double p) {
  return fixed_estimate(method, grid, phi, marginals, proj, p);
}

}  // namespace swb
