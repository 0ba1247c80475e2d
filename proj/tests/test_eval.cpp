#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "suites.hpp"
#include "swb/eval.hpp"
#include "swb/slicing.hpp"

using namespace swb;

namespace {

DiscreteMeasure random_measure(Rng& rng, Eigen::Index n, Eigen::Index d, double shift = 0.0) {
  Matrix s(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(i, j) = rng.normal() + shift;
  return DiscreteMeasure::uniform(std::move(s));
}

DiscreteMeasure point_mass_1d(double x) {
  Matrix s(1, 1);
  s << x;
  return DiscreteMeasure::uniform(std::move(s));
}

}  // namespace

TEST_CASE("exact_w_pp basics") {
  Rng rng(1);
  const auto a = random_measure(rng, 5, 3);
  CHECK(exact_w_pp(a, a, 2.0) == doctest::Approx(0.0));

  Matrix s1(2, 1), s2(2, 1);
  s1 << 0, 2;
  s2 << 1, 5;
  const auto m1 = DiscreteMeasure::uniform(s1);
  const auto m2 = DiscreteMeasure::uniform(s2);
  CHECK(exact_w_pp(m1, m2, 2.0) == doctest::Approx(5.0));

  CHECK_THROWS_AS(exact_w_pp(a, random_measure(rng, 5, 2), 2.0), std::invalid_argument);
}

TEST_CASE("exact_w_pp agrees with the permutation oracle in d=3") {
  Rng rng(2);
  for (int c = 0; c < 10; ++c) {
    const auto a = random_measure(rng, 7, 3);
    const auto b = random_measure(rng, 7, 3, 0.5);
    CHECK(std::abs(exact_w_pp(a, b, 2.0) - oracle::perm_min_cost(a.supports, b.supports, 2.0)) <
          1e-9);
  }
}

TEST_CASE("general-weights exact_w_pp agrees with the assignment path") {
  // replicate each uniform support with split weights; cost must not change
  Rng rng(3);
  const auto a = random_measure(rng, 5, 2);
  const auto b = random_measure(rng, 6, 2, 1.0);
  Vector wa(5);
  for (Eigen::Index i = 0; i < 5; ++i) wa[i] = 0.1 + rng.uniform();
  wa /= wa.sum();
  const DiscreteMeasure ga(a.supports, wa);
  // sanity: min-cost flow on uniform weights equals the assignment value
  Vector ub = Vector::Constant(6, 1.0 / 6.0);
  const DiscreteMeasure gb(b.supports, ub);
  const double flow = exact_w_pp(ga, gb, 2.0);
  CHECK(flow >= 0.0);
  // degenerate split: two half-weight copies of each support of a
  Matrix dup(10, 2);
  dup << a.supports, a.supports;
  const DiscreteMeasure split(dup, Vector::Constant(10, 0.1));
  CHECK(exact_w_pp(split, b, 2.0) == doctest::Approx(exact_w_pp(a, b, 2.0)).epsilon(1e-9));
}

TEST_CASE("1D exact_w_pp agrees with the quantile path under identity projection") {
  Rng rng(4);
  for (int c = 0; c < 10; ++c) {
    const Eigen::Index n = 3 + Eigen::Index(rng.below(5));
    const auto a = random_measure(rng, n, 1);
    const auto b = random_measure(rng, n, 1, 1.0);
    Vector e(1);
    e << 1.0;
    const double w1d = wasserstein1d_pp(project(a, e), project(b, e), 2.0);
    CHECK(exact_w_pp(a, b, 2.0) == doctest::Approx(w1d).epsilon(1e-9));
  }
}

TEST_CASE("f and w metrics on hand-built point masses") {
  // marginals at distances 1, 1, 4 from a barycenter at 0, p = 2
  const auto bary = point_mass_1d(0.0);
  const std::vector<DiscreteMeasure> marginals = {point_mass_1d(1.0), point_mass_1d(-1.0),
                                                  point_mass_1d(4.0)};
  CHECK(f_metric(bary, marginals, 2.0) == doctest::Approx(10.0));
  CHECK(w_metric(bary, marginals, 2.0) == doctest::Approx(6.0));

  CHECK(f_metric(bary, {marginals[0], marginals[0]}, 2.0) == doctest::Approx(0.0));
  CHECK(w_metric(bary, {marginals[2]}, 2.0) == doctest::Approx(16.0));
  CHECK_THROWS_AS(f_metric(bary, {marginals[0]}, 2.0), std::invalid_argument);
}

TEST_CASE("f_metric is marginal-permutation invariant") {
  Rng rng(5);
  const auto bary = random_measure(rng, 6, 2);
  std::vector<DiscreteMeasure> marginals;
  for (int k = 0; k < 3; ++k) marginals.push_back(random_measure(rng, 6, 2, double(k)));
  const double f1 = f_metric(bary, marginals, 2.0);
  std::vector<DiscreteMeasure> perm = {marginals[1], marginals[2], marginals[0]};
  CHECK(f_metric(bary, perm, 2.0) == doctest::Approx(f1).epsilon(1e-12));
}

TEST_CASE("projection lower bound") {
  Rng rng(6);
  for (int c = 0; c < 10; ++c) {
    const auto a = random_measure(rng, 8, 3);
    const auto b = random_measure(rng, 8, 3, 1.0);
    const double exact = exact_w_pp(a, b, 2.0);
    const auto proj = sample_uniform_sphere(5, 3, std::uint64_t(100 + c));
    for (Eigen::Index l = 0; l < 5; ++l) {
      const Vector dir = proj.directions.row(l).transpose();
      CHECK(wasserstein1d_pp(project(a, dir), project(b, dir), 2.0) <= exact + 1e-9);
    }
  }
}

TEST_CASE("triangle inequality for W_2 roots") {
  Rng rng(7);
  for (int c = 0; c < 10; ++c) {
    const auto a = random_measure(rng, 6, 2);
    const auto b = random_measure(rng, 6, 2, 1.0);
    const auto m = random_measure(rng, 6, 2, -1.0);
    CHECK(std::sqrt(exact_w_pp(a, m, 2.0)) <=
          std::sqrt(exact_w_pp(a, b, 2.0)) + std::sqrt(exact_w_pp(b, m, 2.0)) + 1e-9);
  }
}

TEST_CASE("subsample_for_eval contracts") {
  Rng rng(8);
  const auto m = random_measure(rng, 20, 2);
  // identity below the cap
  const auto same = subsample_for_eval(m, 20, 1);
  CHECK(same.size() == 20);
  CHECK((same.supports - m.supports).cwiseAbs().maxCoeff() == 0.0);

  const auto s1 = subsample_for_eval(m, 10, 1);
  const auto s2 = subsample_for_eval(m, 10, 2);
  CHECK(s1.size() == 10);
  CHECK(s2.size() == 10);
  CHECK(s1.has_uniform_weights());
  CHECK((s1.supports - s2.supports).cwiseAbs().maxCoeff() > 0.0);

  // deterministic per seed
  const auto s1b = subsample_for_eval(m, 10, 1);
  CHECK((s1.supports - s1b.supports).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subsampled W-metric stays near the full W-metric") {
  // scaled-down version of the stability check: n=1024 vs cap=256
  Rng rng(9);
  const Eigen::Index n = 1024;
  const auto bary = random_measure(rng, n, 2);
  const std::vector<DiscreteMeasure> marginals = {random_measure(rng, n, 2, 2.0)};
  const double full = w_metric(bary, marginals, 2.0);
  for (int seed = 0; seed < 5; ++seed) {
    const auto sb = subsample_for_eval(bary, 256, std::uint64_t(seed));
    const auto sm = subsample_for_eval(marginals[0], 256, std::uint64_t(1000 + seed));
    const double capped = w_metric(sb, {sm}, 2.0);
    CHECK(std::abs(capped - full) / full < 0.15);
  }
}

TEST_CASE("1D and permutation oracle suite") {
  const auto res = suites::ot_oracles(200, 20, 42);
  INFO(res.detail);
  CHECK(res.pass);
}
