#pragma once

// Verification suites shared by the `bench` subcommand and the acceptance
// runner. Each suite draws its own seeded instances and reports pass/fail
// with a short detail string.

#include <cstdint>
#include <string>

namespace suites {

struct Result {
  bool pass = false;
  std::string detail;
};

// S-F <= US-F <= ES-F on a shared projection batch, over random instances.
Result sandwich(int cases, std::uint64_t seed);

// Free-support gradients of all five objectives vs central finite
// differences of their frozen-coefficient objectives.
Result gradient_fd(int cases, std::uint64_t seed);

// Fixed-support dual-potential gradients vs directional finite differences
// along random simplex-tangent directions.
Result fixed_gradient_fd(int cases, std::uint64_t seed);

// 1D quantile path vs exhaustive permutations (uniform), vs a discretized
// quantile integral (general weights), and exact d=3 OT vs permutations.
Result ot_oracles(int uniform_cases, int general_cases, std::uint64_t seed);

// Monte Carlo error rate of the us-MFSWB gradient estimator: log-log slope
// of the std of the first gradient component vs L in {10, 100, 1000}.
Result mc_slope(int resamples, std::uint64_t seed);

}  // namespace suites
