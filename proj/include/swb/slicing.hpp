#pragma once

#include <cstdint>
#include <random>

#include "swb/measures.hpp"

namespace swb {

// L unit directions on S^{d-1}, one batch per optimizer iteration.
struct ProjectionSet {
  Matrix directions;  // L x d, unit rows
  std::uint64_t seed = 0;

  Eigen::Index count() const { return directions.rows(); }
  Eigen::Index dim() const { return directions.cols(); }
};

// Self-normalized importance weights over a projection batch.
struct EnergyWeights {
  Vector weights;  // length L, nonnegative, sums to 1
};

// splitmix64 mix of a seed with a stream tag. Used everywhere a derived
// deterministic seed is needed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Deterministic random stream: mt19937_64 with hand-rolled Box-Muller.
// The engine and the transforms are fully specified, so identical seeds
// give identical draws on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // U(0,1), strictly inside the open interval.
  double uniform();
  // N(0,1)
  double normal();
  // integer in [0, n)
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

ProjectionSet sample_uniform_sphere(Eigen::Index L, Eigen::Index d, std::uint64_t seed);

// Stabilized softmax of the per-projection max distances: the finite-sample
// self-normalized form of the energy-based slicing distribution.
EnergyWeights energy_weights(const Vector& maxdists);

}  // namespace swb
