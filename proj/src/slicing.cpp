#include "swb/slicing.hpp"

#include <cmath>
#include <stdexcept>

namespace swb {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer applied to seed ^ golden-ratio-spread tag.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // 53-bit mantissa draw, shifted off zero.
  const std::uint64_t x = engine_();
  return (double(x >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // rejection sampling over the top of the range
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

ProjectionSet sample_uniform_sphere(Eigen::Index L, Eigen::Index d, std::uint64_t seed) {
  if (L < 1 || d < 1)
    throw std::invalid_argument("sample_uniform_sphere: need L >= 1 and d >= 1");
  Rng rng(seed);
  Matrix dirs(L, d);
  for (Eigen::Index l = 0; l < L; ++l) {
    double norm2 = 0.0;
    do {
      for (Eigen::Index c = 0; c < d; ++c) {
        dirs(l, c) = rng.normal();
      }
      norm2 = dirs.row(l).squaredNorm();
    } while (norm2 < 1e-200);
    dirs.row(l) /= std::sqrt(norm2);
  }
  return ProjectionSet{std::move(dirs), seed};
}

EnergyWeights energy_weights(const Vector& maxdists) {
  if (maxdists.size() < 1)
    throw std::invalid_argument("energy_weights: empty input");
  if (!maxdists.allFinite())
    throw std::invalid_argument("energy_weights: non-finite entry");
  const double m = maxdists.maxCoeff();
  Vector w = (maxdists.array() - m).exp();
  w /= w.sum();
  return EnergyWeights{std::move(w)};
}

}  // namespace swb
