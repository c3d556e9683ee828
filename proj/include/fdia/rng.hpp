#pragma once

#include <cstdint>
#include <random>

#include "fdia/types.hpp"

namespace fdia {

// Seedable Gaussian stream. Box-Muller on top of mt19937_64 so that draws are
// reproducible independent of the standard library's normal_distribution.
// Each simulation run owns exactly one stream; the per-step draw order is
// fixed (process noise first, then measurement noise).
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  double gaussian();
  Vec gaussian_vector(int n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fdia
