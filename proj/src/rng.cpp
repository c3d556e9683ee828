#include "fdia/rng.hpp"

#include <cmath>

namespace fdia {

double NoiseStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Polar Box-Muller. Uniforms in (0,1] to avoid log(0).
  double u1 = 0.0, u2 = 0.0, s = 0.0;
  do {
    u1 = 2.0 * ((engine_() >> 11) + 1.0) * 0x1.0p-53 - 1.0;
    u2 = 2.0 * ((engine_() >> 11) + 1.0) * 0x1.0p-53 - 1.0;
    s = u1 * u1 + u2 * u2;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = u2 * f;
  have_spare_ = true;
  return u1 * f;
}

Vec NoiseStream::gaussian_vector(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = gaussian();
  return v;
}

}  // namespace fdia
