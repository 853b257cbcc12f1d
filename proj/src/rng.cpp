#include "gbvar/rng.hpp"

#include <cmath>
#include <numbers>

namespace gbvar {

double CounterRng::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  // 1 - u lies in (0,1], keeping log finite.
  const double u1 = 1.0 - next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace gbvar
