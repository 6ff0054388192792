#pragma once

// Compactly supported C^1 test functions: quartic bumps
//
//     phi(v) = A * (1 - |v - c|^2 / r^2)^2   for |v - c| < r,   0 outside.
//
// Value and gradient vanish on the support boundary, so phi is C^1 on the
// whole plane — smooth enough for first-order integration by parts and for
// graph perturbations.

#include "hcone/geometry.hpp"

namespace hcone {

struct Bump {
  Vec2 center{0.0, 0.0};
  double radius{1.0};
  double amplitude{1.0};

  double value(Vec2 v) const {
    const Vec2 d = v - center;
    const double s = dot(d, d) / (radius * radius);
    if (s >= 1.0) return 0.0;
    const double w = 1.0 - s;
    return amplitude * w * w;
  }

  Vec2 grad(Vec2 v) const {
    const Vec2 d = v - center;
    const double s = dot(d, d) / (radius * radius);
    if (s >= 1.0) return {0.0, 0.0};
    const double scale = -4.0 * amplitude * (1.0 - s) / (radius * radius);
    return scale * d;
  }
};

}  // namespace hcone
