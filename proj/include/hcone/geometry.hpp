#pragma once

// Planar vector/angle utilities shared by every module.
//
// Angles are radians throughout.  Directions on the unit circle are
// normalized to [0, 2*pi); signed angular differences live in (-pi, pi].

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hcone {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Absolute tolerance (radians) for deciding that two directions coincide:
// arc endpoints touching, query points lying on a ray.
inline constexpr double kAngleTol = 1e-12;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Counterclockwise quarter turn.
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Map any angle into [0, 2*pi).
inline double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod can land exactly on 2*pi after the add
  return r;
}

// Signed angular difference a - b reduced into (-pi, pi].
inline double signed_angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

// Does the ray from the origin in direction u meet the axis-aligned box?
// Used by quadrature kernels to detect cells straddling an interface ray.
inline bool ray_from_origin_hits_box(Vec2 u, double x0, double x1, double y0,
                                     double y1) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  if (std::fabs(u.x) < 1e-300) {
    if (x0 > 0.0 || x1 < 0.0) return false;
  } else {
    double t1 = x0 / u.x, t2 = x1 / u.x;
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  if (std::fabs(u.y) < 1e-300) {
    if (y0 > 0.0 || y1 < 0.0) return false;
  } else {
    double t1 = y0 / u.y, t2 = y1 / u.y;
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  return tmin <= tmax;
}

// Snap values that are within one rounding error of {0, +-1} onto the exact
// constant.  Applied to cos/sin of arc centers and cot of half-angles so that
// quarter-turn configurations (centers at multiples of pi/2, half-angle pi/2)
// evaluate exactly: e.g. cos(pi) == -1 but sin(pi) ~ 1.2e-16, and the
// two-half-circle cone must reproduce t = -x*y to the last bit.
inline double snap_trig(double v) {
  if (std::fabs(v) < 1e-15) return 0.0;
  if (std::fabs(v - 1.0) < 1e-15) return 1.0;
  if (std::fabs(v + 1.0) < 1e-15) return -1.0;
  return v;
}

}  // namespace hcone
