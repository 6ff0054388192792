#include "hcone/hgroup.hpp"

#include <stdexcept>

namespace hcone {

HPoint group_mul(const HPoint& p, const HPoint& q) {
  return {p.x + q.x, p.y + q.y, p.t + q.t + (q.x * p.y - p.x * q.y)};
}

HPoint group_inv(const HPoint& p) { return {-p.x, -p.y, -p.t}; }

HPoint dilate(double lambda, const HPoint& p) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("dilate: lambda must be strictly positive");
  }
  return {lambda * p.x, lambda * p.y, lambda * lambda * p.t};
}

double frame_apply(const HVector& v, const ScalarField& f, const HPoint& p) {
  const double ft = f.dt(p);
  return v.a * (f.dx(p) + p.y * ft) + v.b * (f.dy(p) - p.x * ft);
}

std::function<double(const HPoint&)> horizontal_divergence(const HorizontalField& V) {
  return [V](const HPoint& p) {
    const Vec2 v{p.x, p.y};
    return V.v1.dx(v) + V.v2.dy(v);
  };
}

double segment_lift_increment(Vec2 a, Vec2 b) { return b.x * a.y - a.x * b.y; }

namespace {

void require_polyline(const PlanarCurve& gamma) {
  if (gamma.vertices.size() < 2) {
    throw std::invalid_argument("polyline needs at least two vertices");
  }
}

}  // namespace

std::vector<HPoint> lift_curve(const PlanarCurve& gamma, double t0) {
  require_polyline(gamma);
  std::vector<HPoint> out;
  out.reserve(gamma.vertices.size());
  double t = t0;
  out.push_back({gamma.vertices.front().x, gamma.vertices.front().y, t});
  for (std::size_t i = 1; i < gamma.vertices.size(); ++i) {
    t += segment_lift_increment(gamma.vertices[i - 1], gamma.vertices[i]);
    out.push_back({gamma.vertices[i].x, gamma.vertices[i].y, t});
  }
  return out;
}

double balayage_area(const PlanarCurve& gamma) {
  require_polyline(gamma);
  if (gamma.vertices.front().x != 0.0 || gamma.vertices.front().y != 0.0) {
    throw std::invalid_argument("balayage_area: curve must start at the origin");
  }
  // Accumulate exactly as lift_curve does, then halve; scaling by powers of
  // two commutes with IEEE rounding, so -2 * area reproduces the final lift
  // height bit-for-bit.
  double t = 0.0;
  for (std::size_t i = 1; i < gamma.vertices.size(); ++i) {
    t += segment_lift_increment(gamma.vertices[i - 1], gamma.vertices[i]);
  }
  return -0.5 * t;
}

}  // namespace hcone
