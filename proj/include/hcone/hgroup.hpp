#pragma once

// The first Heisenberg group H^1 and horizontal lifting of planar curves.
//
// H^1 is R^3 = {(x, y, t)} with the polynomial group law
//
//     (x, y, t) * (x', y', t') = (x + x', y + y', t + t' + (x'y - x y')),
//
// identity (0,0,0), inverse (-x,-y,-t), and anisotropic dilations
// delta_lambda(x, y, t) = (lambda x, lambda y, lambda^2 t).
//
// The left-invariant frame is
//
//     X = d/dx + y d/dt,   Y = d/dy - x d/dt,   T = d/dt,
//
// with commutator [X, Y] = -2T.  A horizontal field V = v1 X + v2 Y has
// horizontal divergence div(V) = X v1 + Y v2.
//
// A curve s -> (x(s), y(s), t(s)) is horizontal when t' = y x' - x y'.
// Along the straight segment (x1,y1) -> (x2,y2) the integrand y x' - x y'
// is linear in s and integrates to the exact cross term
//
//     dt = x2 y1 - x1 y2.
//
// Consequently the lift of a closed polyline through the origin satisfies
// t_final - t_0 = -2 * (shoelace area swept from the origin): signed segment
// cross terms are exactly minus twice the signed triangle areas (0, v_i,
// v_{i+1}).  balayage_area() shares the lift's accumulation arithmetic so
// that this identity holds bit-for-bit, not merely to rounding.

#include <functional>
#include <vector>

#include "hcone/geometry.hpp"

namespace hcone {

struct HPoint {
  double x{0.0};
  double y{0.0};
  double t{0.0};
};

// A horizontal tangent vector a*X + b*Y (frame coefficients).
struct HVector {
  double a{0.0};
  double b{0.0};
};

HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint group_inv(const HPoint& p);

// delta_lambda; lambda must be strictly positive.
HPoint dilate(double lambda, const HPoint& p);

// A scalar function on H^1 together with its analytic partial derivatives.
struct ScalarField {
  std::function<double(const HPoint&)> value;
  std::function<double(const HPoint&)> dx;
  std::function<double(const HPoint&)> dy;
  std::function<double(const HPoint&)> dt;
};

// Derivative of f along the left-invariant horizontal vector a*X + b*Y at p:
//   a (f_x + y f_t) + b (f_y - x f_t).
double frame_apply(const HVector& v, const ScalarField& f, const HPoint& p);

// A t-independent coefficient function on the plane with analytic partials.
struct PlanarField {
  std::function<double(Vec2)> value;
  std::function<double(Vec2)> dx;
  std::function<double(Vec2)> dy;
};

// Horizontal vector field V = v1 X + v2 Y with t-independent coefficients.
struct HorizontalField {
  PlanarField v1;
  PlanarField v2;
};

// Horizontal divergence X v1 + Y v2 as a scalar function.  For
// t-independent coefficients this reduces to the planar divergence
// dv1/dx + dv2/dy.
std::function<double(const HPoint&)> horizontal_divergence(const HorizontalField& V);

// Planar polyline; operations require at least two vertices.
struct PlanarCurve {
  std::vector<Vec2> vertices;
};

// Exact lift increment of the straight segment a -> b:  b.x*a.y - a.x*b.y.
double segment_lift_increment(Vec2 a, Vec2 b);

// Horizontal lift of gamma starting at height t0: the unique curve in H^1
// over gamma whose velocity stays in the horizontal plane field.
std::vector<HPoint> lift_curve(const PlanarCurve& gamma, double t0);

// Signed area swept by the segment from the origin to the moving point of
// gamma (sum of signed triangle areas (0, v_i, v_{i+1})).  Requires the
// curve to start at the origin.  Shares the lift's accumulation arithmetic:
// lift_curve(gamma, 0).back().t == -2 * balayage_area(gamma) exactly.
double balayage_area(const PlanarCurve& gamma);

}  // namespace hcone
