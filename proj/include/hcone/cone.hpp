#pragma once

// Conical t-graphs over arc families and their first-order structure.
//
// For a single arc of half-angle alpha centered on the positive x-axis, the
// generating profile is
//
//     u_alpha(x, y) = y * (|y| * cot(alpha) - x)   inside the open sector
//                     {|theta| < alpha},           0 elsewhere,
//
// with interior derivatives du/dx = -y and du/dy = 2|y| cot(alpha) - x.
// u_alpha is 2-homogeneous (u(r v) = r^2 u(v)), continuous everywhere, and
// its graph is ruled by horizontal lines: through an interior point with
// y > 0 the planar projection of the ruling is the line from the foot
// (x - y cot(alpha), 0) in direction (cos alpha, sin alpha) (mirrored for
// y < 0), and the lift of that line starting at height 0 stays on the graph.
//
// The cone over a family rotates a copy of u_alpha onto every arc (at most
// one term is nonzero at any point, since sectors are disjoint) and vanishes
// over the complementary sectors.  The characteristic vector
//
//     N(v) = (du/dx - y, du/dy + x)
//
// is the horizontal direction of the subgraph normal; it vanishes exactly on
// the bisectrix rays of the arcs and at the apex, which is the singular set.
// The surface is C^1 precisely when the family is finite and its arc
// closures cover the circle (the empty family gives the smooth plane t = 0);
// at a shared endpoint ray of two adjacent arcs both one-sided gradients
// equal s * (unit normal to the ray) at distance s, so they match.  For an
// infinite geometric tail the gradient stays bounded but oscillates with
// unit-scale amplitude inside every tail arc, so no C^1 extension exists.

#include <optional>
#include <variant>
#include <vector>

#include "hcone/arcs.hpp"
#include "hcone/errors.hpp"
#include "hcone/geometry.hpp"
#include "hcone/hgroup.hpp"

namespace hcone {

// Identifies one open sector of the plane decomposition induced by a family.
struct RegionRef {
  enum class Kind { JSector, ILower, IUpper, TailGap };
  Kind kind{Kind::JSector};
  int index{0};

  friend bool operator==(const RegionRef&, const RegionRef&) = default;
};

// A planar vector quantity that may carry distinct one-sided limits on the
// interface rays of the decomposition.  Off the rays it has a single entry.
struct SidedVec {
  RegionRef from;  // the open region the limit is taken from
  Vec2 value;
};

struct MultiVec {
  std::vector<SidedVec> limits;

  bool single_valued() const { return limits.size() == 1; }
  // Deterministic representative: the first limit (regions are enumerated in
  // a fixed order, clockwise side first).
  Vec2 representative() const { return limits.front().value; }
};

// Profile of a single arc centered on the positive x-axis.  Throws
// BadHalfAngle unless alpha lies in (0, pi).
double u_alpha(double alpha, Vec2 v);

// Gradient of u_alpha; on the bisectrix and the two boundary rays it returns
// both one-sided limits tagged by side (they agree on the bisectrix).
MultiVec grad_u_alpha(double alpha, Vec2 v);

// Result of the C^1 test.
struct C1Report {
  bool c1{false};
  // Largest one-sided gradient disagreement found across interface rays,
  // sampled at |v| = 1 (exactly 0 when closed forms coincide).
  double max_interface_jump{0.0};
  // When not C^1: an interface ray exhibiting the jump, and the jump vector
  // (difference of one-sided gradient limits) at distance 1 along it.
  std::optional<double> witness_angle;
  Vec2 witness_jump{0.0, 0.0};
};

struct SingularSet {
  enum class Kind { Empty, OriginOnly, OriginAndRays };
  Kind kind{Kind::OriginOnly};
  std::vector<double> ray_angles;  // bisectrix directions, sorted
};

// Numeric audit accompanying the singular set: the characteristic vector
// must vanish on sampled ray points and stay uniformly away from zero
// (relative to |v|) off the rays.
struct SingularSetAudit {
  double max_on_ray_norm{0.0};
  double min_off_ray_scaled_norm{0.0};  // min over samples of |N(v)| / |v|
};

// Oscillation probe of an infinite tail: per-arc extrema of the derivative
// transverse to the bisectrix (in the arc's rotated frame) sampled at a
// fixed radius.  The amplitude, normalized by the radius, stays >= 1 for
// every tail arc while |grad u| remains bounded by sqrt(2) * radius, which
// is what rules out a C^1 extension.
struct OscillationReport {
  struct ArcProbe {
    int tail_index{0};
    double half_angle{0.0};
    double min_transverse{0.0};
    double max_transverse{0.0};
    double amplitude_normalized{0.0};  // (max - min) / radius
    double sup_grad_norm{0.0};
    double max_abs_u{0.0};
    double u_bound{0.0};  // radius^2 * tan(half_angle)
  };
  double radius{0.0};
  double grad_bound{0.0};  // sqrt(2) * radius
  std::vector<ArcProbe> arcs;
  bool amplitude_persists{false};  // every probed arc has amplitude >= 1
  bool grad_bounded{false};
};

class ConeSurface {
 public:
  explicit ConeSurface(ArcFamily family);

  const ArcFamily& family() const { return family_; }

  // Graph height.  Exactly 0 at the apex, over complementary sectors, and on
  // all bisectrix/boundary rays.
  double evaluate(Vec2 v) const;

  // Piecewise-closed-form gradient; multi-valued (tagged one-sided limits)
  // on the interface rays.  (0, 0) at the apex.
  MultiVec gradient(Vec2 v) const;

  // N(v) = (du/dx - y, du/dy + x); same multi-valued convention.  Exactly
  // (0, 0) on bisectrix rays and at the apex.
  MultiVec characteristic_vector(Vec2 v) const;

  // Singular set of the surface: apex only for the empty family, apex plus
  // one bisectrix ray per arc otherwise.  Throws InfiniteFamily.
  SingularSet singular_set() const;
  SingularSetAudit singular_set_audit(int samples = 64,
                                      unsigned long long seed = 17) const;

  // Planar projection of the characteristic (ruling) line through v, as a
  // polyline from its foot through v extended to |parameter| = extend.
  // The horizontal lift of this polyline starting at the foot's height lies
  // on the graph.  Throws SingularPoint on the singular set, OriginQuery
  // style apex included.
  PlanarCurve characteristic_ray(Vec2 v, double extend = 2.0) const;

  // C^1 test: analytically, finite and covering (the empty family counts as
  // C^1, its cone being the plane); numerically confirmed by comparing
  // one-sided gradient limits on every interface ray.
  C1Report is_c1() const;

  // Tail oscillation probe at the given radius.  Throws NoTail.
  OscillationReport oscillation_probe(double radius, int probe_arcs = 12,
                                      int samples_per_arc = 101) const;

  // Rotated-frame data of one arc (prefix or tail): the rotation taking the
  // arc's bisectrix to the positive x-axis, with exact-quadrant snapping.
  struct ArcFrame {
    double cos_c{1.0}, sin_c{0.0};  // cos/sin of the arc center
    double cot_alpha{0.0};
    double alpha{0.0};
    double center{0.0};
  };
  ArcFrame frame(int arc_index) const;

  // Coordinates of v in the arc's rotated frame (bisectrix on +x axis).
  Vec2 to_frame(const ArcFrame& f, Vec2 v) const;
  // Planar vector transported back from the rotated frame.
  Vec2 from_frame(const ArcFrame& f, Vec2 w) const;

 private:
  ArcFamily family_;
  std::vector<ArcFrame> frames_;  // prefix arcs only; tail frames on demand
};

// Interface ray of the sector decomposition: the shared boundary of two
// adjacent regions (clockwise / counterclockwise side).
struct InterfaceRay {
  enum class Kind { Bisectrix, ArcEndpoint };
  Kind kind{Kind::Bisectrix};
  double angle{0.0};
  RegionRef cw_side;
  RegionRef ccw_side;
};

// All interface rays of a finite family, sorted by angle.  Empty families
// have none.  Throws InfiniteFamily.
std::vector<InterfaceRay> interface_rays(const ArcFamily& family);

// --- classification -------------------------------------------------------

// Vertical plane {a x + b y = 0} through the t-axis, named by its unit
// normal direction's angle.
struct VerticalPlaneSpec {
  double normal_angle{0.0};
};

// The horizontal plane {t = 0}.
struct HorizontalPlaneSpec {};

using ClassifyInput = std::variant<VerticalPlaneSpec, HorizontalPlaneSpec, ConeSurface>;

struct SurfaceClassification {
  enum class Kind { VerticalPlane, HorizontalPlane, ArcCone };
  Kind kind{Kind::HorizontalPlane};
  double normal_angle{0.0};  // VerticalPlane only
  SingularSet singular_set;
};

// Trichotomy of complete minimal cones realized here: vertical planes have
// empty singular set; the horizontal plane (empty family) has singular set
// {apex}; a covering-family cone has the apex plus its bisectrix rays.
// Cones over non-covering or infinite families throw NotC1.
SurfaceClassification classify(const ClassifyInput& input);

}  // namespace hcone
