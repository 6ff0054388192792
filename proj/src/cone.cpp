#include "hcone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hcone {

namespace {

// Angular offset used to peek at the region adjacent to an interface ray;
// comfortably above the ray-coincidence tolerance, far below any resolvable
// arc width.
constexpr double kProbeOffset = 64.0 * kAngleTol;

double checked_cot(double alpha) {
  if (!(alpha > 0.0) || !(alpha < kPi)) {
    throw BadHalfAngle("half-angle must lie strictly between 0 and pi");
  }
  return snap_trig(snap_trig(std::cos(alpha)) / snap_trig(std::sin(alpha)));
}

// Interior closed forms for the arc-on-positive-x-axis profile.
double u_alpha_interior(double cot_alpha, Vec2 w) {
  return w.y * (std::fabs(w.y) * cot_alpha - w.x);
}

Vec2 grad_u_alpha_interior(double cot_alpha, Vec2 w) {
  return {-w.y, 2.0 * std::fabs(w.y) * cot_alpha - w.x};
}

}  // namespace

double u_alpha(double alpha, Vec2 v) {
  const double cot = checked_cot(alpha);
  if (v.x == 0.0 && v.y == 0.0) return 0.0;
  const double theta = std::atan2(v.y, v.x);
  if (std::fabs(theta) <= kAngleTol) return 0.0;                  // bisectrix
  if (std::fabs(std::fabs(theta) - alpha) <= kAngleTol) return 0.0;  // boundary
  if (std::fabs(theta) < alpha) return u_alpha_interior(cot, v);
  return 0.0;
}

MultiVec grad_u_alpha(double alpha, Vec2 v) {
  const double cot = checked_cot(alpha);
  const RegionRef outside{RegionRef::Kind::JSector, 0};
  const RegionRef lower{RegionRef::Kind::ILower, 0};
  const RegionRef upper{RegionRef::Kind::IUpper, 0};
  if (v.x == 0.0 && v.y == 0.0) {
    return {{{outside, {0.0, 0.0}}}};  // apex: u = O(|v|^2), gradient 0
  }
  const double theta = std::atan2(v.y, v.x);
  if (std::fabs(theta) <= kAngleTol) {
    // Bisectrix: both one-sided limits equal (0, -s) at distance s.
    const Vec2 g{0.0, -norm(v)};
    return {{{lower, g}, {upper, g}}};
  }
  if (std::fabs(theta - alpha) <= kAngleTol) {  // upper boundary ray
    return {{{upper, grad_u_alpha_interior(cot, v)}, {outside, {0.0, 0.0}}}};
  }
  if (std::fabs(theta + alpha) <= kAngleTol) {  // lower boundary ray
    return {{{outside, {0.0, 0.0}}, {lower, grad_u_alpha_interior(cot, v)}}};
  }
  if (std::fabs(theta) < alpha) {
    return {{{theta > 0.0 ? upper : lower, grad_u_alpha_interior(cot, v)}}};
  }
  return {{{outside, {0.0, 0.0}}}};
}

ConeSurface::ConeSurface(ArcFamily family) : family_(std::move(family)) {
  frames_.reserve(family_.prefix_size());
  for (const Arc& a : family_.arcs()) {
    frames_.push_back({snap_trig(std::cos(a.center)), snap_trig(std::sin(a.center)),
                       checked_cot(a.half_angle), a.half_angle, a.center});
  }
}

ConeSurface::ArcFrame ConeSurface::frame(int arc_index) const {
  if (arc_index < static_cast<int>(frames_.size())) return frames_[arc_index];
  const Arc a = family_.arc_at(arc_index);
  return {snap_trig(std::cos(a.center)), snap_trig(std::sin(a.center)),
          checked_cot(a.half_angle), a.half_angle, a.center};
}

Vec2 ConeSurface::to_frame(const ArcFrame& f, Vec2 v) const {
  return {v.x * f.cos_c + v.y * f.sin_c, -v.x * f.sin_c + v.y * f.cos_c};
}

Vec2 ConeSurface::from_frame(const ArcFrame& f, Vec2 w) const {
  return {w.x * f.cos_c - w.y * f.sin_c, w.x * f.sin_c + w.y * f.cos_c};
}

double ConeSurface::evaluate(Vec2 v) const {
  if (v.x == 0.0 && v.y == 0.0) return 0.0;
  const SectorLocation loc = family_.locate(v);
  if (loc.kind != SectorLocation::Kind::InsideI) return 0.0;
  const ArcFrame f = frame(loc.index);
  return u_alpha_interior(f.cot_alpha, to_frame(f, v));
}

namespace {

RegionRef region_from_location(const SectorLocation& loc) {
  using K = SectorLocation::Kind;
  switch (loc.kind) {
    case K::InsideI:
      return {loc.side == HalfSide::Upper ? RegionRef::Kind::IUpper
                                          : RegionRef::Kind::ILower,
              loc.index};
    case K::InsideJ:
      return {RegionRef::Kind::JSector, loc.index};
    case K::InsideTailGap:
      return {RegionRef::Kind::TailGap, loc.index};
    case K::OnBisectrix:  // degenerate probe: attribute to the upper half
      return {RegionRef::Kind::IUpper, loc.index};
    case K::OnBoundaryRay:
      return {loc.endpoint == 1 ? RegionRef::Kind::IUpper : RegionRef::Kind::ILower,
              loc.index};
  }
  return {RegionRef::Kind::JSector, 0};
}

}  // namespace

MultiVec ConeSurface::gradient(Vec2 v) const {
  if (v.x == 0.0 && v.y == 0.0) {
    // Apex: |u| <= C |v|^2 makes u differentiable there with zero gradient.
    return {{{{RegionRef::Kind::JSector, -1}, {0.0, 0.0}}}};
  }
  const SectorLocation loc = family_.locate(v);
  using K = SectorLocation::Kind;
  switch (loc.kind) {
    case K::InsideI: {
      const ArcFrame f = frame(loc.index);
      return {{{region_from_location(loc),
                from_frame(f, grad_u_alpha_interior(f.cot_alpha, to_frame(f, v)))}}};
    }
    case K::InsideJ:
      return {{{{RegionRef::Kind::JSector, loc.index}, {0.0, 0.0}}}};
    case K::InsideTailGap:
      return {{{{RegionRef::Kind::TailGap, loc.index}, {0.0, 0.0}}}};
    case K::OnBisectrix: {
      // Both one-sided limits equal s * (unit vector at center + pi/2)
      // rotated into place, i.e. frame value (0, -s).
      const ArcFrame f = frame(loc.index);
      const Vec2 g = from_frame(f, {0.0, -norm(v)});
      return {{{{RegionRef::Kind::ILower, loc.index}, g},
               {{RegionRef::Kind::IUpper, loc.index}, g}}};
    }
    case K::OnBoundaryRay: {
      const ArcFrame f = frame(loc.index);
      const Arc a = family_.arc_at(loc.index);
      const double phi =
          a.center + (loc.endpoint == 1 ? a.half_angle : -a.half_angle);
      const Vec2 ours = from_frame(f, grad_u_alpha_interior(f.cot_alpha, to_frame(f, v)));
      // Identify the region on the far side of the ray by a nudged lookup.
      const double probe = loc.endpoint == 1 ? phi + kProbeOffset : phi - kProbeOffset;
      const RegionRef other =
          region_from_location(family_.locate(norm(v) * unit_from_angle(probe)));
      Vec2 other_val{0.0, 0.0};
      if (other.kind == RegionRef::Kind::ILower || other.kind == RegionRef::Kind::IUpper) {
        const ArcFrame g = frame(other.index);
        other_val = from_frame(g, grad_u_alpha_interior(g.cot_alpha, to_frame(g, v)));
      }
      const RegionRef mine{loc.endpoint == 1 ? RegionRef::Kind::IUpper
                                             : RegionRef::Kind::ILower,
                           loc.index};
      // Clockwise side listed first.
      if (loc.endpoint == 1) return {{{mine, ours}, {other, other_val}}};
      return {{{other, other_val}, {mine, ours}}};
    }
  }
  throw Error("gradient: unreachable");
}

MultiVec ConeSurface::characteristic_vector(Vec2 v) const {
  if (v.x == 0.0 && v.y == 0.0) {
    return {{{{RegionRef::Kind::JSector, -1}, {0.0, 0.0}}}};
  }
  const SectorLocation loc = family_.locate(v);
  if (loc.kind == SectorLocation::Kind::OnBisectrix) {
    // In the arc frame N = (-2 w.y, 2 |w.y| cot),  and w.y = 0 on the
    // bisectrix: exactly zero from both sides.
    return {{{{RegionRef::Kind::ILower, loc.index}, {0.0, 0.0}},
             {{RegionRef::Kind::IUpper, loc.index}, {0.0, 0.0}}}};
  }
  if (loc.kind == SectorLocation::Kind::InsideI) {
    // One rotation instead of grad + rot90(v): N_frame = (-2 w.y, 2|w.y| cot).
    const ArcFrame f = frame(loc.index);
    const Vec2 w = to_frame(f, v);
    return {{{region_from_location(loc),
              from_frame(f, {-2.0 * w.y, 2.0 * std::fabs(w.y) * f.cot_alpha})}}};
  }
  MultiVec g = gradient(v);
  for (auto& lim : g.limits) lim.value = lim.value + rot90(v);
  return g;
}

SingularSet ConeSurface::singular_set() const {
  if (!family_.finite()) {
    throw InfiniteFamily("singular_set: truncate the infinite family first");
  }
  SingularSet s;
  if (family_.empty()) {
    s.kind = SingularSet::Kind::OriginOnly;
    return s;
  }
  s.kind = SingularSet::Kind::OriginAndRays;
  for (const Arc& a : family_.arcs()) s.ray_angles.push_back(a.center);
  std::sort(s.ray_angles.begin(), s.ray_angles.end());
  return s;
}

SingularSetAudit ConeSurface::singular_set_audit(int samples,
                                                 unsigned long long seed) const {
  const SingularSet set = singular_set();  // throws InfiniteFamily for tails
  SingularSetAudit audit;
  audit.min_off_ray_scaled_norm = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.25, 4.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);

  for (double theta : set.ray_angles) {
    for (double r : {0.5, 1.0, 2.0, rad(rng), rad(rng)}) {
      const Vec2 v = r * unit_from_angle(theta);
      for (const auto& lim : characteristic_vector(v).limits) {
        audit.max_on_ray_norm = std::max(audit.max_on_ray_norm, norm(lim.value));
      }
    }
  }

  constexpr double kMargin = 0.05;  // radians away from every singular ray
  int kept = 0;
  while (kept < samples) {
    const double theta = ang(rng);
    bool clear = true;
    for (double c : set.ray_angles) {
      if (std::fabs(signed_angle_diff(theta, c)) < kMargin) clear = false;
    }
    if (!clear) continue;
    ++kept;
    const Vec2 v = rad(rng) * unit_from_angle(theta);
    const double scaled = norm(characteristic_vector(v).representative()) / norm(v);
    audit.min_off_ray_scaled_norm = std::min(audit.min_off_ray_scaled_norm, scaled);
  }
  return audit;
}

PlanarCurve ConeSurface::characteristic_ray(Vec2 v, double extend) const {
  if (v.x == 0.0 && v.y == 0.0) {
    throw SingularPoint("characteristic_ray: the apex is singular");
  }
  const SectorLocation loc = family_.locate(v);
  using K = SectorLocation::Kind;
  if (loc.kind == K::OnBisectrix) {
    throw SingularPoint("characteristic_ray: bisectrix rays are singular");
  }

  Vec2 foot{0.0, 0.0};
  if (loc.kind == K::InsideI) {
    const ArcFrame f = frame(loc.index);
    const Vec2 w = to_frame(f, v);
    // Foot of the ruling on the bisectrix: x - |y| cot(alpha).
    foot = from_frame(f, {w.x - std::fabs(w.y) * f.cot_alpha, 0.0});
  }
  // Over gaps and on boundary rays the ruling through v is the radial line
  // (the sector-edge ruling has its foot at the apex), so foot stays 0.

  PlanarCurve ray;
  ray.vertices.push_back(foot);
  ray.vertices.push_back(v);
  if (extend > 1.0) {
    ray.vertices.push_back(foot + extend * (v - foot));
  }
  return ray;
}

C1Report ConeSurface::is_c1() const {
  C1Report rep;
  const bool analytic =
      family_.finite() && (family_.empty() || family_.is_covering());

  // Interface angles to probe: every arc endpoint and bisectrix; for
  // infinite families the finite prefix plus the first tail arcs.
  std::vector<double> angles;
  const int n = static_cast<int>(family_.prefix_size());
  const int total = n + (family_.has_tail() ? 8 : 0);
  for (int i = 0; i < total; ++i) {
    const Arc a = family_.arc_at(i);
    angles.push_back(normalize_angle(a.center - a.half_angle));
    angles.push_back(a.center);
    angles.push_back(normalize_angle(a.center + a.half_angle));
  }

  for (double phi : angles) {
    for (double s : {0.5, 1.0, 2.0}) {
      const MultiVec g = gradient(s * unit_from_angle(phi));
      if (g.limits.size() < 2) continue;
      const Vec2 jump = g.limits[1].value - g.limits[0].value;
      const double scaled = norm(jump) / s;  // jumps scale with |v|
      if (scaled > rep.max_interface_jump) {
        rep.max_interface_jump = scaled;
        rep.witness_angle = phi;
        rep.witness_jump = (1.0 / s) * jump;
      }
    }
  }

  rep.c1 = analytic && rep.max_interface_jump <= 1e-10;
  if (rep.c1) {
    rep.witness_angle.reset();
    rep.witness_jump = {0.0, 0.0};
  }
  return rep;
}

OscillationReport ConeSurface::oscillation_probe(double radius, int probe_arcs,
                                                 int samples_per_arc) const {
  const TailRule& tr = family_.tail();  // throws NoTail
  (void)tr;
  if (!(radius > 0.0)) throw std::invalid_argument("oscillation_probe: radius > 0");

  OscillationReport rep;
  rep.radius = radius;
  rep.grad_bound = std::sqrt(2.0) * radius;

  const int n = static_cast<int>(family_.prefix_size());
  for (int k = 0; k < probe_arcs; ++k) {
    const Arc a = family_.tail_arc(k);
    if (a.half_angle < 1e-9) break;  // below angular resolution
    const ArcFrame f = frame(n + k);

    OscillationReport::ArcProbe probe;
    probe.tail_index = k;
    probe.half_angle = a.half_angle;
    probe.min_transverse = std::numeric_limits<double>::infinity();
    probe.max_transverse = -std::numeric_limits<double>::infinity();
    probe.u_bound = radius * radius * std::tan(a.half_angle);

    const double span = a.half_angle * (1.0 - 1e-6);  // stay strictly inside
    for (int j = 0; j < samples_per_arc; ++j) {
      const double beta = -span + 2.0 * span * j / (samples_per_arc - 1);
      const Vec2 w{radius * std::cos(beta), radius * std::sin(beta)};
      // Derivative transverse to the bisectrix, in the arc's own frame.
      const Vec2 g = grad_u_alpha_interior(f.cot_alpha, w);
      probe.min_transverse = std::min(probe.min_transverse, g.y);
      probe.max_transverse = std::max(probe.max_transverse, g.y);
      probe.sup_grad_norm = std::max(probe.sup_grad_norm, norm(g));
      probe.max_abs_u =
          std::max(probe.max_abs_u, std::fabs(u_alpha_interior(f.cot_alpha, w)));
    }
    probe.amplitude_normalized =
        (probe.max_transverse - probe.min_transverse) / radius;
    rep.arcs.push_back(probe);
  }

  rep.amplitude_persists =
      !rep.arcs.empty() &&
      std::all_of(rep.arcs.begin(), rep.arcs.end(),
                  [](const auto& p) { return p.amplitude_normalized >= 1.0; });
  rep.grad_bounded =
      std::all_of(rep.arcs.begin(), rep.arcs.end(), [&](const auto& p) {
        return p.sup_grad_norm <= rep.grad_bound + 1e-12;
      });
  return rep;
}

std::vector<InterfaceRay> interface_rays(const ArcFamily& family) {
  if (!family.finite()) {
    throw InfiniteFamily("interface_rays: truncate the infinite family first");
  }
  struct Seg {
    double start;
    RegionRef ref;
  };
  std::vector<Seg> segs;
  for (int i = 0; i < static_cast<int>(family.arcs().size()); ++i) {
    const Arc& a = family.arcs()[i];
    segs.push_back({normalize_angle(a.center - a.half_angle),
                    {RegionRef::Kind::ILower, i}});
    segs.push_back({a.center, {RegionRef::Kind::IUpper, i}});
  }
  for (int j = 0; j < static_cast<int>(family.complementary().size()); ++j) {
    segs.push_back({family.complementary()[j].start, {RegionRef::Kind::JSector, j}});
  }
  std::vector<InterfaceRay> rays;
  if (segs.size() < 2) return rays;  // a single region has no interfaces

  std::sort(segs.begin(), segs.end(),
            [](const Seg& a, const Seg& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Seg& cur = segs[i];
    const Seg& nxt = segs[(i + 1) % segs.size()];
    const bool bisectrix = cur.ref.kind == RegionRef::Kind::ILower &&
                           nxt.ref.kind == RegionRef::Kind::IUpper &&
                           cur.ref.index == nxt.ref.index;
    rays.push_back({bisectrix ? InterfaceRay::Kind::Bisectrix
                              : InterfaceRay::Kind::ArcEndpoint,
                    nxt.start, cur.ref, nxt.ref});
  }
  std::sort(rays.begin(), rays.end(),
            [](const InterfaceRay& a, const InterfaceRay& b) { return a.angle < b.angle; });
  return rays;
}

SurfaceClassification classify(const ClassifyInput& input) {
  SurfaceClassification out;
  if (const auto* vp = std::get_if<VerticalPlaneSpec>(&input)) {
    out.kind = SurfaceClassification::Kind::VerticalPlane;
    out.normal_angle = normalize_angle(vp->normal_angle);
    out.singular_set.kind = SingularSet::Kind::Empty;
    return out;
  }
  if (std::holds_alternative<HorizontalPlaneSpec>(input)) {
    out.kind = SurfaceClassification::Kind::HorizontalPlane;
    out.singular_set.kind = SingularSet::Kind::OriginOnly;
    return out;
  }
  const ConeSurface& cone = std::get<ConeSurface>(input);
  const C1Report rep = cone.is_c1();
  if (!rep.c1) {
    throw NotC1("classify: the cone is not C^1 (family not finite-covering)");
  }
  if (cone.family().empty()) {
    out.kind = SurfaceClassification::Kind::HorizontalPlane;
    out.singular_set.kind = SingularSet::Kind::OriginOnly;
    return out;
  }
  out.kind = SurfaceClassification::Kind::ArcCone;
  out.singular_set = cone.singular_set();
  return out;
}

}  // namespace hcone
