#include "hcone/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "hcone/bump.hpp"

namespace hcone {

namespace {

Vec2 snapped_unit(double angle) {
  return {snap_trig(std::cos(angle)), snap_trig(std::sin(angle))};
}

// Fixed total order on regions used for deterministic on-ray evaluation.
std::tuple<int, int> region_key(RegionRef r) {
  return {static_cast<int>(r.kind), r.index};
}

RegionRef lesser_side(RegionRef a, RegionRef b) {
  return region_key(a) <= region_key(b) ? a : b;
}

}  // namespace

Vec2 RegionField::value(Vec2 v) const {
  switch (kind) {
    case Kind::Radial:
      return rot90(v) * (1.0 / norm(v));
    case Kind::Constant:
      return constant;
    case Kind::Custom:
      return custom(v);
  }
  throw Error("RegionField::value: unreachable");
}

int SectorDecomposition::region_index(RegionRef ref) const {
  const int gaps = static_cast<int>(family.complementary().size());
  switch (ref.kind) {
    case RegionRef::Kind::JSector:
      return ref.index;
    case RegionRef::Kind::ILower:
      return gaps + 2 * ref.index;
    case RegionRef::Kind::IUpper:
      return gaps + 2 * ref.index + 1;
    case RegionRef::Kind::TailGap:
      break;
  }
  throw Error("region_index: region is not part of a finite decomposition");
}

RegionRef SectorDecomposition::region_at(Vec2 v) const {
  const double theta = std::atan2(v.y, v.x);
  for (const DecoratedInterface& iface : interfaces) {
    if (std::fabs(signed_angle_diff(theta, iface.ray.angle)) <= kAngleTol) {
      return lesser_side(iface.ray.cw_side, iface.ray.ccw_side);
    }
  }
  const SectorLocation loc = family.locate(v);  // throws OriginQuery at 0
  switch (loc.kind) {
    case SectorLocation::Kind::InsideJ:
      return {RegionRef::Kind::JSector, loc.index};
    case SectorLocation::Kind::InsideI:
      return {loc.side == HalfSide::Upper ? RegionRef::Kind::IUpper
                                          : RegionRef::Kind::ILower,
              loc.index};
    default:
      // locate saw a ray the interface scan missed; should not happen for a
      // decomposition built from the same family.
      throw Error("region_at: inconsistent interface data");
  }
}

SectorDecomposition build_decomposition(const ArcFamily& family) {
  const auto rays = interface_rays(family);  // throws InfiniteFamily
  SectorDecomposition d{family, {}, {}};
  for (int j = 0; j < static_cast<int>(family.complementary().size()); ++j) {
    d.regions.push_back({RegionRef::Kind::JSector, j});
  }
  for (int i = 0; i < static_cast<int>(family.arcs().size()); ++i) {
    d.regions.push_back({RegionRef::Kind::ILower, i});
    d.regions.push_back({RegionRef::Kind::IUpper, i});
  }
  for (const InterfaceRay& ray : rays) {
    d.interfaces.push_back({ray, snapped_unit(ray.angle + kPi / 2.0)});
  }
  return d;
}

CalibrationField::CalibrationField(SectorDecomposition decomposition,
                                   std::vector<RegionField> region_fields)
    : decomp_(std::move(decomposition)), fields_(std::move(region_fields)) {
  if (fields_.size() != decomp_.regions.size()) {
    throw Error("CalibrationField: one field per region required");
  }
}

Vec2 CalibrationField::value(Vec2 v) const {
  return value_from(decomp_.region_at(v), v);
}

Vec2 CalibrationField::value_from(RegionRef region, Vec2 v) const {
  return fields_[decomp_.region_index(region)].value(v);
}

HVector CalibrationField::horizontal(const HPoint& p) const {
  const Vec2 w = value({p.x, p.y});
  return {w.x, w.y};
}

const RegionField& CalibrationField::region_field(RegionRef ref) const {
  return fields_[decomp_.region_index(ref)];
}

void CalibrationField::set_region_field(RegionRef ref, RegionField f) {
  fields_[decomp_.region_index(ref)] = std::move(f);
}

CalibrationField build_calibration(const ConeSurface& cone) {
  if (!cone.family().finite()) {
    throw InfiniteFamily("build_calibration: calibrate finite truncations instead");
  }
  SectorDecomposition decomp = build_decomposition(cone.family());
  std::vector<RegionField> fields(decomp.regions.size());
  for (const RegionRef& ref : decomp.regions) {
    RegionField& f = fields[decomp.region_index(ref)];
    if (ref.kind == RegionRef::Kind::JSector) {
      f.kind = RegionField::Kind::Radial;
    } else {
      const Arc a = cone.family().arcs()[ref.index];
      const double side = ref.kind == RegionRef::Kind::IUpper ? 1.0 : -1.0;
      f.kind = RegionField::Kind::Constant;
      f.constant = snapped_unit(a.center + side * a.half_angle + kPi / 2.0);
    }
  }
  return CalibrationField{std::move(decomp), std::move(fields)};
}

namespace {

// Open angular interval of one region, for interior sampling.
std::pair<double, double> region_interval(const SectorDecomposition& d,
                                          RegionRef ref) {
  if (ref.kind == RegionRef::Kind::JSector) {
    const CircularInterval& g = d.family.complementary()[ref.index];
    return {g.start, g.start + g.length};
  }
  const Arc a = d.family.arcs()[ref.index];
  if (ref.kind == RegionRef::Kind::ILower) return {a.center - a.half_angle, a.center};
  return {a.center, a.center + a.half_angle};
}

}  // namespace

DivergenceReport check_piecewise_divergence(const CalibrationField& field,
                                            int samples_per_region,
                                            unsigned long long seed) {
  DivergenceReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double h = report.fd_step;

  for (const RegionRef& ref : field.decomposition().regions) {
    RegionDivergenceCheck check;
    check.region = ref;
    check.closed_form_zero =
        field.region_field(ref).closed_form_divergence_free();

    const auto [lo, hi] = region_interval(field.decomposition(), ref);
    const double margin = std::min(0.05 * (hi - lo), 0.01);
    for (int s = 0; s < samples_per_region; ++s) {
      const double theta = lo + margin + (hi - lo - 2.0 * margin) * unif(rng);
      const double r = 0.5 + 2.5 * unif(rng);
      const Vec2 v = r * unit_from_angle(theta);
      const double div =
          (field.value_from(ref, {v.x + h, v.y}).x -
           field.value_from(ref, {v.x - h, v.y}).x) /
              (2.0 * h) +
          (field.value_from(ref, {v.x, v.y + h}).y -
           field.value_from(ref, {v.x, v.y - h}).y) /
              (2.0 * h);
      check.max_fd_abs = std::max(check.max_fd_abs, std::fabs(div));
    }
    report.max_fd_abs = std::max(report.max_fd_abs, check.max_fd_abs);
    report.regions.push_back(check);
  }
  report.pass = report.max_fd_abs <= report.tol;
  return report;
}

FluxReport check_interface_flux(const CalibrationField& field,
                                int samples_per_ray) {
  FluxReport report;
  for (const DecoratedInterface& iface : field.decomposition().interfaces) {
    InterfaceFluxCheck check;
    check.ray = iface.ray;
    const Vec2 n = iface.cw_outward_normal;
    for (int j = 0; j < samples_per_ray; ++j) {
      const double s = 0.05 + (4.0 - 0.05) * j / (samples_per_ray - 1);
      const Vec2 p = s * unit_from_angle(iface.ray.angle);
      const double outflow = dot(field.value_from(iface.ray.cw_side, p), n) -
                             dot(field.value_from(iface.ray.ccw_side, p), n);
      check.max_abs_flux_sum = std::max(check.max_abs_flux_sum, std::fabs(outflow));
    }
    report.max_abs_flux_sum =
        std::max(report.max_abs_flux_sum, check.max_abs_flux_sum);
    report.interfaces.push_back(check);
  }
  report.pass = report.max_abs_flux_sum <= report.tol;
  return report;
}

namespace {

using Poly = std::vector<Vec2>;

// Split a convex polygon by the line through the origin with direction u.
void split_by_line(const Poly& poly, Vec2 u, Poly& pos, Poly& neg) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double sa = cross(u, a);
    const double sb = cross(u, b);
    if (sa >= 0.0) pos.push_back(a);
    if (sa <= 0.0) neg.push_back(a);
    if ((sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0)) {
      const Vec2 q = a + (sa / (sa - sb)) * (b - a);
      pos.push_back(q);
      neg.push_back(q);
    }
  }
}

double signed_area(const Poly& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a += cross(p[i], p[(i + 1) % p.size()]);
  }
  return 0.5 * a;
}

Vec2 poly_centroid(const Poly& p, double area) {
  Vec2 c{0.0, 0.0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 a = p[i];
    const Vec2 b = p[(i + 1) % p.size()];
    const double w = cross(a, b);
    c = c + w * (a + b);
  }
  return (1.0 / (6.0 * area)) * c;
}

}  // namespace

DistributionalAudit distributional_divergence_audit(const CalibrationField& field,
                                                    int bumps, int grid_cells,
                                                    double extent,
                                                    unsigned long long seed) {
  DistributionalAudit audit;
  audit.grid_cells = grid_cells;
  audit.extent = extent;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cdist(-2.5, 2.5);
  std::uniform_real_distribution<double> rdist(0.5, 1.5);
  std::uniform_real_distribution<double> adist(-1.0, 1.0);

  const double h = 2.0 * extent / grid_cells;
  const auto& interfaces = field.decomposition().interfaces;

  for (int b = 0; b < bumps; ++b) {
    const Bump bump{{cdist(rng), cdist(rng)}, rdist(rng), adist(rng)};

    // Only rows/columns of cells meeting the support contribute.
    const auto cell_lo = [&](double coord) {
      return std::max(0, static_cast<int>(std::floor((coord + extent) / h)) - 1);
    };
    const auto cell_hi = [&](double coord) {
      return std::min(grid_cells - 1,
                      static_cast<int>(std::floor((coord + extent) / h)) + 1);
    };
    const int iy0 = cell_lo(bump.center.y - bump.radius);
    const int iy1 = cell_hi(bump.center.y + bump.radius);
    const int ix0 = cell_lo(bump.center.x - bump.radius);
    const int ix1 = cell_hi(bump.center.x + bump.radius);

    std::vector<double> row_sums(static_cast<std::size_t>(iy1 - iy0 + 1), 0.0);

    // One quadrature box: split it along every interface ray crossing it, so
    // each piece is integrated with the field of a single region.
    const auto integrate_box = [&](double x0, double x1, double y0, double y1) {
      std::vector<Poly> pieces{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
      for (const DecoratedInterface& iface : interfaces) {
        const Vec2 u = unit_from_angle(iface.ray.angle);
        if (!ray_from_origin_hits_box(u, x0, x1, y0, y1)) continue;
        std::vector<Poly> next;
        for (const Poly& piece : pieces) {
          Poly pos, neg;
          split_by_line(piece, u, pos, neg);
          if (pos.size() >= 3) next.push_back(std::move(pos));
          if (neg.size() >= 3) next.push_back(std::move(neg));
        }
        pieces = std::move(next);
      }
      double sum = 0.0;
      for (const Poly& piece : pieces) {
        const double area = signed_area(piece);
        if (std::fabs(area) < 1e-18) continue;
        const Vec2 c = poly_centroid(piece, area);
        sum += area * dot(bump.grad(c), field.value(c));
      }
      return sum;
    };

#pragma omp parallel for schedule(static)
    for (int iy = iy0; iy <= iy1; ++iy) {
      double row = 0.0;
      const double y0 = -extent + iy * h;
      const double y1 = y0 + h;
      for (int ix = ix0; ix <= ix1; ++ix) {
        const double x0 = -extent + ix * h;
        const double x1 = x0 + h;
        // Reject cells entirely outside the bump support.
        const double ox = std::max({bump.center.x - x1, 0.0, x0 - bump.center.x});
        const double oy = std::max({bump.center.y - y1, 0.0, y0 - bump.center.y});
        const double near2 = ox * ox + oy * oy;
        if (near2 >= bump.radius * bump.radius) continue;

        // Cells straddling the support edge see the integrand's curvature
        // kink: refine them 4x4 so the kink error stays well under tol.
        const double fx = std::max(std::fabs(bump.center.x - x0),
                                   std::fabs(bump.center.x - x1));
        const double fy = std::max(std::fabs(bump.center.y - y0),
                                   std::fabs(bump.center.y - y1));
        const bool straddles_edge = near2 < bump.radius * bump.radius &&
                                    fx * fx + fy * fy > bump.radius * bump.radius;
        if (straddles_edge) {
          const double hs = h / 4.0;
          for (int sy = 0; sy < 4; ++sy) {
            for (int sx = 0; sx < 4; ++sx) {
              row += integrate_box(x0 + sx * hs, x0 + (sx + 1) * hs,
                                   y0 + sy * hs, y0 + (sy + 1) * hs);
            }
          }
        } else {
          row += integrate_box(x0, x1, y0, y1);
        }
      }
      row_sums[static_cast<std::size_t>(iy - iy0)] = row;
    }

    // Ordered combination keeps the result independent of thread count.
    double integral = 0.0;
    for (double r : row_sums) integral += r;
    audit.residuals.push_back(integral);
    audit.max_abs_residual = std::max(audit.max_abs_residual, std::fabs(integral));
  }
  audit.pass = audit.max_abs_residual <= audit.tol;
  return audit;
}

MinimalityCertificate verify_minimality_certificate(const ConeSurface& cone,
                                                    int samples,
                                                    unsigned long long seed) {
  const CalibrationField field = build_calibration(cone);  // InfiniteFamily
  MinimalityCertificate cert;
  cert.divergence = check_piecewise_divergence(field);
  cert.flux = check_interface_flux(field);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> rad(0.1, 4.0);
  constexpr double kRayMargin = 1e-6;

  int kept = 0;
  while (kept < samples) {
    const double theta = ang(rng);
    bool clear = true;
    for (const DecoratedInterface& iface : field.decomposition().interfaces) {
      if (std::fabs(signed_angle_diff(theta, iface.ray.angle)) < kRayMargin) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    ++kept;
    const Vec2 v = rad(rng) * unit_from_angle(theta);

    const Vec2 V = field.value(v);
    cert.max_unit_norm_error =
        std::max(cert.max_unit_norm_error, std::fabs(norm(V) - 1.0));

    const MultiVec N = cone.characteristic_vector(v);
    const Vec2 n = N.representative();
    const Vec2 n_hat = (1.0 / norm(n)) * n;
    cert.max_normal_mismatch = std::max(cert.max_normal_mismatch, norm(V - n_hat));

    const PlanarCurve ray = cone.characteristic_ray(v);
    const Vec2 d = ray.vertices[1] - ray.vertices[0];
    cert.max_ruling_alignment =
        std::max(cert.max_ruling_alignment, std::fabs(dot(V, (1.0 / norm(d)) * d)));
  }

  cert.pass = cert.divergence.pass && cert.flux.pass &&
              cert.max_normal_mismatch <= cert.normal_tol &&
              cert.max_unit_norm_error <= 1e-14 &&
              cert.max_ruling_alignment <= 1e-12;
  return cert;
}

}  // namespace hcone
