#include "hcone/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "hcone/errors.hpp"

namespace hcone {

namespace {

// Subsampling factors.  Cells cut by the domain boundary (or containing
// the apex, where the density has a conical kink) use the fine factor;
// cells straddling a crease ray or a bump-support circle, where the
// integrand is continuous but kinked, use the coarse one.
constexpr int kBoundarySub = 16;
constexpr int kCreaseSub = 4;

struct CellGrid {
  double bx0{0.0}, by0{0.0};
  double hx{0.0}, hy{0.0};
  int n{0};
};

CellGrid make_grid(const Domain2D& dom) {
  double bx0, bx1, by0, by1;
  dom.bounding_box(bx0, bx1, by0, by1);
  CellGrid g;
  g.bx0 = bx0;
  g.by0 = by0;
  g.n = dom.n;
  g.hx = (bx1 - bx0) / dom.n;
  g.hy = (by1 - by0) / dom.n;
  return g;
}

// Squared distance from p to the nearest / farthest point of the box.
double box_near_sq(Vec2 p, double x0, double x1, double y0, double y1) {
  const double dx = std::max({x0 - p.x, p.x - x1, 0.0});
  const double dy = std::max({y0 - p.y, p.y - y1, 0.0});
  return dx * dx + dy * dy;
}

double box_far_sq(Vec2 p, double x0, double x1, double y0, double y1) {
  const double dx = std::max(p.x - x0, x1 - p.x);
  const double dy = std::max(p.y - y0, y1 - p.y);
  return dx * dx + dy * dy;
}

struct SupportCircle {
  Vec2 center;
  double radius{0.0};
};

// Midpoint-rule contribution of one grid cell, subsampling cells where the
// integrand is kinked (domain boundary, apex, crease rays, an optional
// refinement circle).  Every kernel funnels through here so the serial and
// parallel paths perform identical arithmetic.
template <class F>
double cell_sum(const CellGrid& g, const Domain2D& dom,
                const std::vector<Vec2>& crease_dirs,
                const SupportCircle* refine, int ix, int iy, F&& f) {
  const double x0 = g.bx0 + ix * g.hx;
  const double x1 = x0 + g.hx;
  const double y0 = g.by0 + iy * g.hy;
  const double y1 = y0 + g.hy;

  bool fully_inside = true;
  if (dom.shape == Domain2D::Shape::Disk) {
    const double r2 = dom.radius * dom.radius;
    if (box_near_sq(dom.center, x0, x1, y0, y1) >= r2) return 0.0;
    fully_inside = box_far_sq(dom.center, x0, x1, y0, y1) <= r2;
  }

  int sub = 1;
  if (!fully_inside) sub = kBoundarySub;
  if (x0 <= 0.0 && 0.0 <= x1 && y0 <= 0.0 && 0.0 <= y1) {
    sub = std::max(sub, kBoundarySub);
  }
  if (sub < kCreaseSub) {
    for (const Vec2& u : crease_dirs) {
      if (ray_from_origin_hits_box(u, x0, x1, y0, y1)) {
        sub = std::max(sub, kCreaseSub);
        break;
      }
    }
  }
  if (refine != nullptr && sub < kBoundarySub) {
    const double r2 = refine->radius * refine->radius;
    const double near2 = box_near_sq(refine->center, x0, x1, y0, y1);
    const double far2 = box_far_sq(refine->center, x0, x1, y0, y1);
    if (near2 < r2 && r2 < far2) sub = std::max(sub, kCreaseSub);
  }

  if (sub == 1) {
    const Vec2 p{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    return f(p) * g.hx * g.hy;
  }

  const double sx = g.hx / sub;
  const double sy = g.hy / sub;
  const double w = sx * sy;
  double acc = 0.0;
  for (int jy = 0; jy < sub; ++jy) {
    const double py = y0 + (jy + 0.5) * sy;
    for (int jx = 0; jx < sub; ++jx) {
      const Vec2 p{x0 + (jx + 0.5) * sx, py};
      if (!dom.contains(p)) continue;
      acc += f(p) * w;
    }
  }
  return acc;
}

std::vector<Vec2> crease_directions(const GraphField& u) {
  std::vector<Vec2> dirs;
  dirs.reserve(u.crease_angles.size());
  for (double a : u.crease_angles) dirs.push_back(unit_from_angle(a));
  return dirs;
}

// Both quadrature kernels accumulate each row into its own partial sum and
// add rows in index order, so their results agree bitwise.
template <class F>
double integrate_rows_serial(const CellGrid& g, const Domain2D& dom,
                             const std::vector<Vec2>& crease_dirs, F&& f) {
  double total = 0.0;
  for (int iy = 0; iy < g.n; ++iy) {
    double row = 0.0;
    for (int ix = 0; ix < g.n; ++ix) {
      row += cell_sum(g, dom, crease_dirs, nullptr, ix, iy, f);
    }
    total += row;
  }
  return total;
}

template <class F>
double integrate_rows_parallel(const CellGrid& g, const Domain2D& dom,
                               const std::vector<Vec2>& crease_dirs, F&& f) {
  std::vector<double> row_sums(static_cast<std::size_t>(g.n), 0.0);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < g.n; ++iy) {
    double row = 0.0;
    for (int ix = 0; ix < g.n; ++ix) {
      row += cell_sum(g, dom, crease_dirs, nullptr, ix, iy, f);
    }
    row_sums[static_cast<std::size_t>(iy)] = row;
  }
  double total = 0.0;
  for (double r : row_sums) total += r;
  return total;
}

}  // namespace

Domain2D Domain2D::disk(Vec2 center, double radius, int n) {
  if (n < 16) throw std::invalid_argument("grid resolution must be >= 16");
  if (!(radius > 0.0)) {
    throw std::invalid_argument("disk radius must be positive");
  }
  Domain2D d;
  d.shape = Shape::Disk;
  d.center = center;
  d.radius = radius;
  d.x0 = center.x - radius;
  d.x1 = center.x + radius;
  d.y0 = center.y - radius;
  d.y1 = center.y + radius;
  d.n = n;
  return d;
}

Domain2D Domain2D::rectangle(double x0, double x1, double y0, double y1,
                             int n) {
  if (n < 16) throw std::invalid_argument("grid resolution must be >= 16");
  if (!(x0 < x1) || !(y0 < y1)) {
    throw std::invalid_argument("rectangle must have positive measure");
  }
  Domain2D d;
  d.shape = Shape::Rectangle;
  d.x0 = x0;
  d.x1 = x1;
  d.y0 = y0;
  d.y1 = y1;
  d.center = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  d.radius = 0.0;
  d.n = n;
  return d;
}

bool Domain2D::contains(Vec2 v) const {
  if (shape == Shape::Disk) {
    const Vec2 d = v - center;
    return dot(d, d) <= radius * radius;
  }
  return x0 <= v.x && v.x <= x1 && y0 <= v.y && v.y <= y1;
}

void Domain2D::bounding_box(double& bx0, double& bx1, double& by0,
                            double& by1) const {
  bx0 = x0;
  bx1 = x1;
  by0 = y0;
  by1 = y1;
}

double Domain2D::bounding_radius() const {
  if (shape == Shape::Disk) return norm(center) + radius;
  double best = 0.0;
  for (double cx : {x0, x1}) {
    for (double cy : {y0, y1}) {
      best = std::max(best, std::hypot(cx, cy));
    }
  }
  return best;
}

double Domain2D::scale() const {
  if (shape == Shape::Disk) return radius;
  return 0.5 * std::min(x1 - x0, y1 - y0);
}

GraphField plane_graph() {
  GraphField g;
  g.value = [](Vec2) { return 0.0; };
  g.grad = [](Vec2) { return Vec2{0.0, 0.0}; };
  return g;
}

GraphField graph_of(const ConeSurface& cone) {
  auto shared = std::make_shared<const ConeSurface>(cone);
  GraphField g;
  g.value = [shared](Vec2 v) { return shared->evaluate(v); };
  g.grad = [shared](Vec2 v) { return shared->gradient(v).representative(); };

  const ArcFamily& fam = shared->family();
  auto add_arc = [&g](const Arc& a) {
    g.crease_angles.push_back(normalize_angle(a.center - a.half_angle));
    g.crease_angles.push_back(normalize_angle(a.center));
    g.crease_angles.push_back(normalize_angle(a.center + a.half_angle));
  };
  if (fam.finite()) {
    for (const InterfaceRay& ray : interface_rays(fam)) {
      g.crease_angles.push_back(ray.angle);
    }
  } else {
    // Quadrature refinement only needs the rays wide enough to matter at
    // grid scale; evaluation itself is exact on every tail arc.
    for (const Arc& a : fam.arcs()) add_arc(a);
    for (int k = 0; k < 12; ++k) add_arc(fam.tail_arc(k));
    g.crease_angles.push_back(normalize_angle(fam.tail().accumulate_at));
  }
  return g;
}

double perimeter_density(const GraphField& u, Vec2 v) {
  const Vec2 g = u.grad(v);
  return std::hypot(g.x - v.y, g.y + v.x);
}

double perimeter_of_graph_serial(const GraphField& u, const Domain2D& dom) {
  const CellGrid g = make_grid(dom);
  const std::vector<Vec2> dirs = crease_directions(u);
  auto f = [&u](Vec2 p) { return perimeter_density(u, p); };
  return integrate_rows_serial(g, dom, dirs, f);
}

double perimeter_of_graph(const GraphField& u, const Domain2D& dom) {
  const CellGrid g = make_grid(dom);
  const std::vector<Vec2> dirs = crease_directions(u);
  auto f = [&u](Vec2 p) { return perimeter_density(u, p); };
  return integrate_rows_parallel(g, dom, dirs, f);
}

double perturbed_perimeter_delta(const GraphField& u, const Domain2D& dom,
                                 const Bump& bump, double eps) {
  const CellGrid g = make_grid(dom);
  const std::vector<Vec2> dirs = crease_directions(u);
  const SupportCircle support{bump.center, bump.radius};

  // Cell-index window covering the bump support.
  auto clampi = [&g](int i) { return std::clamp(i, 0, g.n - 1); };
  const int ix0 = clampi(static_cast<int>(
      std::floor((bump.center.x - bump.radius - g.bx0) / g.hx)));
  const int ix1 = clampi(static_cast<int>(
      std::floor((bump.center.x + bump.radius - g.bx0) / g.hx)));
  const int iy0 = clampi(static_cast<int>(
      std::floor((bump.center.y - bump.radius - g.by0) / g.hy)));
  const int iy1 = clampi(static_cast<int>(
      std::floor((bump.center.y + bump.radius - g.by0) / g.hy)));

  auto fdiff = [&u, &bump, eps](Vec2 p) {
    const Vec2 gb = u.grad(p);
    const Vec2 gp = gb + eps * bump.grad(p);
    const double base = std::hypot(gb.x - p.y, gb.y + p.x);
    const double pert = std::hypot(gp.x - p.y, gp.y + p.x);
    return pert - base;
  };

  const double r2 = bump.radius * bump.radius;
  double total = 0.0;
  for (int iy = iy0; iy <= iy1; ++iy) {
    double row = 0.0;
    for (int ix = ix0; ix <= ix1; ++ix) {
      const double x0 = g.bx0 + ix * g.hx;
      const double y0 = g.by0 + iy * g.hy;
      if (box_near_sq(bump.center, x0, x0 + g.hx, y0, y0 + g.hy) >= r2) {
        continue;  // cell misses the support: integrand is identically 0
      }
      row += cell_sum(g, dom, dirs, &support, ix, iy, fdiff);
    }
    total += row;
  }
  return total;
}

namespace {

Bump random_bump(std::mt19937_64& rng, const Domain2D& dom) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double s = dom.scale();
  const double lo = std::log(0.05 * s);
  const double hi = std::log(0.5 * s);
  Bump b;
  b.radius = std::exp(lo + (hi - lo) * unif(rng));
  if (dom.shape == Domain2D::Shape::Disk) {
    const double rr = dom.radius - b.radius;
    for (;;) {
      const Vec2 c{rr * (2.0 * unif(rng) - 1.0), rr * (2.0 * unif(rng) - 1.0)};
      if (dot(c, c) <= rr * rr) {
        b.center = dom.center + c;
        break;
      }
    }
  } else {
    b.center.x = dom.x0 + b.radius + (dom.x1 - dom.x0 - 2.0 * b.radius) * unif(rng);
    b.center.y = dom.y0 + b.radius + (dom.y1 - dom.y0 - 2.0 * b.radius) * unif(rng);
  }
  b.amplitude = unif(rng) - 0.5;
  return b;
}

}  // namespace

PerturbationReport perturbation_test(const GraphField& u, const Domain2D& dom,
                                     int trials,
                                     const std::vector<double>& eps_grid,
                                     unsigned long long seed,
                                     int calibration_trials) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (eps_grid.empty()) throw std::invalid_argument("eps grid is empty");
  if (calibration_trials < 1) {
    throw std::invalid_argument("need at least one calibration trial");
  }

  PerturbationReport report;

  // Calibrate the accept threshold on the flat plane, which is minimal:
  // any negative delta it shows over this domain is pure quadrature noise.
  {
    const GraphField plane = plane_graph();
    std::mt19937_64 crng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Bump> bumps;
    bumps.reserve(static_cast<std::size_t>(calibration_trials));
    for (int i = 0; i < calibration_trials; ++i) {
      bumps.push_back(random_bump(crng, dom));
    }
    const std::size_t jobs = bumps.size() * eps_grid.size();
    std::vector<double> deltas(jobs, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
      const std::size_t bi = static_cast<std::size_t>(j) / eps_grid.size();
      const std::size_t ei = static_cast<std::size_t>(j) % eps_grid.size();
      deltas[static_cast<std::size_t>(j)] =
          perturbed_perimeter_delta(plane, dom, bumps[bi], eps_grid[ei]);
    }
    double worst = 0.0;
    for (double d : deltas) worst = std::min(worst, d);
    report.plane_noise = (worst < 0.0) ? -worst : 0.0;
  }
  report.tol = std::max(1e-6, 2.0 * report.plane_noise);

  std::mt19937_64 rng(seed);
  std::vector<Bump> bumps;
  bumps.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) bumps.push_back(random_bump(rng, dom));

  const std::size_t jobs =
      static_cast<std::size_t>(trials) * eps_grid.size();
  report.trials.resize(jobs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    const std::size_t bi = static_cast<std::size_t>(j) / eps_grid.size();
    const std::size_t ei = static_cast<std::size_t>(j) % eps_grid.size();
    PerturbationTrial& t = report.trials[static_cast<std::size_t>(j)];
    t.bump = bumps[bi];
    t.eps = eps_grid[ei];
    t.delta = perturbed_perimeter_delta(u, dom, t.bump, t.eps);
  }

  report.min_delta = std::numeric_limits<double>::infinity();
  for (const PerturbationTrial& t : report.trials) {
    if (t.delta < report.min_delta) {
      report.min_delta = t.delta;
      report.worst = t;
    }
  }
  report.pass = report.min_delta >= -report.tol;
  return report;
}

namespace {

// Largest r >= 0 with r * unit(theta) inside the domain.
double max_radius_along(const Domain2D& dom, double theta) {
  const Vec2 u = unit_from_angle(theta);
  if (dom.shape == Domain2D::Shape::Disk) {
    const double uc = dot(u, dom.center);
    const double disc =
        uc * uc + dom.radius * dom.radius - dot(dom.center, dom.center);
    if (disc < 0.0) return 0.0;
    return std::max(0.0, uc + std::sqrt(disc));
  }
  double best = std::numeric_limits<double>::infinity();
  auto cut = [&best](double comp, double lo, double hi) {
    if (comp > 1e-300) {
      best = std::min(best, hi / comp);
    } else if (comp < -1e-300) {
      best = std::min(best, lo / comp);
    }
  };
  cut(u.x, dom.x0, dom.x1);
  cut(u.y, dom.y0, dom.y1);
  if (!std::isfinite(best) || best < 0.0) return 0.0;
  return best;
}

}  // namespace

TruncationReport truncation_convergence(const ArcFamily& family,
                                        const Domain2D& dom,
                                        std::vector<int> ks, int t_layers) {
  family.tail();  // throws NoTail when the family is finite
  if (ks.size() < 2) {
    throw std::invalid_argument("need at least two truncation sizes");
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1 || (i > 0 && ks[i] <= ks[i - 1])) {
      throw std::invalid_argument(
          "truncation sizes must be positive and strictly increasing");
    }
  }
  if (t_layers < 2) throw std::invalid_argument("need at least two t layers");

  TruncationReport report;
  const double bound_radius = dom.bounding_radius();
  const double slab = bound_radius * bound_radius;
  report.slab_halfheight = slab;

  std::vector<ConeSurface> cones;
  cones.reserve(ks.size());
  for (int k : ks) cones.emplace_back(family.truncated(k));

  const CellGrid g = make_grid(dom);
  const double ht = 2.0 * slab / t_layers;
  // Number of voxel-layer centers below height z inside the slab.
  auto layers_below = [slab, ht, t_layers](double z) {
    const double zc = std::clamp(z, -slab, slab);
    const double raw = std::ceil((zc + slab) / ht - 0.5);
    return std::clamp(static_cast<int>(raw), 0, t_layers);
  };

  bool sup_ok = true;
  bool monotone = true;
  double prev_sup = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < ks.size(); ++s) {
    const ConeSurface& a = cones[s];
    const ConeSurface& b = cones[s + 1];
    TruncationStep step;
    step.k_from = ks[s];
    step.k_to = ks[s + 1];
    const Arc first_added = family.tail_arc(ks[s]);
    step.tail_bound =
        bound_radius * bound_radius * std::tan(first_added.half_angle);

    double sup = 0.0;
    double l1 = 0.0;
    for (int iy = 0; iy < g.n; ++iy) {
      const double py = g.by0 + (iy + 0.5) * g.hy;
      for (int ix = 0; ix < g.n; ++ix) {
        const Vec2 p{g.bx0 + (ix + 0.5) * g.hx, py};
        if (!dom.contains(p)) continue;
        const double za = a.evaluate(p);
        const double zb = b.evaluate(p);
        sup = std::max(sup, std::fabs(za - zb));
        l1 += std::abs(layers_below(za) - layers_below(zb)) * ht * g.hx * g.hy;
      }
    }
    // The difference lives exactly on the arcs added by this step; sample
    // those sectors directly so the sup does not slip between grid cells.
    for (int k = ks[s]; k < ks[s + 1]; ++k) {
      const Arc arc = family.tail_arc(k);
      constexpr int kAngular = 64;
      for (int j = 0; j <= kAngular; ++j) {
        const double beta =
            arc.half_angle * (1.0 - 1e-9) * (2.0 * j / kAngular - 1.0);
        const double theta = arc.center + beta;
        const double rmax = max_radius_along(dom, theta) * (1.0 - 1e-12);
        for (double frac : {1.0, 0.75, 0.5}) {
          const Vec2 p = (rmax * frac) * unit_from_angle(theta);
          if (!dom.contains(p)) continue;
          sup = std::max(sup, std::fabs(a.evaluate(p) - b.evaluate(p)));
        }
      }
    }

    step.sup_diff = sup;
    step.l1_slab_diff = l1;
    if (sup > step.tail_bound * (1.0 + 1e-9) + 1e-15) sup_ok = false;
    if (sup >= prev_sup) monotone = false;
    prev_sup = sup;
    report.steps.push_back(step);
  }
  report.pass = sup_ok && monotone;
  return report;
}

}  // namespace hcone
