// Acceptance gate: ten end-to-end checks of the library's core guarantees,
// each printed as a single PASS/FAIL line with its runtime.  The process
// exits nonzero if any criterion fails or overruns its time budget.
//
// Tolerances are pinned here, in code, so the gate cannot drift:
//   lifting identities ........... exact (bitwise)
//   closed-form vs FD gradient ... 1e-6 at step 1e-5
//   homogeneity .................. 1e-12 relative
//   C1 jump threshold ............ 1e-8
//   divergence FD audit .......... 1e-8, flux sums 1e-12, normal 1e-10
//   quadrature vs closed form .... 1e-3 at n = 512, order >= 1
//   saddle evaluation ............ exact up to 1e-15 |v|^2 rotation noise
//   characteristic vector on rays  1e-14

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hcone/arcs.hpp"
#include "hcone/calibrate.hpp"
#include "hcone/cone.hpp"
#include "hcone/geometry.hpp"
#include "hcone/hgroup.hpp"
#include "hcone/perimeter.hpp"

using namespace hcone;

namespace {

int g_failures = 0;

struct CheckFailure {
  std::string message;
};

void req(bool cond, const std::string& message) {
  if (!cond) throw CheckFailure{message};
}

template <class Body>
void criterion(int number, const char* label, double budget_seconds,
               Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    body();
  } catch (const CheckFailure& f) {
    failure = f.message;
  } catch (const std::exception& e) {
    failure = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (failure.empty() && budget_seconds > 0.0 && elapsed > budget_seconds) {
    std::ostringstream ss;
    ss << "time budget exceeded: " << elapsed << " s > " << budget_seconds
       << " s";
    failure = ss.str();
  }
  if (failure.empty()) {
    std::printf("PASS  %2d  %-58s [%7.3f s]\n", number, label, elapsed);
  } else {
    std::printf("FAIL  %2d  %-58s [%7.3f s]  %s\n", number, label, elapsed,
                failure.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- shared fixture families ---------------------------------------------

ArcFamily empty_family() { return ArcFamily::validate({}); }

ArcFamily half_circles() {
  return ArcFamily::validate({{0.0, kPi / 2.0}, {kPi, kPi / 2.0}});
}

ArcFamily one_arc() {
  const double deg = kPi / 180.0;
  return ArcFamily::validate({{165.0 * deg, 35.0 * deg}});
}

ArcFamily three_arcs() {
  const double deg = kPi / 180.0;
  return ArcFamily::validate({{90.0 * deg, 45.0 * deg},
                              {210.0 * deg, 22.5 * deg},
                              {330.0 * deg, 37.5 * deg}});
}

ArcFamily covering_three() {
  const double deg = kPi / 180.0;
  return ArcFamily::validate(
      {{0.0, 90.0 * deg}, {135.0 * deg, 45.0 * deg}, {225.0 * deg, 45.0 * deg}});
}

ArcFamily tail_family() {
  return ArcFamily::validate({{4.0, 0.4}}, TailRule{1.0, 2.0, 0.5, 0.3});
}

// k cut angles partitioning the circle into k arcs whose closures tile it.
ArcFamily random_covering_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_int_distribution<int> count(3, 8);
  for (;;) {
    const int k = count(rng);
    std::vector<double> cuts(k);
    for (double& c : cuts) c = angle(rng);
    std::sort(cuts.begin(), cuts.end());
    double min_len = kTwoPi + cuts.front() - cuts.back();
    for (int i = 0; i + 1 < k; ++i) min_len = std::min(min_len, cuts[i + 1] - cuts[i]);
    if (min_len < 0.05) continue;  // avoid degenerate slivers
    std::vector<Arc> arcs;
    for (int i = 0; i < k; ++i) {
      const double a = cuts[i];
      const double b = (i + 1 < k) ? cuts[i + 1] : cuts[0] + kTwoPi;
      arcs.push_back({normalize_angle(0.5 * (a + b)), 0.5 * (b - a)});
    }
    return ArcFamily::validate(arcs);
  }
}

// Alternating arc/gap intervals: k disjoint arcs with strictly positive gaps.
ArcFamily random_gapped_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_int_distribution<int> count(1, 4);
  for (;;) {
    const int k = count(rng);
    std::vector<double> cuts(2 * k);
    for (double& c : cuts) c = angle(rng);
    std::sort(cuts.begin(), cuts.end());
    double min_len = kTwoPi + cuts.front() - cuts.back();
    for (int i = 0; i + 1 < 2 * k; ++i) {
      min_len = std::min(min_len, cuts[i + 1] - cuts[i]);
    }
    if (min_len < 0.05) continue;
    std::vector<Arc> arcs;
    for (int i = 0; i < 2 * k; i += 2) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      arcs.push_back({normalize_angle(0.5 * (a + b)), 0.5 * (b - a)});
    }
    return ArcFamily::validate(arcs);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

int main() {
  std::printf("acceptance gate: %d OpenMP threads\n", omp_get_max_threads());

  // 1. Horizontal lifting: the lifted height of a random polyline from the
  //    origin equals -2 x its balayage area bitwise, and each segment's
  //    height increment is the exact cross term of its endpoints.
  criterion(1, "lift height equals -2 x swept area, segments horizontal", 1.0,
            [] {
              std::mt19937_64 rng(101);
              std::uniform_real_distribution<double> coord(-5.0, 5.0);
              std::uniform_int_distribution<int> count(2, 20);
              for (int trial = 0; trial < 1000; ++trial) {
                PlanarCurve gamma;
                gamma.vertices.push_back({0.0, 0.0});
                const int extra = count(rng) - 1;
                for (int i = 0; i < extra; ++i) {
                  gamma.vertices.push_back({coord(rng), coord(rng)});
                }
                const std::vector<HPoint> lift = lift_curve(gamma, 0.0);
                req(lift.back().t == -2.0 * balayage_area(gamma),
                    "final height != -2 x balayage area (trial " +
                        std::to_string(trial) + ")");
                for (std::size_t i = 0; i + 1 < gamma.vertices.size(); ++i) {
                  // Horizontality residual, accumulated the same way the
                  // lift itself steps: t_{i+1} = t_i + (exact cross term).
                  const double cross = segment_lift_increment(
                      gamma.vertices[i], gamma.vertices[i + 1]);
                  req(lift[i + 1].t == lift[i].t + cross,
                      "segment increment not horizontal");
                }
              }
            });

  // 2. The closed-form gradient of the single-arc profile matches central
  //    finite differences at random points away from the interface rays.
  criterion(2, "single-arc profile gradient matches finite differences", 5.0,
            [] {
              const double alphas[] = {kPi / 6.0, kPi / 4.0, kPi / 2.0,
                                       3.0 * kPi / 4.0};
              const double h = 1e-5;
              std::mt19937_64 rng(202);
              std::uniform_real_distribution<double> radius(0.2, 2.0);
              std::uniform_real_distribution<double> angle(-kPi, kPi);
              for (const double alpha : alphas) {
                int kept = 0;
                while (kept < 2500) {
                  const double th = angle(rng);
                  // Stay clear of the bisectrix (0) and boundaries (+-alpha).
                  if (std::abs(th) < 1e-2 ||
                      std::abs(std::abs(th) - alpha) < 1e-2) {
                    continue;
                  }
                  ++kept;
                  const Vec2 v = radius(rng) * unit_from_angle(th);
                  const MultiVec g = grad_u_alpha(alpha, v);
                  req(g.single_valued(), "gradient multi-valued off rays");
                  const double fx = (u_alpha(alpha, {v.x + h, v.y}) -
                                     u_alpha(alpha, {v.x - h, v.y})) /
                                    (2.0 * h);
                  const double fy = (u_alpha(alpha, {v.x, v.y + h}) -
                                     u_alpha(alpha, {v.x, v.y - h})) /
                                    (2.0 * h);
                  const Vec2 d = g.representative() - Vec2{fx, fy};
                  req(std::abs(d.x) < 1e-6 && std::abs(d.y) < 1e-6,
                      "gradient/FD mismatch " + fmt(norm(d)) + " at alpha " +
                          fmt(alpha));
                }
              }
            });

  // 3. The cone height is 2-homogeneous under the parabolic dilations and
  //    continuous across interface rays, the two-sided gap decaying
  //    linearly with the probe distance down to 1e-6.
  criterion(3, "cone is 2-homogeneous; interface gaps decay linearly", 10.0,
            [] {
              std::mt19937_64 rng(303);
              std::uniform_real_distribution<double> coord(-3.0, 3.0);
              std::uniform_real_distribution<double> lam(0.1, 10.0);
              const ArcFamily fams[] = {one_arc(), three_arcs(),
                                        covering_three(), half_circles()};
              for (const ArcFamily& fam : fams) {
                const ConeSurface cone(fam);
                for (int i = 0; i < 2500; ++i) {
                  const Vec2 v{coord(rng), coord(rng)};
                  const double l = lam(rng);
                  const double lhs = cone.evaluate(l * v);
                  const double rhs = l * l * cone.evaluate(v);
                  const double scale = std::max(std::abs(rhs), 1e-30);
                  req(std::abs(lhs - rhs) <= 1e-12 * scale,
                      "homogeneity violated: " + fmt(lhs) + " vs " + fmt(rhs));
                }
                for (const InterfaceRay& ray : interface_rays(fam)) {
                  const Vec2 p = unit_from_angle(ray.angle);
                  const Vec2 n = rot90(p);
                  double prev = -1.0;
                  for (const double h :
                       {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
                    const double gap = std::abs(cone.evaluate(p + h * n) -
                                                cone.evaluate(p - h * n));
                    req(gap <= 4.0 * h,
                        "interface gap " + fmt(gap) + " not linear at h " +
                            fmt(h));
                    if (prev >= 0.0) {
                      req(gap <= 0.2 * prev + 1e-15,
                          "interface gap not decaying linearly");
                    }
                    prev = gap;
                  }
                }
              }
            });

  // 4. Smoothness dichotomy: the analytic C1 verdict agrees with the
  //    numeric one-sided gradient probe on 50 random families, and the
  //    geometric-tail cone is non-C1 with persistent unit oscillation
  //    under a uniform gradient bound.
  criterion(4, "C1 verdict matches gradient probe on 50 random families",
            30.0, [] {
              std::mt19937_64 rng(404);
              for (int i = 0; i < 50; ++i) {
                const ArcFamily fam = (i % 2 == 0)
                                          ? random_covering_family(rng)
                                          : random_gapped_family(rng);
                const C1Report rep = ConeSurface(fam).is_c1();
                const bool numeric = rep.max_interface_jump <= 1e-8;
                req(rep.c1 == numeric,
                    "analytic/numeric C1 disagreement on family " +
                        std::to_string(i) + " (jump " +
                        fmt(rep.max_interface_jump) + ")");
              }
              const ConeSurface tail(tail_family());
              req(!tail.is_c1().c1, "tail cone claimed C1");
              const OscillationReport osc = tail.oscillation_probe(1.0);
              req(osc.amplitude_persists,
                  "tail oscillation amplitude fell below 1");
              req(osc.grad_bounded, "tail gradient exceeded its bound");
              for (const auto& probe : osc.arcs) {
                req(probe.max_abs_u <= probe.u_bound,
                    "height bound violated in tail arc");
              }
            });

  // 5. Calibration certificate on the flat plane, one-arc, two-half-circle,
  //    and three-arc cones: divergence-free regions (closed form + FD),
  //    flux continuity across interfaces, field equal to the graph normal.
  criterion(5, "calibration certificate holds on four reference cones", 10.0,
            [] {
              const ArcFamily fams[] = {empty_family(), one_arc(),
                                        half_circles(), three_arcs()};
              for (const ArcFamily& fam : fams) {
                const MinimalityCertificate cert =
                    verify_minimality_certificate(ConeSurface(fam));
                req(cert.pass, "certificate failed");
                for (const RegionDivergenceCheck& r :
                     cert.divergence.regions) {
                  req(r.closed_form_zero,
                      "region lacks closed-form zero divergence");
                }
                req(cert.divergence.max_fd_abs < 1e-8,
                    "FD divergence " + fmt(cert.divergence.max_fd_abs));
                req(cert.flux.max_abs_flux_sum < 1e-12,
                    "interface flux " + fmt(cert.flux.max_abs_flux_sum));
                req(cert.max_normal_mismatch < 1e-10,
                    "field/normal mismatch " + fmt(cert.max_normal_mismatch));
              }
            });

  // 6. Perimeter quadrature: flat plane over the unit disk -> 2 pi / 3
  //    within 1e-3 at n = 512 with empirical convergence order >= 1, and
  //    the saddle cone -> 8/3 within 1e-3.
  criterion(6, "perimeter matches closed forms with order >= 1", 60.0, [] {
    const GraphField plane = plane_graph();
    const double target = 2.0 * kPi / 3.0;
    std::vector<double> log_n, log_err;
    double err512 = -1.0;
    for (const int n : {64, 128, 256, 512, 1024}) {
      const double p =
          perimeter_of_graph(plane, Domain2D::disk({0.0, 0.0}, 1.0, n));
      const double err = std::abs(p - target);
      if (n == 512) err512 = err;
      log_n.push_back(std::log(static_cast<double>(n)));
      log_err.push_back(std::log(std::max(err, 1e-300)));
    }
    req(err512 < 1e-3, "plane perimeter off by " + fmt(err512));
    // Least-squares slope of log(err) against log(n).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(log_n.size());
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      sx += log_n[i];
      sy += log_err[i];
      sxx += log_n[i] * log_n[i];
      sxy += log_n[i] * log_err[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    req(-slope >= 1.0, "convergence order " + fmt(-slope) + " < 1");
    const double saddle = perimeter_of_graph(
        graph_of(ConeSurface(half_circles())),
        Domain2D::disk({0.0, 0.0}, 1.0, 512));
    req(std::abs(saddle - 8.0 / 3.0) < 1e-3,
        "saddle perimeter off by " + fmt(std::abs(saddle - 8.0 / 3.0)));
  });

  // 7. Perturbation minimality: 100 random bumps x eps in {+-0.2, +-0.1,
  //    +-0.05} never decrease the perimeter of the two cones beyond the
  //    plane-calibrated tolerance, while the non-minimal control u = x^2
  //    admits a decrease below -10 x tol.
  criterion(7, "random bump perturbations never beat the cones", 120.0, [] {
    const Domain2D dom = Domain2D::disk({0.0, 0.0}, 1.0, 256);
    const std::vector<double> eps = {0.2, -0.2, 0.1, -0.1, 0.05, -0.05};
    double tol = 0.0;
    for (const ArcFamily& fam : {half_circles(), three_arcs()}) {
      const PerturbationReport rep =
          perturbation_test(graph_of(ConeSurface(fam)), dom, 100, eps, 7);
      req(rep.pass, "perturbation decreased perimeter by " +
                        fmt(-rep.min_delta) + " > tol " + fmt(rep.tol));
      req(static_cast<int>(rep.trials.size()) == 600,
          "unexpected trial count");
      tol = rep.tol;
    }
    GraphField control;
    control.value = [](Vec2 v) { return v.x * v.x; };
    control.grad = [](Vec2 v) { return Vec2{2.0 * v.x, 0.0}; };
    const PerturbationReport rep =
        perturbation_test(control, dom, 100, eps, 7);
    req(rep.min_delta < -10.0 * tol,
        "control surface not detected: min delta " + fmt(rep.min_delta));
  });

  // 8. Classification trichotomy with singular sets: vertical plane ->
  //    empty, horizontal plane -> apex only, covering cones -> apex plus
  //    one bisectrix ray per arc on which the characteristic vector
  //    vanishes to 1e-14.
  criterion(8, "trichotomy classification and singular rays", 10.0, [] {
    const SurfaceClassification vert = classify(VerticalPlaneSpec{0.7});
    req(vert.kind == SurfaceClassification::Kind::VerticalPlane &&
            vert.singular_set.kind == SingularSet::Kind::Empty,
        "vertical plane misclassified");
    const SurfaceClassification horiz = classify(HorizontalPlaneSpec{});
    req(horiz.kind == SurfaceClassification::Kind::HorizontalPlane &&
            horiz.singular_set.kind == SingularSet::Kind::OriginOnly,
        "horizontal plane misclassified");
    std::mt19937_64 rng(808);
    std::vector<ArcFamily> fams = {covering_three(), half_circles()};
    for (int i = 0; i < 6; ++i) fams.push_back(random_covering_family(rng));
    for (const ArcFamily& fam : fams) {
      const ConeSurface cone(fam);
      const SurfaceClassification c = classify(cone);
      req(c.kind == SurfaceClassification::Kind::ArcCone,
          "covering cone misclassified");
      req(c.singular_set.kind == SingularSet::Kind::OriginAndRays,
          "covering cone singular-set kind wrong");
      req(c.singular_set.ray_angles.size() == fam.arcs().size(),
          "one singular ray per arc expected");
      for (const double theta : c.singular_set.ray_angles) {
        for (const double r : {0.5, 1.0, 2.0}) {
          const MultiVec nv =
              cone.characteristic_vector(r * unit_from_angle(theta));
          for (const SidedVec& s : nv.limits) {
            req(norm(s.value) <= 1e-14,
                "characteristic vector " + fmt(norm(s.value)) +
                    " on singular ray");
          }
        }
      }
    }
  });

  // 9. The two-half-circle cone is the saddle t = -x y exactly, up to
  //    1e-15 |v|^2 of rotation round-off, at 10^4 random points.
  criterion(9, "two-half-circle cone evaluates to the exact saddle", 5.0, [] {
    const ConeSurface cone(half_circles());
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    int exact = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 v{coord(rng), coord(rng)};
      const double u = cone.evaluate(v);
      const double want = -v.x * v.y;
      if (u == want) ++exact;
      req(std::abs(u - want) <= 1e-15 * (v.x * v.x + v.y * v.y),
          "saddle mismatch " + fmt(u - want) + " at (" + fmt(v.x) + ", " +
              fmt(v.y) + ")");
    }
    req(exact == 10000, "non-bitwise saddle values: " +
                            std::to_string(10000 - exact) + " of 10000");
  });

  // 10. Truncations of the geometric-tail family converge: sup-norm
  //     differences on the unit disk stay below the analytic tail bound
  //     and decrease monotonically along k = 2, 4, 8, 16.
  criterion(10, "tail truncations obey the analytic sup bound", 60.0, [] {
    const TruncationReport rep = truncation_convergence(
        tail_family(), Domain2D::disk({0.0, 0.0}, 1.0, 256), {2, 4, 8, 16});
    req(rep.pass, "truncation report failed");
    double prev = std::numeric_limits<double>::infinity();
    for (const TruncationStep& s : rep.steps) {
      req(s.sup_diff <= s.tail_bound,
          "sup difference " + fmt(s.sup_diff) + " exceeds bound " +
              fmt(s.tail_bound));
      req(s.sup_diff < prev, "sup differences not decreasing");
      prev = s.sup_diff;
    }
  });

  if (g_failures == 0) {
    std::printf("acceptance gate: all 10 criteria passed\n");
  } else {
    std::printf("acceptance gate: %d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
