#pragma once

// Numerical sub-Riemannian perimeter of t-graphs over planar domains.
//
// For a graph surface {t = u(x, y)} the perimeter of the subgraph
// {t <= u} over a planar domain is the integral of the density
//
//     sqrt((du/dx - y)^2 + (du/dy + x)^2) dx dy,
//
// the norm of the horizontal components of the (Euclidean) graph normal
// expressed in the left-invariant frame.  This module provides:
//
//  * midpoint-rule quadrature of that density over disks and rectangles,
//    with a serial reference kernel and an OpenMP row-parallel kernel that
//    produce bitwise-identical sums regardless of thread count;
//  * a randomized bump-perturbation test: perimeter must not decrease
//    under small compactly supported graph perturbations when the graph
//    is minimal (tolerance calibrated on the flat plane);
//  * a truncation-convergence experiment for families with an infinite
//    geometric tail of arcs.

#include <functional>
#include <vector>

#include "hcone/arcs.hpp"
#include "hcone/bump.hpp"
#include "hcone/cone.hpp"
#include "hcone/geometry.hpp"

namespace hcone {

// Planar quadrature domain together with its grid resolution.  The grid is
// an n-by-n subdivision of the bounding box; disk domains discard cells
// outside the disk and subsample cells straddling the boundary circle.
struct Domain2D {
  enum class Shape { Disk, Rectangle };

  Shape shape{Shape::Disk};
  Vec2 center{0.0, 0.0};  // disk center
  double radius{1.0};     // disk radius
  double x0{-1.0}, x1{1.0}, y0{-1.0}, y1{1.0};  // rectangle bounds
  int n{256};

  // Throw std::invalid_argument unless n >= 16 and the shape has positive
  // measure (radius > 0, or x0 < x1 and y0 < y1).
  static Domain2D disk(Vec2 center, double radius, int n);
  static Domain2D rectangle(double x0, double x1, double y0, double y1,
                            int n);

  bool contains(Vec2 v) const;
  void bounding_box(double& bx0, double& bx1, double& by0, double& by1) const;

  // Largest |v| over the domain; scale factor for tail bounds and bumps.
  double bounding_radius() const;

  // Characteristic length used to scale random bump radii: the disk radius,
  // or half the shorter rectangle side.
  double scale() const;
};

// A scalar graph u with its analytic gradient.  `crease_angles` lists
// directions of rays from the origin along which u or its gradient has a
// kink; quadrature cells straddling those rays are subsampled so the
// midpoint rule keeps its accuracy on piecewise-smooth integrands.
struct GraphField {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> grad;
  std::vector<double> crease_angles;
};

// The flat plane u = 0.
GraphField plane_graph();

// Wrap a cone surface: evaluate/gradient plus its interface rays as
// creases.  Families with an infinite tail contribute the prefix rays and
// the first few tail rays (evaluation itself handles every arc exactly).
GraphField graph_of(const ConeSurface& cone);

// Pointwise perimeter density sqrt((du/dx - y)^2 + (du/dy + x)^2).
double perimeter_density(const GraphField& u, Vec2 v);

// Quadrature of the perimeter density over the domain.  The two kernels
// return bitwise-identical values: both accumulate each grid row into its
// own partial sum and then combine rows in index order, so the OpenMP
// version is deterministic for any thread count.
double perimeter_of_graph(const GraphField& u, const Domain2D& dom);
double perimeter_of_graph_serial(const GraphField& u, const Domain2D& dom);

// Perimeter change of u + eps*bump relative to u, computed as a
// support-restricted difference: both densities are evaluated at the same
// quadrature nodes over the cells meeting the bump support, and the
// per-node differences are summed.  At eps = 0 the result is exactly 0.
double perturbed_perimeter_delta(const GraphField& u, const Domain2D& dom,
                                 const Bump& bump, double eps);

struct PerturbationTrial {
  Bump bump;
  double eps{0.0};
  double delta{0.0};
};

struct PerturbationReport {
  bool pass{false};
  // Accept threshold: delta >= -tol for every trial.  tol =
  // max(1e-6, 2 * plane_noise) where plane_noise is the worst negative
  // delta observed for the flat plane (known minimal) over the same
  // domain with independently seeded bumps.
  double tol{0.0};
  double plane_noise{0.0};
  double min_delta{0.0};
  PerturbationTrial worst;
  std::vector<PerturbationTrial> trials;
};

// Randomized minimality evidence: for `trials` seeded bumps and every eps
// in eps_grid, delta = perimeter(u + eps*bump) - perimeter(u) restricted
// to the bump support.  Bumps: radius log-uniform in [0.05, 0.5]*scale,
// center uniform in the domain shrunk by the radius (support stays inside
// the domain), amplitude uniform in [-0.5, 0.5].  Deterministic for a
// fixed seed regardless of thread count.
PerturbationReport perturbation_test(const GraphField& u, const Domain2D& dom,
                                     int trials,
                                     const std::vector<double>& eps_grid,
                                     unsigned long long seed = 7,
                                     int calibration_trials = 20);

struct TruncationStep {
  int k_from{0};
  int k_to{0};
  // Max |u_{k_to} - u_{k_from}| over sampled domain points.
  double sup_diff{0.0};
  // Analytic bound R^2 * tan(alpha) with R the domain's bounding radius
  // and alpha the half-angle of the first (widest) arc added by this step.
  double tail_bound{0.0};
  // Volume of the symmetric difference of the two subgraphs inside the
  // slab dom x (-T, T), measured on a 3D voxel grid.
  double l1_slab_diff{0.0};
};

struct TruncationReport {
  bool pass{false};
  double slab_halfheight{0.0};
  std::vector<TruncationStep> steps;
};

// Compare consecutive truncations of a family with an infinite tail.  A
// truncation of size k keeps the prefix arcs plus the first k tail arcs;
// ks must be positive and strictly increasing.  Each consecutive pair
// must satisfy sup_diff <= tail_bound, and the sup_diffs must decrease
// monotonically.  Throws NoTail for finite families and
// std::invalid_argument for bad ks.
// The slab voxel count costs O(1) per grid column (a layer-count
// difference), so the default vertical resolution can afford to resolve
// the early steps of a geometric tail.
TruncationReport truncation_convergence(const ArcFamily& family,
                                        const Domain2D& dom,
                                        std::vector<int> ks,
                                        int t_layers = 4096);

}  // namespace hcone
