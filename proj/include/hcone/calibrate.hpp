#pragma once

// Calibration of the cone over a finite family: the sector decomposition,
// the piecewise unit horizontal field, and the two checks that make it a
// calibration, from which perimeter minimality of the subgraph follows:
//
//   (1) zero horizontal divergence inside every region, and
//   (2) continuity of the normal flux across every interface ray
//       (the one-dimensional gluing condition replacing a distributional
//       divergence computation).
//
// The field is the normalized characteristic vector N/|N|: over a
// complementary sector it is the rotation field (-y, x)/r; over each half
// of an arc sector it is the constant unit vector perpendicular to that
// half's rulings, unit(center +- half_angle + pi/2).  It is t-independent
// and tangent to no ruling.  The same field, read as frame coefficients
// v1 X + v2 Y, is the horizontal unit normal of the subgraph {t <= u}.

#include <functional>
#include <vector>

#include "hcone/arcs.hpp"
#include "hcone/cone.hpp"
#include "hcone/errors.hpp"
#include "hcone/geometry.hpp"
#include "hcone/hgroup.hpp"

namespace hcone {

// Closed-form field on one region.  Custom entries exist so tests can
// corrupt a region and watch the checks fail.
struct RegionField {
  enum class Kind { Radial, Constant, Custom };
  Kind kind{Kind::Constant};
  Vec2 constant{1.0, 0.0};                 // Kind::Constant
  std::function<Vec2(Vec2)> custom;        // Kind::Custom

  Vec2 value(Vec2 v) const;
  // Radial and Constant forms are divergence-free identities; Custom fields
  // have no closed-form certificate and rely on the numeric audit alone.
  bool closed_form_divergence_free() const { return kind != Kind::Custom; }
};

// Interface ray decorated with the outward unit normal of its clockwise
// side (the counterclockwise side's outward normal is its negation).
struct DecoratedInterface {
  InterfaceRay ray;
  Vec2 cw_outward_normal;
};

// The planar partition induced by a finite family: one region per
// complementary sector, two (bisectrix-split halves) per arc sector.
struct SectorDecomposition {
  ArcFamily family;
  std::vector<RegionRef> regions;  // complementary sectors first, then
                                   // (lower, upper) halves per arc
  std::vector<DecoratedInterface> interfaces;

  // Position of a region in `regions` (and in a field table).
  int region_index(RegionRef ref) const;
  // Region containing v; on an interface ray, the side that compares
  // smaller as (kind, index) — fixed for determinism, irrelevant to
  // integrals.  Throws OriginQuery at the apex.
  RegionRef region_at(Vec2 v) const;
};

SectorDecomposition build_decomposition(const ArcFamily& family);

// Piecewise closed-form horizontal field over a decomposition.
class CalibrationField {
 public:
  CalibrationField(SectorDecomposition decomposition,
                   std::vector<RegionField> region_fields);

  const SectorDecomposition& decomposition() const { return decomp_; }

  // Field at v (planar components = frame coefficients); on interface rays
  // the deterministic side picked by region_at.
  Vec2 value(Vec2 v) const;
  // One-sided evaluation: the named region's closed form at v.
  Vec2 value_from(RegionRef region, Vec2 v) const;
  // The same data as a horizontal vector at a space point; t-independent.
  HVector horizontal(const HPoint& p) const;

  const RegionField& region_field(RegionRef ref) const;
  // Replace one region's field (used by tests to corrupt the certificate).
  void set_region_field(RegionRef ref, RegionField f);

 private:
  SectorDecomposition decomp_;
  std::vector<RegionField> fields_;
};

// The canonical calibration field N/|N| of the cone over a finite family.
// Throws InfiniteFamily (calibrate truncations of a tail instead).
CalibrationField build_calibration(const ConeSurface& cone);

// ---- certificate checks ----------------------------------------------

struct RegionDivergenceCheck {
  RegionRef region;
  bool closed_form_zero{false};
  double max_fd_abs{0.0};  // worst |finite-difference divergence| sampled
};

struct DivergenceReport {
  bool pass{false};
  double tol{1e-8};
  double fd_step{1e-5};
  double max_fd_abs{0.0};
  std::vector<RegionDivergenceCheck> regions;
};

// Per-region divergence: closed-form certificate (constants and the
// rotation field are divergence-free) plus a central-difference audit of
// d(v1)/dx + d(v2)/dy at random interior points of every region.
DivergenceReport check_piecewise_divergence(const CalibrationField& field,
                                            int samples_per_region = 25,
                                            unsigned long long seed = 23);

struct InterfaceFluxCheck {
  InterfaceRay ray;
  double max_abs_flux_sum{0.0};
};

struct FluxReport {
  bool pass{false};
  double tol{1e-12};
  double max_abs_flux_sum{0.0};
  std::vector<InterfaceFluxCheck> interfaces;
};

// Flux continuity across every interface ray: at sampled points p on the
// ray, <V_cw(p), n_cw> + <V_ccw(p), n_ccw> must vanish (n_* the outward
// normals of the two adjacent regions, n_ccw = -n_cw).
FluxReport check_interface_flux(const CalibrationField& field,
                                int samples_per_ray = 100);

struct DistributionalAudit {
  bool pass{false};
  double tol{1e-4};
  int grid_cells{0};
  double extent{0.0};
  std::vector<double> residuals;  // integral of <grad phi, V> per test bump
  double max_abs_residual{0.0};
};

// Quadrature analogue of zero distributional divergence: for random C^1
// bumps phi, integrate <grad phi, V> over [-extent, extent]^2 on a tensor
// grid of grid_cells^2 cells.  Cells crossed by an interface ray are split
// along it so each sub-polygon is integrated from a single region; the
// result must vanish within tol for every bump.
DistributionalAudit distributional_divergence_audit(const CalibrationField& field,
                                                    int bumps = 20,
                                                    int grid_cells = 400,
                                                    double extent = 4.0,
                                                    unsigned long long seed = 29);

struct MinimalityCertificate {
  bool pass{false};
  double normal_tol{1e-10};
  // Worst |field - N/|N|| at sampled off-interface points.
  double max_normal_mismatch{0.0};
  // Worst ||field| - 1| (closed forms are normalized, so ~1e-16).
  double max_unit_norm_error{0.0};
  // Worst |<field, ruling direction>| (the field is normal to rulings).
  double max_ruling_alignment{0.0};
  DivergenceReport divergence;
  FluxReport flux;
};

// Bundle: the field agrees with the graph's unit horizontal normal, has
// zero divergence in every region, and satisfies flux continuity across
// every interface — together, the perimeter-minimality certificate of the
// cone's subgraph.  Throws InfiniteFamily.
MinimalityCertificate verify_minimality_certificate(const ConeSurface& cone,
                                                    int samples = 2000,
                                                    unsigned long long seed = 31);

}  // namespace hcone
