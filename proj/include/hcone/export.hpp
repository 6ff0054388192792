#pragma once

// Mesh and figure-data export.
//
// The mesh is a polar-grid triangulation of the graph surface
// {(x, y, u(x, y))} over a disk, with extra vertex columns snapped onto
// every interface ray so the sector creases lie exactly along mesh edges.
// Figure data is the planar characteristic-line arrangement of a cone —
// radial rulings across the gaps, mirrored ruling pairs across each arc,
// one flagged bisectrix per arc — optionally decorated with unit arrows of
// the calibration field.  Both exports are plain deterministic text:
// Wavefront OBJ for meshes, CSV for figures.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/geometry.hpp"

namespace hcone {

struct MeshSpec {
  double radius{1.0};
  int angular_res{64};
  int radial_res{16};
};

struct SurfaceMesh {
  struct Vertex {
    double x{0.0}, y{0.0}, z{0.0};
  };

  // Apex first, then rings from innermost to outermost; each ring holds
  // one vertex per angle column in ascending-angle order.
  std::vector<Vertex> vertices;
  // Zero-based vertex indices, counterclockwise seen from above.
  std::vector<std::array<int, 3>> faces;
  // Sorted angle columns: the uniform grid plus the snapped interface rays.
  std::vector<double> angles;
  int snapped_count{0};
};

// Triangulate the graph over the disk of spec.radius.  Vertex count is
// angular_res * radial_res + snapped_count * radial_res + 1 (the apex).
// Throws InfiniteFamily for families with a tail (truncate first) and
// std::invalid_argument unless spec.radius > 0 and both resolutions >= 8.
SurfaceMesh build_surface_mesh(const ConeSurface& cone, const MeshSpec& spec);

// Wavefront OBJ: `v x y z` lines then 1-indexed `f i j k` lines.
// The path overload throws std::runtime_error when the file cannot be
// written.
void write_obj(const SurfaceMesh& mesh, std::ostream& out);
void write_obj(const SurfaceMesh& mesh, const std::string& path);

struct FigureSegment {
  enum class Kind { GapRay, Characteristic, Bisectrix };
  Kind kind{Kind::GapRay};
  // Owning arc for Characteristic/Bisectrix, gap index for GapRay.
  int index{-1};
  // Mirrored characteristic lines share a pair id; -1 otherwise.
  int pair_id{-1};
  Vec2 a, b;
};

struct FieldArrow {
  Vec2 at;
  Vec2 dir;  // unit calibration vector
};

struct FigureData {
  double radius{1.0};
  std::vector<FigureSegment> segments;
  std::vector<FieldArrow> arrows;
};

// The ruling arrangement of a finite cone clipped to a disk: radial rays
// across every gap, `lines_per_arc` mirrored characteristic pairs per arc
// (feet spread along the bisectrix), and each bisectrix flagged.  With
// `with_field`, adds a polar grid of calibration arrows sampled away from
// the interface rays.  Throws InfiniteFamily for families with a tail.
FigureData build_figure_data(const ConeSurface& cone, double radius = 1.0,
                             bool with_field = false, int lines_per_arc = 8);

// CSV with header kind,index,pair,ax,ay,bx,by.  Segment rows use their
// endpoints; field rows (kind "field") carry position in (ax, ay) and the
// unit direction in (bx, by).
void write_figure_csv(const FigureData& fig, std::ostream& out);
void write_figure_csv(const FigureData& fig, const std::string& path);

}  // namespace hcone
