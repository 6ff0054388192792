// Polar-grid mesh export and figure-data (ruling arrangement) export.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hcone/arcs.hpp"
#include "hcone/calibrate.hpp"
#include "hcone/cone.hpp"
#include "hcone/errors.hpp"
#include "hcone/export.hpp"

using namespace hcone;

namespace {

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

ArcFamily tail_family() {
  return ArcFamily::validate({{4.0, 0.4}}, TailRule{1.0, 2.0, 0.5, 0.3});
}

// Count how often each undirected edge is used by the faces.
std::map<std::pair<int, int>, int> edge_uses(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> uses;
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      int a = f[static_cast<std::size_t>(e)];
      int b = f[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++uses[{a, b}];
    }
  }
  return uses;
}

}  // namespace

TEST_CASE("mesh spec validation") {
  const ConeSurface cone(empty_family());
  CHECK_THROWS_AS(build_surface_mesh(cone, {0.0, 64, 16}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_surface_mesh(cone, {1.0, 7, 16}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_surface_mesh(cone, {1.0, 64, 7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_surface_mesh(ConeSurface(tail_family()), {1.0, 64, 16}),
                  InfiniteFamily);
}

TEST_CASE("empty family meshes to a flat disk") {
  const SurfaceMesh mesh =
      build_surface_mesh(ConeSurface(empty_family()), {1.0, 32, 8});
  CHECK(mesh.snapped_count == 0);
  CHECK(mesh.angles.size() == 32);
  CHECK(mesh.vertices.size() == 32 * 8 + 1);
  CHECK(mesh.faces.size() == 32 * (2 * 8 - 1));
  for (const auto& v : mesh.vertices) {
    CHECK(v.z == 0.0);
    CHECK(std::hypot(v.x, v.y) <= 1.0 + 1e-12);
  }
}

TEST_CASE("half-circle mesh reproduces z = -xy exactly") {
  // Interface rays at 0, pi/2, pi, 3pi/2 coincide with the uniform grid
  // when the angular resolution is a multiple of 4, so nothing is snapped.
  const SurfaceMesh mesh =
      build_surface_mesh(ConeSurface(half_circles()), {2.0, 64, 12});
  CHECK(mesh.snapped_count == 0);
  CHECK(mesh.vertices.size() == 64 * 12 + 1);
  double worst = 0.0;
  for (const auto& v : mesh.vertices) {
    worst = std::max(worst, std::fabs(v.z + v.x * v.y));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("interface rays off the uniform grid get snapped columns") {
  // One arc at 165 degrees, half-angle 35: rays at 130, 165, 200 degrees,
  // none of which lie on the 64-column uniform grid.
  const SurfaceMesh mesh =
      build_surface_mesh(ConeSurface(one_arc()), {1.0, 64, 8});
  CHECK(mesh.snapped_count == 3);
  CHECK(mesh.angles.size() == 67);
  CHECK(mesh.vertices.size() == 64 * 8 + 3 * 8 + 1);
  CHECK(mesh.faces.size() == 67 * (2 * 8 - 1));

  const double deg = kPi / 180.0;
  for (double want : {130.0 * deg, 165.0 * deg, 200.0 * deg}) {
    bool found = false;
    for (double a : mesh.angles) {
      found = found || std::fabs(signed_angle_diff(a, want)) <= kAngleTol;
    }
    CHECK(found);
  }
  // Angle columns stay sorted and distinct.
  for (std::size_t i = 1; i < mesh.angles.size(); ++i) {
    CHECK(mesh.angles[i] > mesh.angles[i - 1]);
  }
}

TEST_CASE("mesh is watertight over the sampled disk") {
  const SurfaceMesh mesh =
      build_surface_mesh(ConeSurface(three_arcs()), {1.0, 24, 8});
  const auto uses = edge_uses(mesh);

  const int M = static_cast<int>(mesh.angles.size());
  const int outer_first = static_cast<int>(mesh.vertices.size()) - M;
  int boundary_edges = 0;
  for (const auto& [edge, count] : uses) {
    CHECK(count >= 1);
    CHECK(count <= 2);
    if (count == 1) {
      ++boundary_edges;
      // Every boundary edge joins two consecutive outer-ring vertices.
      CHECK(edge.first >= outer_first);
      CHECK(edge.second >= outer_first);
    }
  }
  CHECK(boundary_edges == M);

  // Euler characteristic of a disk: V - E + F = 1.
  const int V = static_cast<int>(mesh.vertices.size());
  const int E = static_cast<int>(uses.size());
  const int F = static_cast<int>(mesh.faces.size());
  CHECK(V - E + F == 1);
}

TEST_CASE("mesh vertices sample the graph") {
  const ConeSurface cone(three_arcs());
  const SurfaceMesh mesh = build_surface_mesh(cone, {1.5, 16, 8});
  for (const auto& v : mesh.vertices) {
    CHECK(v.z == cone.evaluate({v.x, v.y}));
  }
}

TEST_CASE("obj output is one-indexed, complete, and deterministic") {
  const SurfaceMesh mesh =
      build_surface_mesh(ConeSurface(one_arc()), {1.0, 16, 8});
  std::ostringstream out;
  write_obj(mesh, out);
  const std::string text = out.str();

  std::istringstream in(text);
  std::string line;
  std::size_t v_lines = 0, f_lines = 0;
  while (std::getline(in, line)) {
    REQUIRE(!line.empty());
    if (line[0] == 'v') {
      ++v_lines;
      CHECK(f_lines == 0);  // all vertices precede all faces
    } else {
      REQUIRE(line[0] == 'f');
      ++f_lines;
      int i = 0, j = 0, k = 0;
      REQUIRE(std::sscanf(line.c_str(), "f %d %d %d", &i, &j, &k) == 3);
      for (int idx : {i, j, k}) {
        CHECK(idx >= 1);
        CHECK(idx <= static_cast<int>(mesh.vertices.size()));
      }
    }
  }
  CHECK(v_lines == mesh.vertices.size());
  CHECK(f_lines == mesh.faces.size());

  std::ostringstream again;
  write_obj(mesh, again);
  CHECK(again.str() == text);
}

TEST_CASE("figure data covers gaps, rulings, and bisectrices") {
  const ConeSurface cone(three_arcs());
  const FigureData fig = build_figure_data(cone, 1.0, false, 6);

  std::size_t bisectrices = 0, characteristics = 0, gap_rays = 0;
  for (const FigureSegment& s : fig.segments) {
    switch (s.kind) {
      case FigureSegment::Kind::Bisectrix:
        ++bisectrices;
        break;
      case FigureSegment::Kind::Characteristic:
        ++characteristics;
        break;
      case FigureSegment::Kind::GapRay:
        ++gap_rays;
        break;
    }
    CHECK(norm(s.a) <= 1.0 + 1e-9);
    CHECK(norm(s.b) <= 1.0 + 1e-9);
  }
  CHECK(bisectrices == 3);             // one flagged bisectrix per arc
  CHECK(characteristics == 3 * 6 * 2);  // mirrored pairs
  CHECK(gap_rays >= 9);                // three gaps, several rays each

  // Gap rays are radial and land strictly inside a gap.
  for (const FigureSegment& s : fig.segments) {
    if (s.kind != FigureSegment::Kind::GapRay) continue;
    CHECK(s.a.x == 0.0);
    CHECK(s.a.y == 0.0);
    CHECK(norm(s.b) == doctest::Approx(1.0));
    const SectorLocation loc = cone.family().locate(s.b);
    CHECK(loc.kind == SectorLocation::Kind::InsideJ);
  }
}

TEST_CASE("characteristic pairs share a foot and reflect across the bisectrix") {
  const ConeSurface cone(one_arc());
  const FigureData fig = build_figure_data(cone, 1.0, false, 5);
  const double center = one_arc().arcs()[0].center;

  std::map<int, std::vector<FigureSegment>> pairs;
  for (const FigureSegment& s : fig.segments) {
    if (s.kind == FigureSegment::Kind::Characteristic) {
      pairs[s.pair_id].push_back(s);
    }
  }
  CHECK(pairs.size() == 5);
  for (const auto& [id, segs] : pairs) {
    REQUIRE(segs.size() == 2);
    // Same foot, and the foot sits on the bisectrix.
    CHECK(segs[0].a.x == segs[1].a.x);
    CHECK(segs[0].a.y == segs[1].a.y);
    const double foot_angle = std::atan2(segs[0].a.y, segs[0].a.x);
    CHECK(std::fabs(signed_angle_diff(foot_angle, center)) <= 1e-12);
    // Mirror images: the two directions make equal angles with the
    // bisectrix on opposite sides.
    const Vec2 d0 = segs[0].b - segs[0].a;
    const Vec2 d1 = segs[1].b - segs[1].a;
    const double a0 = signed_angle_diff(std::atan2(d0.y, d0.x), center);
    const double a1 = signed_angle_diff(std::atan2(d1.y, d1.x), center);
    CHECK(a0 == doctest::Approx(-a1).epsilon(1e-12));
    CHECK(std::fabs(a0) > 0.1);
  }
}

TEST_CASE("the graph is affine along every characteristic segment") {
  // Rulings are straight lines inside the surface, so u restricted to one
  // is affine; its second differences must vanish.
  for (const ArcFamily& fam : {one_arc(), three_arcs(), half_circles()}) {
    const ConeSurface cone(fam);
    const FigureData fig = build_figure_data(cone, 1.0, false, 4);
    for (const FigureSegment& s : fig.segments) {
      if (s.kind == FigureSegment::Kind::GapRay) continue;  // u = 0 there
      constexpr int kSamples = 7;
      double vals[kSamples];
      for (int i = 0; i < kSamples; ++i) {
        const double t = static_cast<double>(i) / (kSamples - 1);
        vals[i] = cone.evaluate(s.a + t * (s.b - s.a));
      }
      for (int i = 2; i < kSamples; ++i) {
        CHECK(std::fabs(vals[i] - 2.0 * vals[i - 1] + vals[i - 2]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("field arrows are unit calibration samples off the rays") {
  const ConeSurface cone(three_arcs());
  const FigureData plainfig = build_figure_data(cone, 1.0, false);
  CHECK(plainfig.arrows.empty());

  const FigureData fig = build_figure_data(cone, 1.0, true);
  CHECK(fig.arrows.size() > 50);
  const CalibrationField field = build_calibration(cone);
  for (const FieldArrow& a : fig.arrows) {
    CHECK(norm(a.dir) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(a.at) <= 1.0 + 1e-12);
    CHECK(a.dir.x == field.value(a.at).x);
    CHECK(a.dir.y == field.value(a.at).y);
  }
}

TEST_CASE("figure export rejects infinite families and bad arguments") {
  CHECK_THROWS_AS(build_figure_data(ConeSurface(tail_family()), 1.0),
                  InfiniteFamily);
  const ConeSurface cone(one_arc());
  CHECK_THROWS_AS(build_figure_data(cone, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_figure_data(cone, 1.0, false, 0),
                  std::invalid_argument);
}

TEST_CASE("figure csv has one row per segment and arrow") {
  const ConeSurface cone(one_arc());
  const FigureData fig = build_figure_data(cone, 1.0, true, 3);
  std::ostringstream out;
  write_figure_csv(fig, out);
  const std::string text = out.str();

  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "kind,index,pair,ax,ay,bx,by");
  std::size_t rows = 0;
  std::set<std::string> kinds;
  while (std::getline(in, line)) {
    ++rows;
    kinds.insert(line.substr(0, line.find(',')));
  }
  CHECK(rows == fig.segments.size() + fig.arrows.size());
  CHECK(kinds ==
        std::set<std::string>{"gap_ray", "characteristic", "bisectrix",
                              "field"});

  std::ostringstream again;
  write_figure_csv(fig, again);
  CHECK(again.str() == text);
}
