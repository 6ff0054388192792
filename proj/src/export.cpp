#include "hcone/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hcone/calibrate.hpp"
#include "hcone/errors.hpp"

namespace hcone {

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

SurfaceMesh build_surface_mesh(const ConeSurface& cone, const MeshSpec& spec) {
  if (!cone.family().finite()) {
    throw InfiniteFamily("mesh export needs a finite family; truncate first");
  }
  if (!(spec.radius > 0.0)) {
    throw std::invalid_argument("mesh radius must be positive");
  }
  if (spec.angular_res < 8 || spec.radial_res < 8) {
    throw std::invalid_argument("mesh resolutions must be >= 8");
  }

  SurfaceMesh mesh;
  const int A = spec.angular_res;
  const double step = kTwoPi / A;
  mesh.angles.reserve(static_cast<std::size_t>(A));
  for (int m = 0; m < A; ++m) mesh.angles.push_back(m * step);

  // Snap a column onto every interface ray that misses the uniform grid.
  for (const InterfaceRay& ray : interface_rays(cone.family())) {
    bool on_grid = false;
    for (double a : mesh.angles) {
      if (std::fabs(signed_angle_diff(ray.angle, a)) <= kAngleTol) {
        on_grid = true;
        break;
      }
    }
    if (!on_grid) {
      mesh.angles.push_back(ray.angle);
      ++mesh.snapped_count;
    }
  }
  std::sort(mesh.angles.begin(), mesh.angles.end());

  const int M = static_cast<int>(mesh.angles.size());
  const int R = spec.radial_res;
  mesh.vertices.reserve(static_cast<std::size_t>(M) * R + 1);
  mesh.vertices.push_back({0.0, 0.0, 0.0});  // apex; u(0) = 0
  // Snap each column's direction so vertices meant to lie on an axis (or
  // any exactly representable ray) sit on it exactly, matching how the
  // surface itself resolves on-ray queries.
  std::vector<Vec2> units;
  units.reserve(mesh.angles.size());
  for (double a : mesh.angles) {
    const Vec2 u = unit_from_angle(a);
    units.push_back({snap_trig(u.x), snap_trig(u.y)});
  }
  for (int j = 1; j <= R; ++j) {
    const double r = spec.radius * j / R;
    for (const Vec2& u : units) {
      const Vec2 p = r * u;
      mesh.vertices.push_back({p.x, p.y, cone.evaluate(p)});
    }
  }

  mesh.faces.reserve(static_cast<std::size_t>(M) * (2 * R - 1));
  for (int m = 0; m < M; ++m) {
    mesh.faces.push_back({0, 1 + m, 1 + (m + 1) % M});
  }
  for (int j = 1; j < R; ++j) {
    const int lo = 1 + (j - 1) * M;
    const int hi = 1 + j * M;
    for (int m = 0; m < M; ++m) {
      const int m1 = (m + 1) % M;
      mesh.faces.push_back({lo + m, hi + m, hi + m1});
      mesh.faces.push_back({lo + m, hi + m1, lo + m1});
    }
  }
  return mesh;
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out) {
  std::string buf;
  buf.reserve(mesh.vertices.size() * 40 + mesh.faces.size() * 24);
  for (const SurfaceMesh::Vertex& v : mesh.vertices) {
    buf += "v ";
    append_number(buf, v.x);
    buf += ' ';
    append_number(buf, v.y);
    buf += ' ';
    append_number(buf, v.z);
    buf += '\n';
  }
  char line[64];
  for (const std::array<int, 3>& f : mesh.faces) {
    std::snprintf(line, sizeof line, "f %d %d %d\n", f[0] + 1, f[1] + 1,
                  f[2] + 1);
    buf += line;
  }
  out << buf;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_obj(mesh, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

FigureData build_figure_data(const ConeSurface& cone, double radius,
                             bool with_field, int lines_per_arc) {
  const ArcFamily& fam = cone.family();
  if (!fam.finite()) {
    throw InfiniteFamily("figure export needs a finite family; truncate first");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("figure radius must be positive");
  }
  if (lines_per_arc < 1) {
    throw std::invalid_argument("need at least one line per arc");
  }

  FigureData fig;
  fig.radius = radius;

  // Radial rulings across every gap, roughly one per 10 degrees.
  const auto& gaps = fam.complementary();
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    const CircularInterval& gap = gaps[gi];
    const int rays = std::max(3, static_cast<int>(std::ceil(gap.length * 6.0)));
    for (int j = 1; j <= rays; ++j) {
      const double theta = gap.start + gap.length * j / (rays + 1);
      FigureSegment s;
      s.kind = FigureSegment::Kind::GapRay;
      s.index = static_cast<int>(gi);
      s.a = {0.0, 0.0};
      s.b = radius * unit_from_angle(theta);
      fig.segments.push_back(s);
    }
  }

  // Mirrored characteristic pairs and the bisectrix of every arc.  In the
  // arc frame the rulings through foot (s, 0) run parallel to the arc's
  // boundary rays, direction (cos(alpha), +-sin(alpha)); they are clipped
  // to the disk of the given radius.
  int pair_id = 0;
  for (std::size_t ai = 0; ai < fam.arcs().size(); ++ai) {
    const ConeSurface::ArcFrame f = cone.frame(static_cast<int>(ai));
    const double ca = std::cos(f.alpha);
    const double sa = std::sin(f.alpha);
    for (int j = 1; j <= lines_per_arc; ++j) {
      const double s = radius * j / (lines_per_arc + 1);
      const double tmax =
          -s * ca + std::sqrt(radius * radius - s * s * sa * sa);
      for (int side : {+1, -1}) {
        FigureSegment seg;
        seg.kind = FigureSegment::Kind::Characteristic;
        seg.index = static_cast<int>(ai);
        seg.pair_id = pair_id;
        seg.a = cone.from_frame(f, {s, 0.0});
        seg.b = cone.from_frame(f, {s + tmax * ca, side * tmax * sa});
        fig.segments.push_back(seg);
      }
      ++pair_id;
    }
    FigureSegment bis;
    bis.kind = FigureSegment::Kind::Bisectrix;
    bis.index = static_cast<int>(ai);
    bis.a = {0.0, 0.0};
    bis.b = radius * unit_from_angle(fam.arcs()[ai].center);
    fig.segments.push_back(bis);
  }

  if (with_field) {
    const CalibrationField field = build_calibration(cone);
    constexpr int kRings = 5;
    constexpr int kSpokes = 24;
    for (int j = 1; j <= kRings; ++j) {
      const double r = radius * j / kRings;
      for (int m = 0; m < kSpokes; ++m) {
        const double theta = kTwoPi * (m + 0.5) / kSpokes;
        // Skip sample points sitting on an interface ray: the field is
        // discontinuous there and an arrow would be misleading.
        bool on_ray = false;
        for (const DecoratedInterface& di : field.decomposition().interfaces) {
          if (std::fabs(signed_angle_diff(theta, di.ray.angle)) <= 1e-9) {
            on_ray = true;
            break;
          }
        }
        if (on_ray) continue;
        const Vec2 at = r * unit_from_angle(theta);
        fig.arrows.push_back({at, field.value(at)});
      }
    }
  }
  return fig;
}

namespace {

const char* kind_name(FigureSegment::Kind k) {
  switch (k) {
    case FigureSegment::Kind::GapRay:
      return "gap_ray";
    case FigureSegment::Kind::Characteristic:
      return "characteristic";
    case FigureSegment::Kind::Bisectrix:
      return "bisectrix";
  }
  return "?";
}

}  // namespace

void write_figure_csv(const FigureData& fig, std::ostream& out) {
  std::string buf = "kind,index,pair,ax,ay,bx,by\n";
  auto row = [&buf](const char* kind, int index, int pair, Vec2 a, Vec2 b) {
    buf += kind;
    char head[32];
    std::snprintf(head, sizeof head, ",%d,%d,", index, pair);
    buf += head;
    append_number(buf, a.x);
    buf += ',';
    append_number(buf, a.y);
    buf += ',';
    append_number(buf, b.x);
    buf += ',';
    append_number(buf, b.y);
    buf += '\n';
  };
  for (const FigureSegment& s : fig.segments) {
    row(kind_name(s.kind), s.index, s.pair_id, s.a, s.b);
  }
  for (const FieldArrow& a : fig.arrows) {
    row("field", -1, -1, a.at, a.dir);
  }
  out << buf;
}

void write_figure_csv(const FigureData& fig, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_figure_csv(fig, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hcone
