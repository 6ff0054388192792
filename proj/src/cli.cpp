#include "hcone/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcone/arcs.hpp"
#include "hcone/calibrate.hpp"
#include "hcone/cone.hpp"
#include "hcone/errors.hpp"
#include "hcone/export.hpp"
#include "hcone/hgroup.hpp"
#include "hcone/jsonio.hpp"
#include "hcone/perimeter.hpp"

namespace hcone::cli {

namespace {

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() &&
             std::isspace(static_cast<unsigned char>(item[used]))) {
        ++used;
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw BadInput("cannot parse " + what + " entry: '" + item + "'");
    }
  }
  if (values.empty()) throw BadInput(what + " list is empty");
  return values;
}

Vec2 parse_point(const std::string& text) {
  const std::vector<double> xy = parse_double_list(text, "--at");
  if (xy.size() != 2) throw BadInput("--at expects x,y");
  return {xy[0], xy[1]};
}

// disk:R | disk:cx,cy,R | rect:x0,x1,y0,y1
Domain2D parse_domain(const std::string& text, int grid) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw BadInput("domain must be disk:... or rect:...: '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::vector<double> v =
      parse_double_list(text.substr(colon + 1), "--domain");
  if (kind == "disk") {
    if (v.size() == 1) return Domain2D::disk({0.0, 0.0}, v[0], grid);
    if (v.size() == 3) return Domain2D::disk({v[0], v[1]}, v[2], grid);
    throw BadInput("disk domain expects disk:R or disk:cx,cy,R");
  }
  if (kind == "rect") {
    if (v.size() == 4) return Domain2D::rectangle(v[0], v[1], v[2], v[3], grid);
    throw BadInput("rect domain expects rect:x0,x1,y0,y1");
  }
  throw BadInput("unknown domain shape: '" + kind + "'");
}

PlanarCurve load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open curve file: " + path);
  PlanarCurve curve;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::vector<double> xy;
    try {
      xy = parse_double_list(line, "curve row");
    } catch (const BadInput&) {
      if (curve.vertices.empty() && lineno == 1) continue;  // header row
      throw;
    }
    if (xy.size() != 2) {
      throw BadInput("curve rows must be x,y (line " +
                     std::to_string(lineno) + " of " + path + ")");
    }
    curve.vertices.push_back({xy[0], xy[1]});
  }
  return curve;
}

std::string region_label(RegionRef r) {
  switch (r.kind) {
    case RegionRef::Kind::JSector:
      return "J[" + std::to_string(r.index) + "]";
    case RegionRef::Kind::ILower:
      return "I_lower[" + std::to_string(r.index) + "]";
    case RegionRef::Kind::IUpper:
      return "I_upper[" + std::to_string(r.index) + "]";
    case RegionRef::Kind::TailGap:
      return "tail_gap";
  }
  return "?";
}

ordered_json vec_json(Vec2 v) { return ordered_json::array({v.x, v.y}); }

void emit(const ordered_json& doc, std::ostream& out) {
  out << format_json(doc) << '\n';
}

const char* singular_kind_name(SingularSet::Kind k) {
  switch (k) {
    case SingularSet::Kind::Empty:
      return "empty";
    case SingularSet::Kind::OriginOnly:
      return "origin_only";
    case SingularSet::Kind::OriginAndRays:
      return "origin_and_rays";
  }
  return "?";
}

ordered_json singular_json(const SingularSet& s) {
  ordered_json j = ordered_json::object();
  j["kind"] = singular_kind_name(s.kind);
  ordered_json rays = ordered_json::array();
  for (double a : s.ray_angles) rays.push_back(a);
  j["ray_angles_rad"] = std::move(rays);
  return j;
}

struct Cmd {
  CLI::App* app{nullptr};
  std::string arcs_path;
  std::string out_path;
  std::string domain{"disk:1"};
  std::string at;
  std::string eps{"0.2,0.1,0.05"};
  std::string ks{"2,4,8,16"};
  std::string curve_path;
  double t0{0.0};
  double radius{1.0};
  double vertical_angle{0.0};
  bool horizontal{false};
  bool with_field{false};
  int grid{512};
  int trials{100};
  int lines{8};
  int angular{64};
  int radial{16};
  int audit_grid{0};
  int probe_arcs{12};
  unsigned long long seed{7};
};

int run_parsed(const Cmd& c, const std::string& name, std::ostream& out);

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  if (const char* env = std::getenv("HCONE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{
      "Minimal cone surfaces over families of circle arcs in the first "
      "Heisenberg group"};
  app.require_subcommand(1);

  // Deque: CLI11 options bind references into these structs, so elements
  // must stay put while later commands are appended.
  std::deque<std::pair<std::string, Cmd>> cmds;
  auto add = [&app, &cmds](const std::string& name,
                           const std::string& desc) -> Cmd& {
    cmds.emplace_back(name, Cmd{});
    Cmd& c = cmds.back().second;
    c.app = app.add_subcommand(name, desc);
    return c;
  };
  auto arcs_opt = [](Cmd& c, bool required = true) {
    auto* opt = c.app->add_option("--arcs", c.arcs_path,
                                  "Arc family JSON file");
    if (required) opt->required();
  };

  {
    Cmd& c = add("eval", "Evaluate the cone graph u at a point");
    arcs_opt(c);
    c.app->add_option("--at", c.at, "Point x,y")->required();
  }
  {
    Cmd& c = add("grad", "One-sided gradient limits of u at a point");
    arcs_opt(c);
    c.app->add_option("--at", c.at, "Point x,y")->required();
  }
  {
    Cmd& c = add("lift", "Horizontally lift a planar polyline CSV");
    c.app->add_option("--curve", c.curve_path, "CSV file with x,y rows")
        ->required();
    c.app->add_option("--t0", c.t0, "Starting height (default 0)");
    c.app->add_option("--out", c.out_path, "Write lifted x,y,t CSV here");
  }
  {
    Cmd& c = add("singular", "Singular set of the cone surface");
    arcs_opt(c);
  }
  {
    Cmd& c = add("check-c1", "Is the cone surface C1?");
    arcs_opt(c);
  }
  {
    Cmd& c = add("classify", "Classify a surface into the C1 trichotomy");
    arcs_opt(c, false);
    c.app->add_option("--vertical-plane", c.vertical_angle,
                      "Vertical plane with this normal angle (radians)");
    c.app->add_flag("--horizontal-plane", c.horizontal,
                    "The horizontal plane t = 0");
  }
  {
    Cmd& c = add("check-calibration",
                 "Verify the calibration-based minimality certificate");
    arcs_opt(c);
    c.app->add_option("--audit-grid", c.audit_grid,
                      "Also run the distributional divergence audit on an "
                      "NxN grid (0 = skip)");
  }
  {
    Cmd& c = add("perimeter", "Sub-Riemannian perimeter of the cone graph");
    arcs_opt(c);
    c.app->add_option("--domain", c.domain, "disk:R, disk:cx,cy,R, or "
                                            "rect:x0,x1,y0,y1 (default disk:1)");
    c.app->add_option("--grid", c.grid, "Quadrature grid resolution");
  }
  {
    Cmd& c = add("perturb", "Randomized bump-perturbation minimality test");
    arcs_opt(c);
    c.app->add_option("--domain", c.domain, "Quadrature domain");
    c.grid = 256;
    c.app->add_option("--grid", c.grid, "Quadrature grid resolution");
    c.app->add_option("--trials", c.trials, "Number of random bumps");
    c.app->add_option("--eps", c.eps,
                      "Comma list of amplitudes; positive entries are "
                      "expanded to +eps and -eps");
    c.app->add_option("--seed", c.seed, "Random seed");
  }
  {
    Cmd& c = add("truncate", "Truncation convergence study for a tail family");
    arcs_opt(c);
    c.app->add_option("--domain", c.domain, "Quadrature domain");
    c.grid = 256;
    c.app->add_option("--grid", c.grid, "Sampling grid resolution");
    c.app->add_option("--ks", c.ks, "Comma list of truncation sizes");
  }
  {
    Cmd& c = add("probe-oscillation",
                 "Gradient oscillation probe near the tail accumulation ray");
    arcs_opt(c);
    c.app->add_option("--radius", c.radius, "Probe radius");
    c.app->add_option("--probe-arcs", c.probe_arcs, "Tail arcs to probe");
  }
  {
    Cmd& c = add("mesh", "Export a triangulated OBJ mesh of the graph");
    arcs_opt(c);
    c.app->add_option("--radius", c.radius, "Disk radius");
    c.app->add_option("--angular", c.angular, "Angular resolution (>= 8)");
    c.app->add_option("--radial", c.radial, "Radial resolution (>= 8)");
    c.app->add_option("--out", c.out_path, "Output OBJ path")->required();
  }
  {
    Cmd& c = add("figure", "Export the ruling-arrangement figure data CSV");
    arcs_opt(c);
    c.app->add_option("--radius", c.radius, "Clip radius");
    c.app->add_flag("--with-field", c.with_field,
                    "Include calibration field arrows");
    c.app->add_option("--lines", c.lines, "Characteristic pairs per arc");
    c.app->add_option("--out", c.out_path, "Output CSV path")->required();
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    for (const auto& [name, c] : cmds) {
      if (c.app->parsed()) return run_parsed(c, name, out);
    }
    err << "no subcommand\n";
    return 2;
  } catch (const NotC1& e) {
    ordered_json j = ordered_json::object();
    j["error"] = e.what();
    emit(j, out);
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

namespace {

int run_parsed(const Cmd& c, const std::string& name, std::ostream& out) {
  ordered_json j = ordered_json::object();

  if (name == "eval") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const Vec2 v = parse_point(c.at);
    j["at"] = vec_json(v);
    j["value"] = cone.evaluate(v);
    emit(j, out);
    return 0;
  }

  if (name == "grad") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const Vec2 v = parse_point(c.at);
    const MultiVec g = cone.gradient(v);
    j["at"] = vec_json(v);
    j["single_valued"] = g.single_valued();
    ordered_json limits = ordered_json::array();
    for (const SidedVec& s : g.limits) {
      ordered_json entry = ordered_json::object();
      entry["region"] = region_label(s.from);
      entry["value"] = vec_json(s.value);
      limits.push_back(std::move(entry));
    }
    j["limits"] = std::move(limits);
    emit(j, out);
    return 0;
  }

  if (name == "lift") {
    const PlanarCurve curve = load_curve_csv(c.curve_path);
    if (curve.vertices.size() < 2) {
      throw BadInput("curve needs at least two vertices: " + c.curve_path);
    }
    const std::vector<HPoint> lifted = lift_curve(curve, c.t0);
    ordered_json pts = ordered_json::array();
    for (const HPoint& p : lifted) {
      pts.push_back(ordered_json::array({p.x, p.y, p.t}));
    }
    j["points"] = std::move(pts);
    j["final_t"] = lifted.back().t;
    const Vec2 start = curve.vertices.front();
    if (start.x == 0.0 && start.y == 0.0) {
      j["balayage_area"] = balayage_area(curve);
    }
    if (!c.out_path.empty()) {
      std::ofstream f(c.out_path);
      if (!f) throw BadInput("cannot open for writing: " + c.out_path);
      std::string buf = "x,y,t\n";
      char row[128];
      for (const HPoint& p : lifted) {
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", p.x, p.y, p.t);
        buf += row;
      }
      f << buf;
      j["path"] = c.out_path;
    }
    emit(j, out);
    return 0;
  }

  if (name == "singular") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    j = singular_json(cone.singular_set());
    emit(j, out);
    return 0;
  }

  if (name == "check-c1") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const C1Report r = cone.is_c1();
    j["c1"] = r.c1;
    j["max_interface_jump"] = r.max_interface_jump;
    if (!r.c1 && r.witness_angle) {
      j["witness_angle_rad"] = *r.witness_angle;
      j["witness_jump"] = vec_json(r.witness_jump);
    }
    emit(j, out);
    return r.c1 ? 0 : 1;
  }

  if (name == "classify") {
    const bool has_arcs = !c.arcs_path.empty();
    const bool has_vertical = c.app->count("--vertical-plane") > 0;
    const int sources = static_cast<int>(has_arcs) +
                        static_cast<int>(has_vertical) +
                        static_cast<int>(c.horizontal);
    if (sources != 1) {
      throw BadInput(
          "classify needs exactly one of --arcs, --vertical-plane, "
          "--horizontal-plane");
    }
    SurfaceClassification result = [&] {
      if (has_vertical) {
        return classify(VerticalPlaneSpec{c.vertical_angle});
      }
      if (c.horizontal) return classify(HorizontalPlaneSpec{});
      return classify(ConeSurface(load_arcs_file(c.arcs_path)));
    }();
    switch (result.kind) {
      case SurfaceClassification::Kind::VerticalPlane:
        j["kind"] = "vertical_plane";
        j["normal_angle_rad"] = result.normal_angle;
        break;
      case SurfaceClassification::Kind::HorizontalPlane:
        j["kind"] = "horizontal_plane";
        break;
      case SurfaceClassification::Kind::ArcCone:
        j["kind"] = "arc_cone";
        break;
    }
    j["singular"] = singular_json(result.singular_set);
    emit(j, out);
    return 0;
  }

  if (name == "check-calibration") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const MinimalityCertificate cert = verify_minimality_certificate(cone);
    bool pass = cert.pass;
    j["pass"] = cert.pass;
    j["max_normal_mismatch"] = cert.max_normal_mismatch;
    j["max_unit_norm_error"] = cert.max_unit_norm_error;
    j["max_ruling_alignment"] = cert.max_ruling_alignment;
    {
      ordered_json d = ordered_json::object();
      d["pass"] = cert.divergence.pass;
      d["tol"] = cert.divergence.tol;
      d["max_fd_abs"] = cert.divergence.max_fd_abs;
      ordered_json regions = ordered_json::array();
      for (const RegionDivergenceCheck& r : cert.divergence.regions) {
        ordered_json entry = ordered_json::object();
        entry["region"] = region_label(r.region);
        entry["closed_form_zero"] = r.closed_form_zero;
        entry["max_fd_abs"] = r.max_fd_abs;
        regions.push_back(std::move(entry));
      }
      d["regions"] = std::move(regions);
      j["divergence"] = std::move(d);
    }
    {
      ordered_json fx = ordered_json::object();
      fx["pass"] = cert.flux.pass;
      fx["tol"] = cert.flux.tol;
      fx["max_abs_flux_sum"] = cert.flux.max_abs_flux_sum;
      ordered_json rays = ordered_json::array();
      for (const InterfaceFluxCheck& r : cert.flux.interfaces) {
        ordered_json entry = ordered_json::object();
        entry["angle_rad"] = r.ray.angle;
        entry["kind"] = r.ray.kind == InterfaceRay::Kind::Bisectrix
                            ? "bisectrix"
                            : "arc_endpoint";
        entry["max_abs_flux_sum"] = r.max_abs_flux_sum;
        rays.push_back(std::move(entry));
      }
      fx["interfaces"] = std::move(rays);
      j["flux"] = std::move(fx);
    }
    if (c.audit_grid > 0) {
      const CalibrationField field =
          build_calibration(cone);
      const DistributionalAudit audit = distributional_divergence_audit(
          field, 20, c.audit_grid);
      pass = pass && audit.pass;
      ordered_json a = ordered_json::object();
      a["pass"] = audit.pass;
      a["tol"] = audit.tol;
      a["grid_cells"] = audit.grid_cells;
      a["max_abs_residual"] = audit.max_abs_residual;
      j["distributional_audit"] = std::move(a);
    }
    emit(j, out);
    return pass ? 0 : 1;
  }

  if (name == "perimeter") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const Domain2D dom = parse_domain(c.domain, c.grid);
    j["domain"] = c.domain;
    j["grid"] = c.grid;
    j["perimeter"] = perimeter_of_graph(graph_of(cone), dom);
    emit(j, out);
    return 0;
  }

  if (name == "perturb") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const Domain2D dom = parse_domain(c.domain, c.grid);
    std::vector<double> eps;
    for (double e : parse_double_list(c.eps, "--eps")) {
      eps.push_back(e);
      if (e > 0.0) eps.push_back(-e);
    }
    const PerturbationReport r =
        perturbation_test(graph_of(cone), dom, c.trials, eps, c.seed);
    j["pass"] = r.pass;
    j["tol"] = r.tol;
    j["plane_noise"] = r.plane_noise;
    j["trials"] = static_cast<int>(r.trials.size());
    j["min_delta"] = r.min_delta;
    {
      ordered_json w = ordered_json::object();
      w["eps"] = r.worst.eps;
      w["delta"] = r.worst.delta;
      w["bump_center"] = vec_json(r.worst.bump.center);
      w["bump_radius"] = r.worst.bump.radius;
      w["bump_amplitude"] = r.worst.bump.amplitude;
      j["worst"] = std::move(w);
    }
    emit(j, out);
    return r.pass ? 0 : 1;
  }

  if (name == "truncate") {
    const ArcFamily fam = load_arcs_file(c.arcs_path);
    const Domain2D dom = parse_domain(c.domain, c.grid);
    std::vector<int> ks;
    for (double k : parse_double_list(c.ks, "--ks")) {
      if (k != static_cast<double>(static_cast<int>(k))) {
        throw BadInput("--ks entries must be integers");
      }
      ks.push_back(static_cast<int>(k));
    }
    const TruncationReport r = truncation_convergence(fam, dom, ks);
    j["pass"] = r.pass;
    j["slab_halfheight"] = r.slab_halfheight;
    ordered_json steps = ordered_json::array();
    for (const TruncationStep& s : r.steps) {
      ordered_json entry = ordered_json::object();
      entry["k_from"] = s.k_from;
      entry["k_to"] = s.k_to;
      entry["sup_diff"] = s.sup_diff;
      entry["tail_bound"] = s.tail_bound;
      entry["l1_slab_diff"] = s.l1_slab_diff;
      steps.push_back(std::move(entry));
    }
    j["steps"] = std::move(steps);
    emit(j, out);
    return r.pass ? 0 : 1;
  }

  if (name == "probe-oscillation") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const OscillationReport r = cone.oscillation_probe(c.radius, c.probe_arcs);
    const bool pass = r.amplitude_persists && r.grad_bounded;
    j["radius"] = r.radius;
    j["grad_bound"] = r.grad_bound;
    j["amplitude_persists"] = r.amplitude_persists;
    j["grad_bounded"] = r.grad_bounded;
    ordered_json arcs = ordered_json::array();
    for (const OscillationReport::ArcProbe& p : r.arcs) {
      ordered_json entry = ordered_json::object();
      entry["tail_index"] = p.tail_index;
      entry["half_angle_rad"] = p.half_angle;
      entry["min_transverse"] = p.min_transverse;
      entry["max_transverse"] = p.max_transverse;
      entry["amplitude_normalized"] = p.amplitude_normalized;
      entry["sup_grad_norm"] = p.sup_grad_norm;
      entry["max_abs_u"] = p.max_abs_u;
      entry["u_bound"] = p.u_bound;
      arcs.push_back(std::move(entry));
    }
    j["arcs"] = std::move(arcs);
    emit(j, out);
    return pass ? 0 : 1;
  }

  if (name == "mesh") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    MeshSpec spec;
    spec.radius = c.radius;
    spec.angular_res = c.angular;
    spec.radial_res = c.radial;
    const SurfaceMesh mesh = build_surface_mesh(cone, spec);
    write_obj(mesh, c.out_path);
    j["vertices"] = static_cast<int>(mesh.vertices.size());
    j["faces"] = static_cast<int>(mesh.faces.size());
    j["snapped_columns"] = mesh.snapped_count;
    j["path"] = c.out_path;
    emit(j, out);
    return 0;
  }

  if (name == "figure") {
    const ConeSurface cone(load_arcs_file(c.arcs_path));
    const FigureData fig =
        build_figure_data(cone, c.radius, c.with_field, c.lines);
    write_figure_csv(fig, c.out_path);
    j["segments"] = static_cast<int>(fig.segments.size());
    j["arrows"] = static_cast<int>(fig.arrows.size());
    j["path"] = c.out_path;
    emit(j, out);
    return 0;
  }

  throw BadInput("unknown subcommand: " + name);
}

}  // namespace

}  // namespace hcone::cli
