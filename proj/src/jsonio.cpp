#include "hcone/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcone/errors.hpp"
#include "hcone/geometry.hpp"

namespace hcone {

namespace {

double require_number(const ordered_json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw BadInput("missing numeric field: " + key);
  }
  return it->get<double>();
}

// Fetch an angle given as `<name>_rad` or `<name>_deg`.
double require_angle(const ordered_json& obj, const std::string& name) {
  const auto rad = obj.find(name + "_rad");
  const auto deg = obj.find(name + "_deg");
  if (rad != obj.end() && deg != obj.end()) {
    throw BadInput("give " + name + " in radians or degrees, not both");
  }
  if (rad != obj.end()) {
    if (!rad->is_number()) throw BadInput(name + "_rad must be a number");
    return rad->get<double>();
  }
  if (deg != obj.end()) {
    if (!deg->is_number()) throw BadInput(name + "_deg must be a number");
    return deg->get<double>() * kPi / 180.0;
  }
  throw BadInput("missing angle field: " + name + "_rad or " + name + "_deg");
}

}  // namespace

ArcFamily arcs_from_json(const ordered_json& doc) {
  if (!doc.is_object()) throw BadInput("arc family document must be an object");

  std::vector<Arc> arcs;
  const auto arcs_it = doc.find("arcs");
  if (arcs_it != doc.end() && !arcs_it->is_null()) {
    if (!arcs_it->is_array()) throw BadInput("\"arcs\" must be an array");
    for (const ordered_json& entry : *arcs_it) {
      if (!entry.is_object()) throw BadInput("arc entries must be objects");
      arcs.push_back(
          {require_angle(entry, "center"), require_angle(entry, "half_angle")});
    }
  }

  const auto tail_it = doc.find("tail");
  if (tail_it == doc.end() || tail_it->is_null()) {
    return ArcFamily::validate(std::move(arcs));
  }
  if (!tail_it->is_object()) throw BadInput("\"tail\" must be an object or null");
  TailRule tail;
  tail.accumulate_at = require_angle(*tail_it, "accumulate_at");
  tail.first_center = require_angle(*tail_it, "first_center");
  tail.ratio = require_number(*tail_it, "ratio");
  tail.first_half_angle = require_angle(*tail_it, "first_half_angle");
  return ArcFamily::validate(std::move(arcs), tail);
}

ordered_json arcs_to_json(const ArcFamily& family) {
  ordered_json doc = ordered_json::object();
  ordered_json arcs = ordered_json::array();
  for (const Arc& a : family.arcs()) {
    ordered_json entry = ordered_json::object();
    entry["center_rad"] = a.center;
    entry["half_angle_rad"] = a.half_angle;
    arcs.push_back(std::move(entry));
  }
  doc["arcs"] = std::move(arcs);
  if (family.has_tail()) {
    const TailRule& t = family.tail();
    ordered_json tail = ordered_json::object();
    tail["accumulate_at_rad"] = t.accumulate_at;
    tail["first_center_rad"] = t.first_center;
    tail["ratio"] = t.ratio;
    tail["first_half_angle_rad"] = t.first_half_angle;
    doc["tail"] = std::move(tail);
  } else {
    doc["tail"] = nullptr;
  }
  return doc;
}

ArcFamily load_arcs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open arcs file: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw BadInput("invalid JSON in " + path + ": " + e.what());
  }
  return arcs_from_json(doc);
}

void save_arcs_file(const ArcFamily& family, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << format_json(arcs_to_json(family)) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

void format_value(const ordered_json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad_in;
        out += ordered_json(it.key()).dump();
        out += ": ";
        format_value(it.value(), depth + 1, out);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        format_value(v[i], depth + 1, out);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out += buf;
      } else {
        out += "null";  // JSON has no Inf/NaN literals
      }
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string format_json(const ordered_json& doc, int indent) {
  std::string out;
  format_value(doc, indent, out);
  return out;
}

}  // namespace hcone
