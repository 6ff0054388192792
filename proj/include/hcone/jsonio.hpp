#pragma once

// JSON serialization of arc families and deterministic JSON formatting for
// reports.
//
// Arc-family documents look like
//
//   {
//     "arcs": [
//       {"center_rad": 0.0, "half_angle_rad": 1.5707963267948966},
//       {"center_deg": 180.0, "half_angle_deg": 90.0}
//     ],
//     "tail": {
//       "accumulate_at_rad": 1.0,
//       "first_center_rad": 2.0,
//       "ratio": 0.5,
//       "first_half_angle_rad": 0.3
//     }
//   }
//
// Every angle accepts a `_rad` or `_deg` variant; `tail` may be null or
// absent.  Emission is normalized: radians only, arcs in the family's
// sorted order, numbers printed with up to 17 significant digits — so
// load -> save -> load -> save is byte-stable.

#include <string>

#include "hcone/arcs.hpp"
#include "json.hpp"

namespace hcone {

using ordered_json = nlohmann::ordered_json;

// Throws BadInput on schema violations; family validation errors
// (BadHalfAngle, OverlappingArcs, BadTail) propagate.
ArcFamily arcs_from_json(const ordered_json& doc);
ordered_json arcs_to_json(const ArcFamily& family);

// File variants; throw BadInput when the file cannot be read/parsed or
// std::runtime_error when it cannot be written.
ArcFamily load_arcs_file(const std::string& path);
void save_arcs_file(const ArcFamily& family, const std::string& path);

// Deterministic pretty-printer: 2-space indent, keys in insertion order,
// floating-point numbers via %.17g.
std::string format_json(const ordered_json& doc, int indent = 0);

}  // namespace hcone
