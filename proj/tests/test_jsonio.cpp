// Arc-family JSON round-trips: degree/radian input variants, schema
// errors, tail handling, and byte-stable normalized emission.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "hcone/arcs.hpp"
#include "hcone/errors.hpp"
#include "hcone/geometry.hpp"
#include "hcone/jsonio.hpp"

using namespace hcone;

namespace {

ordered_json parse(const std::string& text) {
  return ordered_json::parse(text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const char* name) {
  return std::string("jsonio_scratch_") + name;
}

}  // namespace

TEST_CASE("radian fields parse to the same family as degree fields") {
  const ArcFamily rad = arcs_from_json(parse(
      R"({"arcs": [{"center_rad": 3.1415926535897931,
                    "half_angle_rad": 1.5707963267948966}]})"));
  const ArcFamily deg = arcs_from_json(parse(
      R"({"arcs": [{"center_deg": 180.0, "half_angle_deg": 90.0}]})"));
  REQUIRE(rad.prefix_size() == 1);
  REQUIRE(deg.prefix_size() == 1);
  CHECK(deg.arcs()[0].center == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(deg.arcs()[0].half_angle ==
        doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(rad.arcs()[0].center == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("mixed rad and deg fields across arcs are accepted") {
  const ArcFamily fam = arcs_from_json(parse(
      R"({"arcs": [{"center_rad": 0.0, "half_angle_deg": 30.0},
                   {"center_deg": 180.0, "half_angle_rad": 0.5}]})"));
  CHECK(fam.prefix_size() == 2);
  CHECK(fam.arcs()[0].half_angle == doctest::Approx(kPi / 6.0));
  CHECK(fam.arcs()[1].half_angle == 0.5);
}

TEST_CASE("schema violations throw BadInput") {
  // Both unit variants of the same angle.
  CHECK_THROWS_AS(arcs_from_json(parse(
                      R"({"arcs": [{"center_rad": 0.0, "center_deg": 0.0,
                                    "half_angle_rad": 0.3}]})")),
                  BadInput);
  // Neither variant.
  CHECK_THROWS_AS(
      arcs_from_json(parse(R"({"arcs": [{"half_angle_rad": 0.3}]})")),
      BadInput);
  // Angle is not a number.
  CHECK_THROWS_AS(arcs_from_json(parse(
                      R"({"arcs": [{"center_rad": "x",
                                    "half_angle_rad": 0.3}]})")),
                  BadInput);
  // Root is not an object / arcs is not an array.
  CHECK_THROWS_AS(arcs_from_json(parse("[]")), BadInput);
  CHECK_THROWS_AS(arcs_from_json(parse(R"({"arcs": 3})")), BadInput);
  // Tail missing a field.
  CHECK_THROWS_AS(arcs_from_json(parse(
                      R"({"arcs": [], "tail": {"accumulate_at_rad": 1.0,
                          "first_center_rad": 2.0, "ratio": 0.5}})")),
                  BadInput);
}

TEST_CASE("family validation errors propagate through parsing") {
  CHECK_THROWS_AS(arcs_from_json(parse(
                      R"({"arcs": [{"center_rad": 0.0,
                                    "half_angle_rad": 4.0}]})")),
                  BadHalfAngle);
  CHECK_THROWS_AS(arcs_from_json(parse(
                      R"({"arcs": [{"center_rad": 0.0, "half_angle_rad": 1.0},
                                   {"center_rad": 0.5,
                                    "half_angle_rad": 1.0}]})")),
                  OverlappingArcs);
}

TEST_CASE("tail may be absent, null, or an object") {
  CHECK_FALSE(arcs_from_json(parse(R"({"arcs": []})")).has_tail());
  CHECK_FALSE(
      arcs_from_json(parse(R"({"arcs": [], "tail": null})")).has_tail());
  const ArcFamily fam = arcs_from_json(parse(
      R"({"arcs": [], "tail": {"accumulate_at_rad": 1.0,
          "first_center_rad": 2.0, "ratio": 0.5,
          "first_half_angle_rad": 0.3}})"));
  REQUIRE(fam.has_tail());
  CHECK(fam.tail().accumulate_at == 1.0);
  CHECK(fam.tail().ratio == 0.5);
  // Degree variants work inside the tail too.
  const ArcFamily deg = arcs_from_json(parse(
      R"({"arcs": [], "tail": {"accumulate_at_deg": 180.0,
          "first_center_deg": 90.0, "ratio": 0.5,
          "first_half_angle_deg": 10.0}})"));
  CHECK(deg.tail().accumulate_at == doctest::Approx(kPi));
}

TEST_CASE("emission is normalized to radians in family order") {
  const ArcFamily fam = arcs_from_json(parse(
      R"({"arcs": [{"center_deg": 300.0, "half_angle_deg": 20.0},
                   {"center_deg": 60.0, "half_angle_deg": 30.0}]})"));
  const ordered_json doc = arcs_to_json(fam);
  REQUIRE(doc.contains("arcs"));
  REQUIRE(doc["arcs"].size() == 2);
  for (const auto& arc : doc["arcs"]) {
    CHECK(arc.contains("center_rad"));
    CHECK(arc.contains("half_angle_rad"));
    CHECK_FALSE(arc.contains("center_deg"));
  }
  // Family order is sorted by center.
  CHECK(doc["arcs"][0]["center_rad"].get<double>() <
        doc["arcs"][1]["center_rad"].get<double>());
  CHECK(doc["tail"].is_null());
}

TEST_CASE("load - save - load - save is byte stable") {
  // Start from a deliberately non-normalized document.
  const std::string p0 = temp_path("a.json");
  const std::string p1 = temp_path("b.json");
  const std::string p2 = temp_path("c.json");
  {
    std::ofstream out(p0);
    out << R"({"tail": null,
               "arcs": [{"center_deg": 165.0, "half_angle_deg": 35.0}]})";
  }
  save_arcs_file(load_arcs_file(p0), p1);
  save_arcs_file(load_arcs_file(p1), p2);
  const std::string b1 = slurp(p1);
  const std::string b2 = slurp(p2);
  CHECK(b1 == b2);
  CHECK(!b1.empty());
  CHECK(b1.back() == '\n');
  std::remove(p0.c_str());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("seventeen significant digits survive the round trip") {
  const double center = 2.8797932657906435;   // irrational-looking angle
  const double half = 0.61086523819801536;
  const ArcFamily fam = ArcFamily::validate({{center, half}});
  const ArcFamily back = arcs_from_json(arcs_to_json(fam));
  CHECK(back.arcs()[0].center == center);      // bitwise
  CHECK(back.arcs()[0].half_angle == half);    // bitwise
}

TEST_CASE("format_json is deterministic and key-order preserving") {
  ordered_json doc = ordered_json::object();
  doc["zeta"] = 1.0 / 3.0;
  doc["alpha"] = ordered_json::array({1, 2.5, "s"});
  doc["nested"] = ordered_json::object();
  doc["nested"]["flag"] = true;
  const std::string a = format_json(doc);
  const std::string b = format_json(doc);
  CHECK(a == b);
  // Insertion order, not alphabetical.
  CHECK(a.find("zeta") < a.find("alpha"));
  CHECK(a.find("0.33333333333333331") != std::string::npos);
  // Non-finite numbers degrade to null rather than invalid JSON.
  ordered_json bad = ordered_json::object();
  bad["inf"] = std::numeric_limits<double>::infinity();
  CHECK(format_json(bad).find("null") != std::string::npos);
}

TEST_CASE("missing file and malformed JSON map to BadInput") {
  CHECK_THROWS_AS(load_arcs_file("does_not_exist_anywhere.json"), BadInput);
  const std::string p = temp_path("junk.json");
  {
    std::ofstream out(p);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_arcs_file(p), BadInput);
  std::remove(p.c_str());
}
