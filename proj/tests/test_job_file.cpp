#include <doctest.h>

#include <json.hpp>

#include "framecell/job_file.hpp"
#include "framecell/manifest.hpp"

using namespace framecell;
using nlohmann::json;

namespace {

json validDoc() {
  return json::parse(R"({
    "version": 1,
    "units": {"length": "mm", "force": "N", "modulus": "MPa", "angle": "rad"},
    "materials": {"steel": {"E": 2.0e5, "nu": 0.3}},
    "sections": {
      "solid": {"type": "circular", "radius": 30.0},
      "tube": {"type": "hollow_circular", "r_in": 20.0, "r_out": 30.0}
    },
    "frame": {
      "nodes": [
        {"id": 0, "x": [0, 0, 0]},
        {"id": 1, "x": [100, 0, 0]},
        {"id": 2, "x": [200, 0, 0]}
      ],
      "elements": [
        {"a": 0, "b": 1, "material": "steel", "section": "solid"},
        {"a": 1, "b": 2, "material": "steel", "section": "tube", "ref_vec": [0, 0, 1]}
      ],
      "supports": [{"node": 0, "fix": [true, true, true, true, true, true]}],
      "loads": [{"node": 2, "force": [0, 1, 0], "moment": [0, 0, 100]}]
    },
    "substructures": [
      {
        "name": "joint",
        "geometry": {"type": "cylinder", "a": [100, 0, 0], "b": [200, 0, 0], "radius": 30.0},
        "material": "steel",
        "interfaces": [
          {"node": 1, "centroid": [100, 0, 0], "normal": [-1, 0, 0], "radius": 30.0},
          {"node": 2, "centroid": [200, 0, 0], "normal": [1, 0, 0], "radius": 30.0}
        ],
        "fcm": {"resolution": [8, 4, 4], "p": 2, "octree_depth": 2}
      }
    ],
    "outputs": {"local_stress": false}
  })");
}

}  // namespace

TEST_CASE("valid document loads with all pieces") {
  const TwoScaleJob job = load_job(validDoc(), ".");
  CHECK(job.frame.nodes.size() == 3);
  CHECK(job.frame.elements.size() == 2);
  CHECK(job.frame.elements[1].section.A == doctest::Approx(section_hollow_circular(20, 30, 0.3).A));
  CHECK(job.frame.supports.count(0) == 1);
  CHECK(job.frame.loads.at(2)[5] == 100.0);
  REQUIRE(job.substructures.size() == 1);
  CHECK(job.substructures[0].name == "joint");
  REQUIRE(job.substructures[0].spec.has_value());
  CHECK(job.substructures[0].spec->fcm.p == 2);
  CHECK(job.substructures[0].spec->fcm.beta == 1e14);  // default
  CHECK(job.substructures[0].attachNodes == std::vector<int>{1, 2});
  CHECK_FALSE(job.wantLocalStress);
}

TEST_CASE("schema rejections carry locations") {
  auto expectReject = [](json doc, const std::string& fragment) {
    try {
      load_job(doc, ".");
      FAIL_CHECK("expected JobSchemaError containing '" << fragment << "'");
    } catch (const JobSchemaError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };

  json unknownTop = validDoc();
  unknownTop["extra"] = 1;
  expectReject(unknownTop, "unknown key 'extra'");

  json unknownNested = validDoc();
  unknownNested["frame"]["nodes"][0]["color"] = "red";
  expectReject(unknownNested, "color");

  json badUnits = validDoc();
  badUnits["units"]["length"] = "m";
  expectReject(badUnits, "units/length");

  json badVersion = validDoc();
  badVersion["version"] = 2;
  expectReject(badVersion, "version");

  json missingNode = validDoc();
  missingNode["frame"]["elements"][0]["a"] = 77;
  expectReject(missingNode, "undefined node 77");

  json badMaterial = validDoc();
  badMaterial["frame"]["elements"][0]["material"] = "unobtanium";
  expectReject(badMaterial, "unobtanium");

  json dupNode = validDoc();
  dupNode["frame"]["nodes"].push_back({{"id", 0}, {"x", {1, 1, 1}}});
  expectReject(dupNode, "duplicate node id 0");

  json noInterfaces = validDoc();
  noInterfaces["substructures"][0]["interfaces"] = json::array();
  expectReject(noInterfaces, "interfaces");

  json badShape = validDoc();
  badShape["substructures"][0]["geometry"]["type"] = "torus";
  expectReject(badShape, "unknown shape type 'torus'");

  json notNumbers = validDoc();
  notNumbers["frame"]["nodes"][0]["x"] = {"a", "b", "c"};
  expectReject(notNumbers, "expected");
}

TEST_CASE("composite geometry parses recursively") {
  json doc = validDoc();
  doc["substructures"][0]["geometry"] = json::parse(R"({
    "type": "difference",
    "shapes": [
      {"type": "union", "shapes": [
        {"type": "sphere", "center": [150, 0, 0], "radius": 40.0},
        {"type": "cylinder", "a": [100, 0, 0], "b": [200, 0, 0], "radius": 20.0}
      ]},
      {"type": "sphere", "center": [150, 0, 0], "radius": 25.0}
    ]
  })");
  const TwoScaleJob job = load_job(doc, ".");
  const Domain& d = job.substructures[0].spec->domain;
  CHECK(d.inside(Vec3(150, 0, 30)));        // shell of the big sphere
  CHECK_FALSE(d.inside(Vec3(150, 0, 22)));  // carved interior, inside bore? r=22 > 20 cyl
  CHECK(d.inside(Vec3(110, 0, 0)));         // arm region outside the carved sphere
}

TEST_CASE("manifests are stable apart from timings") {
  RunManifest a;
  a.command = "condense";
  a.inputHashes["job"] = hex64(fnv1a("payload"));
  a.parameters["threads"] = 2;
  a.timingsSec["stage"] = 1.25;

  RunManifest b = a;
  b.timingsSec["stage"] = 9.75;

  json ja = a.toJson(), jb = b.toJson();
  ja.erase("timings_sec");
  jb.erase("timings_sec");
  CHECK(ja.dump() == jb.dump());
  CHECK(a.toJson()["version"] == kToolVersion);

  CHECK(fnv1a("payload") == fnv1a(std::string("payload")));
  CHECK(fnv1a("a") != fnv1a("b"));
  CHECK(hex64(0).size() == 16);
}
