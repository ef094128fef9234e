#include "framecell/job_file.hpp"

#include <filesystem>
#include <fstream>

#include "framecell/matrix_io.hpp"
#include "framecell/stl_io.hpp"

namespace framecell {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& loc, const std::string& what) {
  throw JobSchemaError(loc, what);
}

const json& member(const json& obj, const char* key, const std::string& loc) {
  if (!obj.is_object()) fail(loc, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(loc, std::string("missing key '") + key + "'");
  return *it;
}

void rejectUnknown(const json& obj, std::initializer_list<const char*> allowed,
                   const std::string& loc) {
  if (!obj.is_object()) fail(loc, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(loc, "unknown key '" + key + "'");
  }
}

double numberAt(const json& j, const std::string& loc) {
  if (!j.is_number()) fail(loc, "expected a number");
  return j.get<double>();
}

double number(const json& obj, const char* key, const std::string& loc) {
  return numberAt(member(obj, key, loc), loc + "/" + key);
}

double numberOr(const json& obj, const char* key, double dflt, const std::string& loc) {
  if (!obj.contains(key)) return dflt;
  return numberAt(obj[key], loc + "/" + key);
}

int integer(const json& obj, const char* key, const std::string& loc) {
  const json& j = member(obj, key, loc);
  if (!j.is_number_integer()) fail(loc + "/" + key, "expected an integer");
  return j.get<int>();
}

int integerOr(const json& obj, const char* key, int dflt, const std::string& loc) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer()) fail(loc + "/" + key, "expected an integer");
  return obj[key].get<int>();
}

std::string text(const json& obj, const char* key, const std::string& loc) {
  const json& j = member(obj, key, loc);
  if (!j.is_string()) fail(loc + "/" + key, "expected a string");
  return j.get<std::string>();
}

Vec3 vec3(const json& obj, const char* key, const std::string& loc) {
  const json& j = member(obj, key, loc);
  if (!j.is_array() || j.size() != 3) fail(loc + "/" + key, "expected an array of 3 numbers");
  Vec3 v;
  for (int d = 0; d < 3; ++d) v[d] = numberAt(j[d], loc + "/" + key);
  return v;
}

ImplicitShape parseShape(const json& g, const std::string& loc) {
  const std::string type = text(g, "type", loc);
  if (type == "sphere") {
    rejectUnknown(g, {"type", "center", "radius"}, loc);
    return ImplicitShape::sphere(vec3(g, "center", loc), number(g, "radius", loc));
  }
  if (type == "cylinder") {
    rejectUnknown(g, {"type", "a", "b", "radius"}, loc);
    return ImplicitShape::cylinder(vec3(g, "a", loc), vec3(g, "b", loc), number(g, "radius", loc));
  }
  if (type == "hollow_cylinder") {
    rejectUnknown(g, {"type", "a", "b", "r_in", "r_out"}, loc);
    return ImplicitShape::hollowCylinder(vec3(g, "a", loc), vec3(g, "b", loc),
                                         number(g, "r_in", loc), number(g, "r_out", loc));
  }
  if (type == "box") {
    rejectUnknown(g, {"type", "lo", "hi"}, loc);
    return ImplicitShape::box(vec3(g, "lo", loc), vec3(g, "hi", loc));
  }
  if (type == "union" || type == "intersection" || type == "difference") {
    rejectUnknown(g, {"type", "shapes"}, loc);
    const json& shapes = member(g, "shapes", loc);
    if (!shapes.is_array() || shapes.size() < 2)
      fail(loc + "/shapes", "expected an array of at least 2 shapes");
    ImplicitShape acc = parseShape(shapes[0], loc + "/shapes/0");
    for (size_t i = 1; i < shapes.size(); ++i) {
      ImplicitShape s = parseShape(shapes[i], loc + "/shapes/" + std::to_string(i));
      if (type == "union")
        acc = acc.unite(s);
      else if (type == "intersection")
        acc = acc.intersect(s);
      else
        acc = acc.subtract(s);
    }
    return acc;
  }
  fail(loc + "/type", "unknown shape type '" + type + "'");
}

Material parseMaterial(const json& m, const std::string& loc) {
  rejectUnknown(m, {"E", "nu"}, loc);
  return Material(number(m, "E", loc), number(m, "nu", loc));
}

struct SectionDef {
  bool hollow = false;
  double r = 0.0, rIn = 0.0, rOut = 0.0;

  CrossSection resolve(double nu) const {
    return hollow ? section_hollow_circular(rIn, rOut, nu) : section_circular(r, nu);
  }
};

SectionDef parseSection(const json& s, const std::string& loc) {
  SectionDef def;
  const std::string type = text(s, "type", loc);
  if (type == "circular") {
    rejectUnknown(s, {"type", "radius"}, loc);
    def.r = number(s, "radius", loc);
  } else if (type == "hollow_circular") {
    rejectUnknown(s, {"type", "r_in", "r_out"}, loc);
    def.hollow = true;
    def.rIn = number(s, "r_in", loc);
    def.rOut = number(s, "r_out", loc);
  } else {
    fail(loc + "/type", "unknown section type '" + type + "'");
  }
  return def;
}

void checkUnits(const json& u, const std::string& loc) {
  rejectUnknown(u, {"length", "force", "modulus", "angle"}, loc);
  auto one = [&](const char* key, const char* want) {
    if (text(u, key, loc) != want)
      fail(loc + "/" + key, std::string("must be '") + want + "' in this schema version");
  };
  one("length", "mm");
  one("force", "N");
  one("modulus", "MPa");
  one("angle", "rad");
}

}  // namespace

TwoScaleJob load_job(const json& doc, const std::string& baseDir) {
  rejectUnknown(doc,
                {"version", "units", "materials", "sections", "frame", "substructures", "outputs"},
                "/");
  if (integer(doc, "version", "/") != 1) fail("/version", "unsupported version");
  checkUnits(member(doc, "units", "/"), "/units");

  std::map<std::string, Material> materials;
  for (const auto& [name, m] : member(doc, "materials", "/").items())
    materials.emplace(name, parseMaterial(m, "/materials/" + name));

  std::map<std::string, SectionDef> sections;
  if (doc.contains("sections"))
    for (const auto& [name, s] : doc["sections"].items())
      sections.emplace(name, parseSection(s, "/sections/" + name));

  auto materialOf = [&](const json& obj, const std::string& loc) -> const Material& {
    const std::string name = text(obj, "material", loc);
    auto it = materials.find(name);
    if (it == materials.end()) fail(loc + "/material", "undefined material '" + name + "'");
    return it->second;
  };

  TwoScaleJob job;

  const json& frame = member(doc, "frame", "/");
  rejectUnknown(frame, {"nodes", "elements", "supports", "loads"}, "/frame");

  const json& nodes = member(frame, "nodes", "/frame");
  if (!nodes.is_array()) fail("/frame/nodes", "expected an array");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string loc = "/frame/nodes/" + std::to_string(i);
    rejectUnknown(nodes[i], {"id", "x"}, loc);
    const int id = integer(nodes[i], "id", loc);
    if (!job.frame.nodes.emplace(id, vec3(nodes[i], "x", loc)).second)
      fail(loc, "duplicate node id " + std::to_string(id));
  }
  auto checkNode = [&](int id, const std::string& loc) {
    if (!job.frame.nodes.count(id)) fail(loc, "undefined node " + std::to_string(id));
    return id;
  };

  if (frame.contains("elements"))
    for (size_t i = 0; i < frame["elements"].size(); ++i) {
      const json& e = frame["elements"][i];
      const std::string loc = "/frame/elements/" + std::to_string(i);
      rejectUnknown(e, {"a", "b", "material", "section", "ref_vec"}, loc);
      BeamElement el;
      el.nodeA = checkNode(integer(e, "a", loc), loc + "/a");
      el.nodeB = checkNode(integer(e, "b", loc), loc + "/b");
      el.material = materialOf(e, loc);
      const std::string sec = text(e, "section", loc);
      auto it = sections.find(sec);
      if (it == sections.end()) fail(loc + "/section", "undefined section '" + sec + "'");
      el.section = it->second.resolve(el.material.nu);
      if (e.contains("ref_vec")) el.refVec = vec3(e, "ref_vec", loc);
      job.frame.elements.push_back(el);
    }

  if (frame.contains("supports"))
    for (size_t i = 0; i < frame["supports"].size(); ++i) {
      const json& s = frame["supports"][i];
      const std::string loc = "/frame/supports/" + std::to_string(i);
      rejectUnknown(s, {"node", "fix"}, loc);
      const int id = checkNode(integer(s, "node", loc), loc + "/node");
      const json& fix = member(s, "fix", loc);
      if (!fix.is_array() || fix.size() != 6) fail(loc + "/fix", "expected 6 booleans");
      std::array<bool, 6> flags{};
      for (int d = 0; d < 6; ++d) {
        if (!fix[d].is_boolean()) fail(loc + "/fix", "expected 6 booleans");
        flags[d] = fix[d].get<bool>();
      }
      job.frame.supports[id] = flags;
    }

  if (frame.contains("loads"))
    for (size_t i = 0; i < frame["loads"].size(); ++i) {
      const json& l = frame["loads"][i];
      const std::string loc = "/frame/loads/" + std::to_string(i);
      rejectUnknown(l, {"node", "force", "moment"}, loc);
      const int id = checkNode(integer(l, "node", loc), loc + "/node");
      Vec6 f = Vec6::Zero();
      if (l.contains("force")) f.head<3>() = vec3(l, "force", loc);
      if (l.contains("moment")) f.tail<3>() = vec3(l, "moment", loc);
      auto [it, inserted] = job.frame.loads.emplace(id, f);
      if (!inserted) it->second += f;
    }

  if (doc.contains("substructures")) {
    const json& subs = doc["substructures"];
    if (!subs.is_array()) fail("/substructures", "expected an array");
    for (size_t i = 0; i < subs.size(); ++i) {
      const json& s = subs[i];
      const std::string loc = "/substructures/" + std::to_string(i);
      rejectUnknown(
          s, {"name", "geometry", "matrix", "material", "alpha_exponent", "interfaces", "fcm"},
          loc);

      SubstructureInstance inst;
      inst.name = s.contains("name") ? text(s, "name", loc) : ("substructure-" + std::to_string(i));

      const json& ifs = member(s, "interfaces", loc);
      if (!ifs.is_array() || ifs.empty()) fail(loc + "/interfaces", "expected a non-empty array");

      std::vector<InterfaceSection> interfaces;
      for (size_t q = 0; q < ifs.size(); ++q) {
        const std::string iloc = loc + "/interfaces/" + std::to_string(q);
        rejectUnknown(ifs[q], {"node", "centroid", "normal", "radius"}, iloc);
        InterfaceSection sec;
        sec.globalNodeId = checkNode(integer(ifs[q], "node", iloc), iloc + "/node");
        sec.centroid = vec3(ifs[q], "centroid", iloc);
        sec.normal = vec3(ifs[q], "normal", iloc).normalized();
        sec.shape = number(ifs[q], "radius", iloc);
        inst.attachNodes.push_back(sec.globalNodeId);
        interfaces.push_back(std::move(sec));
      }

      if (s.contains("matrix")) {
        if (s.contains("geometry")) fail(loc, "'matrix' and 'geometry' are mutually exclusive");
        const std::string path = text(s, "matrix", loc);
        inst.precomputed =
            read_condensed_file((std::filesystem::path(baseDir) / path).string());
        if (inst.precomputed->k() != 6 * int(interfaces.size()))
          fail(loc + "/matrix", "matrix size does not match the interface count");
      } else {
        const json& g = member(s, "geometry", loc);
        const Material& mat = materialOf(s, loc);
        const int alpha = integerOr(s, "alpha_exponent", 10, loc);

        SubstructureSpec spec = [&]() -> SubstructureSpec {
          if (text(g, "type", loc + "/geometry") == "stl") {
            rejectUnknown(g, {"type", "path"}, loc + "/geometry");
            const std::string path = text(g, "path", loc + "/geometry");
            TriangleSurface surf =
                load_triangle_surface_file((std::filesystem::path(baseDir) / path).string());
            return SubstructureSpec{Domain(std::move(surf), mat, alpha), {}, {}};
          }
          return SubstructureSpec{Domain(parseShape(g, loc + "/geometry"), mat, alpha), {}, {}};
        }();
        spec.interfaces = std::move(interfaces);

        if (s.contains("fcm")) {
          const json& f = s["fcm"];
          const std::string floc = loc + "/fcm";
          rejectUnknown(f, {"resolution", "p", "octree_depth", "beta", "margin"}, floc);
          if (f.contains("resolution")) {
            const json& r = f["resolution"];
            if (!r.is_array() || r.size() != 3)
              fail(floc + "/resolution", "expected an array of 3 integers");
            for (int d = 0; d < 3; ++d) spec.fcm.resolution[d] = r[d].get<int>();
          }
          spec.fcm.p = integerOr(f, "p", spec.fcm.p, floc);
          spec.fcm.octreeDepth = integerOr(f, "octree_depth", spec.fcm.octreeDepth, floc);
          spec.fcm.beta = numberOr(f, "beta", spec.fcm.beta, floc);
          spec.fcm.margin = numberOr(f, "margin", spec.fcm.margin, floc);
        }
        inst.spec = std::move(spec);
      }
      job.substructures.push_back(std::move(inst));
    }
  }

  if (doc.contains("outputs")) {
    rejectUnknown(doc["outputs"], {"local_stress"}, "/outputs");
    if (doc["outputs"].contains("local_stress")) {
      if (!doc["outputs"]["local_stress"].is_boolean())
        fail("/outputs/local_stress", "expected a boolean");
      job.wantLocalStress = doc["outputs"]["local_stress"].get<bool>();
    }
  }
  return job;
}

TwoScaleJob load_job_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JobSchemaError("/", "cannot open: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw JobSchemaError("/", std::string("not valid JSON: ") + e.what());
  }
  return load_job(doc, std::filesystem::path(path).parent_path().string());
}

nlohmann::json job_parameter_echo(const nlohmann::json& doc) {
  // nlohmann objects are key-sorted, so dumping the parsed document is
  // already canonical.
  return doc;
}

}  // namespace framecell
