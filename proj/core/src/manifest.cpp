#include "framecell/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace framecell {

uint64_t fnv1a(std::string_view bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

nlohmann::json RunManifest::toJson() const {
  nlohmann::json j;
  j["tool"] = "framecell";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["inputs"] = inputHashes;
  j["parameters"] = parameters;
  j["timings_sec"] = timingsSec;
  return j;
}

void write_manifest_file(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << m.toJson().dump(2) << "\n";
}

}  // namespace framecell
