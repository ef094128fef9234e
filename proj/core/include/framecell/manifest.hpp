#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace framecell {

inline constexpr const char* kToolVersion = "0.1.0";

uint64_t fnv1a(std::string_view bytes);
std::string hex64(uint64_t v);

/// FNV-1a of a file's bytes. Throws when the file cannot be read.
uint64_t hash_file(const std::string& path);

/// Record of one command invocation: what went in, with which parameters,
/// and how long the stages took. Identical inputs and tool version give an
/// identical manifest except for the "timings" object.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> inputHashes;  // label -> 16-digit hex
  nlohmann::json parameters;                       // echo of effective parameters
  std::map<std::string, double> timingsSec;

  nlohmann::json toJson() const;
};

void write_manifest_file(const std::string& path, const RunManifest& m);

}  // namespace framecell
