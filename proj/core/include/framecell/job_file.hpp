#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "framecell/twoscale.hpp"

namespace framecell {

/// Schema violation with a JSON-pointer-style location.
class JobSchemaError : public std::runtime_error {
 public:
  JobSchemaError(const std::string& location, const std::string& what)
      : std::runtime_error("job file: " + location + ": " + what), location(location) {}
  std::string location;
};

/// Parses and validates a job document. Unknown keys are rejected, unit
/// annotations are mandatory and every physical quantity is interpreted in
/// mm / N / MPa / rad. `baseDir` resolves relative geometry paths.
TwoScaleJob load_job(const nlohmann::json& doc, const std::string& baseDir);

TwoScaleJob load_job_file(const std::string& path);

/// Canonical re-serialization of the validated document, used for the
/// parameter echo in manifests.
nlohmann::json job_parameter_echo(const nlohmann::json& doc);

}  // namespace framecell
