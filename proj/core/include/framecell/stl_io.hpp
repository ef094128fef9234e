#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "framecell/geometry.hpp"

namespace framecell {

/// Malformed STL content. `byteOffset` locates the failure in the input.
class StlParseError : public std::runtime_error {
 public:
  StlParseError(const std::string& what, size_t byteOffset)
      : std::runtime_error(what + " (byte offset " + std::to_string(byteOffset) + ")"),
        byteOffset_(byteOffset) {}
  size_t byteOffset() const { return byteOffset_; }

 private:
  size_t byteOffset_;
};

/// Parses binary or text STL, detected by content, not extension.
/// Vertex coordinates are preserved bit-exactly from the input.
TriangleSurface load_triangle_surface(std::string_view bytes);

TriangleSurface load_triangle_surface_file(const std::string& path);

}  // namespace framecell
