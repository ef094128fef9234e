#pragma once

#include <iosfwd>
#include <string>

#include "framecell/fcm/field.hpp"

namespace framecell::fcm {

/// Legacy VTK unstructured grid (text): active cells as hexahedra with
/// point-data vectors u and point-data scalars vonMises. Output is
/// deterministic and full precision.
void write_vtk(std::ostream& out, const ElasticField& field, const std::string& title = "framecell");

void write_vtk_file(const std::string& path, const ElasticField& field,
                    const std::string& title = "framecell");

}  // namespace framecell::fcm
