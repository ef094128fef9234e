#pragma once

#include <iosfwd>
#include <string>

#include "framecell/beam.hpp"
#include "framecell/condense.hpp"

namespace framecell {

/// Full-precision decimal (round-trip exact for doubles).
std::string format_full(double v);

/// Text serialization of a condensed stiffness block. Header carries the
/// size, interface count, DOF order, units and the producing content hash;
/// rows are k space-separated full-precision values. Byte-stable for
/// identical inputs.
void write_condensed(std::ostream& out, const CondensedStiffness& m);
void write_condensed_file(const std::string& path, const CondensedStiffness& m);

CondensedStiffness read_condensed(std::istream& in);
CondensedStiffness read_condensed_file(const std::string& path);

/// Result tables for a solved frame, one value set per line, units in the
/// header comments.
void write_displacement_table(std::ostream& out, const GlobalSolution& sol);
void write_reaction_table(std::ostream& out, const GlobalSolution& sol);
void write_internal_actions(std::ostream& out, const FrameModel& model, const GlobalSolution& sol);

}  // namespace framecell
