#include "framecell/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace framecell {

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

[[noreturn]] void parseFail(const std::string& what) {
  throw std::runtime_error("condensed matrix file: " + what);
}

}  // namespace

void write_condensed(std::ostream& out, const CondensedStiffness& m) {
  out << "framecell condensed stiffness v1\n";
  out << "k " << m.k() << "\n";
  out << "interfaces " << m.interfaces << "\n";
  out << "dof-order per-interface ux uy uz rx ry rz (global axes)\n";
  out << "units translational N/mm, coupling N/rad, rotational N*mm/rad\n";
  out << "provenance " << hex64(m.provenance) << "\n";
  out << "raw-asymmetry " << format_full(m.rawAsymmetry) << "\n";
  out << "matrix\n";
  for (int i = 0; i < m.k(); ++i) {
    for (int j = 0; j < m.k(); ++j) {
      if (j) out << ' ';
      out << format_full(m.K(i, j));
    }
    out << '\n';
  }
}

void write_condensed_file(const std::string& path, const CondensedStiffness& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_condensed(out, m);
}

CondensedStiffness read_condensed(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "framecell condensed stiffness v1")
    parseFail("unrecognized header");

  CondensedStiffness m;
  int k = -1;
  while (std::getline(in, line)) {
    if (line == "matrix") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "k") {
      ls >> k;
    } else if (key == "interfaces") {
      ls >> m.interfaces;
    } else if (key == "provenance") {
      std::string hex;
      ls >> hex;
      m.provenance = std::stoull(hex, nullptr, 16);
    } else if (key == "raw-asymmetry") {
      ls >> m.rawAsymmetry;
    }
    // descriptive lines (dof-order, units) are fixed text, skipped
  }
  if (k <= 0) parseFail("missing or invalid size");
  if (line != "matrix") parseFail("missing matrix section");

  m.K.resize(k, k);
  for (int i = 0; i < k; ++i) {
    if (!std::getline(in, line)) parseFail("truncated at row " + std::to_string(i));
    std::istringstream ls(line);
    for (int j = 0; j < k; ++j)
      if (!(ls >> m.K(i, j)))
        parseFail("row " + std::to_string(i) + " has fewer than " + std::to_string(k) + " values");
  }
  return m;
}

CondensedStiffness read_condensed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_condensed(in);
}

void write_displacement_table(std::ostream& out, const GlobalSolution& sol) {
  out << "# node ux[mm] uy[mm] uz[mm] rx[rad] ry[rad] rz[rad]\n";
  for (const auto& [id, u] : sol.displacements) {
    out << id;
    for (int d = 0; d < 6; ++d) out << ' ' << format_full(u[d]);
    out << '\n';
  }
}

void write_reaction_table(std::ostream& out, const GlobalSolution& sol) {
  out << "# node Fx[N] Fy[N] Fz[N] Mx[N*mm] My[N*mm] Mz[N*mm]\n";
  for (const auto& [id, r] : sol.reactions) {
    out << id;
    for (int d = 0; d < 6; ++d) out << ' ' << format_full(r[d]);
    out << '\n';
  }
}

void write_internal_actions(std::ostream& out, const FrameModel& model,
                            const GlobalSolution& sol) {
  out << "# element nodeA nodeB then 12 local end actions:\n";
  out << "# FxA FyA FzA MxA MyA MzA FxB FyB FzB MxB MyB MzB [N, N*mm]\n";
  for (size_t e = 0; e < model.elements.size(); ++e) {
    const Vec12 f = internal_actions(model, e, sol);
    out << e << ' ' << model.elements[e].nodeA << ' ' << model.elements[e].nodeB;
    for (int d = 0; d < 12; ++d) out << ' ' << format_full(f[d]);
    out << '\n';
  }
}

}  // namespace framecell
