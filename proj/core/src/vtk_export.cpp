#include "framecell/fcm/vtk.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

namespace framecell::fcm {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(std::ostream& out, const ElasticField& field, const std::string& title) {
  const CellGrid& grid = field.grid();

  // Unique vertices of active cells, indexed in (i, j, k) lattice order.
  std::map<std::array<int, 3>, int> vertexId;
  std::vector<std::array<int, 3>> vertices;
  for (const auto& [i, j, k] : grid.activeCells())
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          std::array<int, 3> v{i + a, j + b, k + c};
          if (vertexId.emplace(v, 0).second) vertices.push_back(v);
        }
  std::sort(vertices.begin(), vertices.end());
  for (size_t n = 0; n < vertices.size(); ++n) vertexId[vertices[n]] = int(n);

  auto position = [&grid](const std::array<int, 3>& v) {
    return Vec3(grid.box().lo + grid.spacing().cwiseProduct(Vec3(v[0], v[1], v[2])));
  };

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << vertices.size() << " double\n";
  for (const auto& v : vertices) {
    const Vec3 p = position(v);
    out << num(p.x()) << " " << num(p.y()) << " " << num(p.z()) << "\n";
  }

  const auto& cells = grid.activeCells();
  out << "CELLS " << cells.size() << " " << cells.size() * 9 << "\n";
  for (const auto& [i, j, k] : cells) {
    // VTK_HEXAHEDRON corner order
    out << "8 " << vertexId[{i, j, k}] << " " << vertexId[{i + 1, j, k}] << " "
        << vertexId[{i + 1, j + 1, k}] << " " << vertexId[{i, j + 1, k}] << " "
        << vertexId[{i, j, k + 1}] << " " << vertexId[{i + 1, j, k + 1}] << " "
        << vertexId[{i + 1, j + 1, k + 1}] << " " << vertexId[{i, j + 1, k + 1}] << "\n";
  }
  out << "CELL_TYPES " << cells.size() << "\n";
  for (size_t n = 0; n < cells.size(); ++n) out << "12\n";

  out << "POINT_DATA " << vertices.size() << "\n";
  std::vector<ElasticField::Sample> samples;
  samples.reserve(vertices.size());
  for (const auto& v : vertices) samples.push_back(field.evaluate(position(v)));

  out << "VECTORS u double\n";
  for (const auto& s : samples)
    out << num(s.u.x()) << " " << num(s.u.y()) << " " << num(s.u.z()) << "\n";
  out << "SCALARS vonMises double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : samples) out << num(s.vonMises) << "\n";
}

void write_vtk_file(const std::string& path, const ElasticField& field, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_vtk(out, field, title);
}

}  // namespace framecell::fcm
