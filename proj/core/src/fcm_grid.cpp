#include "framecell/fcm/grid.hpp"

#include <numeric>
#include <stdexcept>

namespace framecell::fcm {

CellGrid::CellGrid(const Domain& domain, const GridParams& params)
    : box_(domain.boundingBox().inflated(params.margin)),
      n_(params.resolution),
      p_(params.p),
      modesPerCell_((params.p + 1) * (params.p + 1) * (params.p + 1)) {
  if (n_[0] < 1 || n_[1] < 1 || n_[2] < 1)
    throw std::invalid_argument("CellGrid: resolution must be >= 1 per axis");
  if (p_ < 1 || p_ > 8) throw std::invalid_argument("CellGrid: degree must be in [1, 8]");
  h_ = box_.extent().cwiseQuotient(Vec3(n_[0], n_[1], n_[2]));
  if (!(h_.minCoeff() > 0.0)) throw std::invalid_argument("CellGrid: degenerate bounding box");

  // Classify every cell from a 3x3x3 sample lattice.
  status_.resize(size_t(n_[0]) * n_[1] * n_[2]);
  activeIndex_.assign(status_.size(), -1);
  for (int i = 0; i < n_[0]; ++i)
    for (int j = 0; j < n_[1]; ++j)
      for (int k = 0; k < n_[2]; ++k) {
        const Box cb = cellBox(i, j, k);
        int insideCount = 0;
        for (int si = 0; si < 3; ++si)
          for (int sj = 0; sj < 3; ++sj)
            for (int sk = 0; sk < 3; ++sk) {
              Vec3 s = cb.lo + cb.extent().cwiseProduct(Vec3(si, sj, sk) * 0.5);
              if (domain.inside(s)) insideCount++;
            }
        CellStatus st = CellStatus::Cut;
        if (insideCount == 0) st = CellStatus::Outside;
        else if (insideCount == 27) st = CellStatus::Inside;
        status_[cellFlat(i, j, k)] = st;
        if (st != CellStatus::Outside) {
          activeIndex_[cellFlat(i, j, k)] = int(active_.size());
          active_.push_back({i, j, k});
        }
      }

  if (active_.empty())
    throw std::runtime_error("CellGrid: no cell intersects the physical domain");

  buildDofMap();
}

Box CellGrid::cellBox(int i, int j, int k) const {
  Vec3 lo = box_.lo + h_.cwiseProduct(Vec3(i, j, k));
  return {lo, lo + h_};
}

void CellGrid::buildDofMap() {
  const int m = p_ - 1;  // internal modes per direction
  const int64_t nx = n_[0], ny = n_[1], nz = n_[2];

  // Raw scalar index space: vertices, edges (x/y/z), faces (xy/xz/yz),
  // interiors, laid out contiguously in that order.
  const int64_t nVert = (nx + 1) * (ny + 1) * (nz + 1);
  const int64_t nEdgeX = nx * (ny + 1) * (nz + 1) * m;
  const int64_t nEdgeY = (nx + 1) * ny * (nz + 1) * m;
  const int64_t nEdgeZ = (nx + 1) * (ny + 1) * nz * m;
  const int64_t nFaceXY = nx * ny * (nz + 1) * m * m;
  const int64_t nFaceXZ = nx * (ny + 1) * nz * m * m;
  const int64_t nFaceYZ = (nx + 1) * ny * nz * m * m;
  const int64_t nInt = nx * ny * nz * m * m * m;

  const int64_t oEdgeX = nVert;
  const int64_t oEdgeY = oEdgeX + nEdgeX;
  const int64_t oEdgeZ = oEdgeY + nEdgeY;
  const int64_t oFaceXY = oEdgeZ + nEdgeZ;
  const int64_t oFaceXZ = oFaceXY + nFaceXY;
  const int64_t oFaceYZ = oFaceXZ + nFaceXZ;
  const int64_t oInt = oFaceYZ + nFaceYZ;
  const int64_t rawSize = oInt + nInt;

  auto rawIndex = [&](int i, int j, int k, int a, int b, int c) -> int64_t {
    const bool ia = a >= 2, ib = b >= 2, ic = c >= 2;  // internal vs nodal
    if (!ia && !ib && !ic)
      return ((int64_t(i + a) * (ny + 1) + (j + b)) * (nz + 1) + (k + c));
    if (ia && !ib && !ic)
      return oEdgeX + (((int64_t(i) * (ny + 1) + (j + b)) * (nz + 1) + (k + c)) * m + (a - 2));
    if (!ia && ib && !ic)
      return oEdgeY + (((int64_t(i + a) * ny + j) * (nz + 1) + (k + c)) * m + (b - 2));
    if (!ia && !ib && ic)
      return oEdgeZ + (((int64_t(i + a) * (ny + 1) + (j + b)) * nz + k) * m + (c - 2));
    if (ia && ib && !ic)
      return oFaceXY + (((int64_t(i) * ny + j) * (nz + 1) + (k + c)) * m * m + (a - 2) * m + (b - 2));
    if (ia && !ib && ic)
      return oFaceXZ + (((int64_t(i) * (ny + 1) + (j + b)) * nz + k) * m * m + (a - 2) * m + (c - 2));
    if (!ia && ib && ic)
      return oFaceYZ + (((int64_t(i + a) * ny + j) * nz + k) * m * m + (b - 2) * m + (c - 2));
    return oInt + (((int64_t(i) * ny + j) * nz + k) * m * m * m +
                   ((a - 2) * m + (b - 2)) * m + (c - 2));
  };

  std::vector<int> globalId(rawSize, -1);
  cellDofs_.resize(active_.size() * size_t(modesPerCell_));

  // First pass marks used raw ids, second assigns contiguous ids in raw
  // order so the numbering is independent of the active-cell traversal.
  for (const auto& [i, j, k] : active_)
    for (int a = 0; a <= p_; ++a)
      for (int b = 0; b <= p_; ++b)
        for (int c = 0; c <= p_; ++c) globalId[rawIndex(i, j, k, a, b, c)] = 0;

  int next = 0;
  for (int64_t r = 0; r < rawSize; ++r)
    if (globalId[r] == 0) globalId[r] = next++;
  numScalarDofs_ = next;

  size_t out = 0;
  for (const auto& [i, j, k] : active_)
    for (int a = 0; a <= p_; ++a)
      for (int b = 0; b <= p_; ++b)
        for (int c = 0; c <= p_; ++c) cellDofs_[out++] = globalId[rawIndex(i, j, k, a, b, c)];
}

bool CellGrid::locate(const Vec3& x, std::array<int, 3>& cell, Vec3& xi) const {
  const double tol = 1e-9 * (1.0 + box_.extent().maxCoeff());
  if (!box_.inflated(tol).contains(x)) return false;

  std::array<std::array<int, 2>, 3> cand{};
  for (int d = 0; d < 3; ++d) {
    double t = (x[d] - box_.lo[d]) / h_[d];
    int i = std::clamp(int(std::floor(t)), 0, n_[d] - 1);
    cand[d] = {i, i};
    // On a gridline both neighbors contain x.
    if (std::abs(t - i) * h_[d] < tol && i > 0) cand[d][0] = i - 1;
    else if (std::abs(t - (i + 1)) * h_[d] < tol && i + 1 < n_[d]) cand[d][1] = i + 1;
  }

  for (int i = cand[0][0]; i <= cand[0][1]; ++i)
    for (int j = cand[1][0]; j <= cand[1][1]; ++j)
      for (int k = cand[2][0]; k <= cand[2][1]; ++k)
        if (activeIndex(i, j, k) >= 0) {
          cell = {i, j, k};
          const Box cb = cellBox(i, j, k);
          for (int d = 0; d < 3; ++d) {
            xi[d] = 2.0 * (x[d] - cb.lo[d]) / h_[d] - 1.0;
            xi[d] = std::clamp(xi[d], -1.0, 1.0);
          }
          return true;
        }
  return false;
}

}  // namespace framecell::fcm
