#pragma once

#include <array>
#include <vector>

#include "framecell/fcm/basis.hpp"
#include "framecell/geometry.hpp"
#include "framecell/types.hpp"

namespace framecell::fcm {

enum class CellStatus : uint8_t { Outside = 0, Cut = 1, Inside = 2 };

struct GridParams {
  std::array<int, 3> resolution{1, 1, 1};
  int p = 3;
  double margin = 0.0;  // added around the domain bounding box
};

/// Cartesian high-order discretization over a Domain. Cells whose sample
/// points all classify Outside carry no DOFs. The scalar DOF map is shared
/// across cells on common vertices/edges/faces; vector DOFs interleave the
/// three displacement components as 3*scalar + component.
class CellGrid {
 public:
  CellGrid(const Domain& domain, const GridParams& params);

  const Box& box() const { return box_; }
  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  int degree() const { return p_; }
  Vec3 spacing() const { return h_; }
  double minSpacing() const { return h_.minCoeff(); }

  CellStatus status(int i, int j, int k) const { return status_[cellFlat(i, j, k)]; }

  /// Active cells (Inside or Cut) in lexicographic order.
  const std::vector<std::array<int, 3>>& activeCells() const { return active_; }
  int numActiveCells() const { return int(active_.size()); }

  /// -1 when the cell is not active.
  int activeIndex(int i, int j, int k) const { return activeIndex_[cellFlat(i, j, k)]; }

  int numScalarDofs() const { return numScalarDofs_; }
  int numDofs() const { return 3 * numScalarDofs_; }

  /// Scalar DOF ids of one active cell, in tensor mode order, (p+1)^3 long.
  const int* cellScalarDofs(int activeCell) const {
    return cellDofs_.data() + size_t(activeCell) * modesPerCell_;
  }
  int modesPerCell() const { return modesPerCell_; }

  Box cellBox(int i, int j, int k) const;
  Vec3 cellCenter(int i, int j, int k) const { return cellBox(i, j, k).center(); }

  /// Maps x to its containing active cell and reference coordinate. Points
  /// on shared faces prefer the lexicographically first active cell.
  /// Returns false when x is outside the grid or in an inactive cell.
  bool locate(const Vec3& x, std::array<int, 3>& cell, Vec3& xi) const;

 private:
  size_t cellFlat(int i, int j, int k) const {
    return (size_t(i) * n_[1] + j) * n_[2] + k;
  }
  void buildDofMap();

  Box box_;
  std::array<int, 3> n_;
  int p_;
  Vec3 h_;
  int modesPerCell_;
  std::vector<CellStatus> status_;
  std::vector<std::array<int, 3>> active_;
  std::vector<int> activeIndex_;
  std::vector<int> cellDofs_;
  int numScalarDofs_ = 0;
};

}  // namespace framecell::fcm
