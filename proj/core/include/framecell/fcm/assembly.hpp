#pragma once

#include <Eigen/Sparse>

#include "framecell/fcm/quadrature.hpp"
#include "framecell/material.hpp"

namespace framecell::fcm {

using SparseSym = Eigen::SparseMatrix<double>;  // lower triangle stored

/// Dense symmetric cell matrix (3 * modesPerCell square, components
/// interleaved as 3 * mode + component) with alpha evaluated per
/// quadrature point.
Eigen::MatrixXd cell_stiffness(const CellGrid& grid, int activeCell, const Domain& domain,
                               const Material& material, const QuadratureScheme& quad);

/// Unconstrained global stiffness over all active cells. Only the lower
/// triangle is stored; use .selfadjointView<Eigen::Lower>() for products.
/// Deterministic for a fixed grid regardless of thread count.
SparseSym assemble_unconstrained(const CellGrid& grid, const Domain& domain,
                                 const Material& material, const QuadratureScheme& quad,
                                 int threads = 1);

/// Expands a lower-stored symmetric matrix to full storage.
Eigen::SparseMatrix<double> to_full(const SparseSym& lower);

}  // namespace framecell::fcm
