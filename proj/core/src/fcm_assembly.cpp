#include "framecell/fcm/assembly.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace framecell::fcm {

namespace {

// Accumulates the six independent gradient-moment matrices
// S_ab(i, j) = sum_q w_q alpha_q dN_i/dx_a dN_j/dx_b over quadrature
// points, batched so the contractions run as GEMMs.
class GradientMoments {
 public:
  GradientMoments(const CellGrid& grid, const TensorBasis& basis)
      : basis_(basis),
        nb_(basis.numModes()),
        scale_(2.0 / grid.spacing().x(), 2.0 / grid.spacing().y(), 2.0 / grid.spacing().z()) {
    for (auto& S : S_) S = Eigen::MatrixXd::Zero(nb_, nb_);
    for (auto& G : G_) G.resize(kChunk, nb_);
  }

  void add(const Domain& domain, const Box& cellBox, const std::vector<VolumePoint>& points) {
    const Vec3 mid = cellBox.center();
    const Vec3 invHalf = 2.0 / cellBox.extent().array();

    Eigen::VectorXd vals;
    Eigen::Matrix<double, Eigen::Dynamic, 3> grads;
    int fill = 0;
    for (const VolumePoint& q : points) {
      const Vec3 xi = (q.x - mid).cwiseProduct(invHalf);
      basis_.eval(xi, vals, grads);
      const double s = std::sqrt(q.weight * domain.indicator(q.x));
      for (int d = 0; d < 3; ++d) G_[d].row(fill) = (s * scale_[d]) * grads.col(d).transpose();
      if (++fill == kChunk) {
        flush(fill);
        fill = 0;
      }
    }
    flush(fill);
  }

  // Assembled into the interleaved-component elasticity matrix.
  Eigen::MatrixXd elasticity(const Material& mat) const {
    const double lambda = mat.lambda(), mu = mat.mu();
    Eigen::MatrixXd Strace = S_[idx(0, 0)] + S_[idx(1, 1)] + S_[idx(2, 2)];

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * nb_, 3 * nb_);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Eigen::MatrixXd Sab =
            (a <= b) ? S_[idx(a, b)] : Eigen::MatrixXd(S_[idx(b, a)].transpose());
        Eigen::MatrixXd block = lambda * Sab + mu * Sab.transpose();
        if (a == b) block += mu * Strace;
        for (int i = 0; i < nb_; ++i)
          for (int j = 0; j < nb_; ++j) K(3 * i + a, 3 * j + b) = block(i, j);
      }
    return 0.5 * (K + K.transpose());
  }

 private:
  static constexpr int kChunk = 512;

  static int idx(int a, int b) {  // upper-triangle pair index
    static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return map[a][b];
  }

  void flush(int rows) {
    if (rows == 0) return;
    const auto Gx = G_[0].topRows(rows), Gy = G_[1].topRows(rows), Gz = G_[2].topRows(rows);
    S_[0].noalias() += Gx.transpose() * Gx;
    S_[1].noalias() += Gx.transpose() * Gy;
    S_[2].noalias() += Gx.transpose() * Gz;
    S_[3].noalias() += Gy.transpose() * Gy;
    S_[4].noalias() += Gy.transpose() * Gz;
    S_[5].noalias() += Gz.transpose() * Gz;
  }

  const TensorBasis& basis_;
  int nb_;
  Vec3 scale_;
  std::array<Eigen::MatrixXd, 6> S_;
  std::array<Eigen::MatrixXd, 3> G_;
};

Eigen::MatrixXd cellStiffnessImpl(const CellGrid& grid, int activeCell, const Domain& domain,
                                  const Material& material, const QuadratureScheme& quad,
                                  const TensorBasis& basis) {
  const auto [i, j, k] = grid.activeCells()[activeCell];
  const Box cb = grid.cellBox(i, j, k);
  const int gauss = quad.gaussPointsPerDir > 0 ? quad.gaussPointsPerDir : grid.degree() + 1;
  const auto points = cell_quadrature(domain, cb, grid.status(i, j, k), quad.octreeDepth, gauss);

  GradientMoments moments(grid, basis);
  moments.add(domain, cb, points);
  return moments.elasticity(material);
}

}  // namespace

Eigen::MatrixXd cell_stiffness(const CellGrid& grid, int activeCell, const Domain& domain,
                               const Material& material, const QuadratureScheme& quad) {
  TensorBasis basis(grid.degree());
  return cellStiffnessImpl(grid, activeCell, domain, material, quad, basis);
}

SparseSym assemble_unconstrained(const CellGrid& grid, const Domain& domain,
                                 const Material& material, const QuadratureScheme& quad,
                                 int threads) {
  const int numCells = grid.numActiveCells();
  const int nb = grid.modesPerCell();
  const int n = grid.numDofs();

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(size_t(numCells) * (size_t(3 * nb) * (3 * nb + 1) / 2));

  constexpr int kBatch = 64;
  std::vector<Eigen::MatrixXd> batch(kBatch);
  for (int start = 0; start < numCells; start += kBatch) {
    const int count = std::min(kBatch, numCells - start);
#pragma omp parallel
    {
      TensorBasis basis(grid.degree());
#pragma omp for schedule(dynamic)
      for (int c = 0; c < count; ++c)
        batch[c] = cellStiffnessImpl(grid, start + c, domain, material, quad, basis);
    }
    // Serial accumulation in cell order keeps the result deterministic.
    for (int c = 0; c < count; ++c) {
      const int* dofs = grid.cellScalarDofs(start + c);
      const Eigen::MatrixXd& Kc = batch[c];
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
              const int gi = 3 * dofs[i] + a, gj = 3 * dofs[j] + b;
              if (gi >= gj) trips.emplace_back(gi, gj, Kc(3 * i + a, 3 * j + b));
            }
    }
  }

  SparseSym K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Eigen::SparseMatrix<double> to_full(const SparseSym& lower) {
  Eigen::SparseMatrix<double> full;
  full = lower.selfadjointView<Eigen::Lower>();
  return full;
}

}  // namespace framecell::fcm
