#pragma once

#include <memory>

#include "framecell/fcm/assembly.hpp"

namespace framecell::fcm {

/// Sparse symmetric factorization reused across right-hand sides
/// (supernodal Cholesky). Solves run iterative refinement until the
/// relative residual drops below 1e-12 or stalls; a residual above 1e-8
/// is an error.
class Factorization {
 public:
  /// A is lower-triangle stored and must be positive definite.
  explicit Factorization(SparseSym A);
  ~Factorization();

  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double lastResidual() const { return lastResidual_; }
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable double lastResidual_ = 0.0;
};

/// Assembled FCM system: unconstrained stiffness plus beta-scaled penalty
/// constraint blocks. The factorization of K + P is built once and reused.
class FcmSystem {
 public:
  FcmSystem(SparseSym stiffness, SparseSym penaltyMatrix, double beta)
      : K_(std::move(stiffness)), penalty_(std::move(penaltyMatrix)), beta_(beta) {}

  const SparseSym& stiffness() const { return K_; }
  const SparseSym& penaltyMatrix() const { return penalty_; }
  double beta() const { return beta_; }

  const Factorization& factorization() const;

  /// Strain energy u^T K u with the unconstrained stiffness.
  double strainEnergy(const Eigen::VectorXd& u) const {
    return u.dot(K_.selfadjointView<Eigen::Lower>() * u);
  }

 private:
  SparseSym K_;
  SparseSym penalty_;
  double beta_;
  mutable std::unique_ptr<Factorization> fact_;
};

}  // namespace framecell::fcm
