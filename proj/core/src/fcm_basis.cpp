#include "framecell/fcm/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace framecell::fcm {

void shape_1d(int p, double xi, double* vals, double* derivs) {
  vals[0] = 0.5 * (1.0 - xi);
  derivs[0] = -0.5;
  if (p < 1) return;
  vals[1] = 0.5 * (1.0 + xi);
  derivs[1] = 0.5;
  if (p < 2) return;

  // Legendre values by recurrence; phi_j = (L_j - L_{j-2}) / sqrt(4j - 2),
  // phi_j' = sqrt((2j - 1) / 2) * L_{j-1}.
  std::vector<double> L(p + 1);
  L[0] = 1.0;
  L[1] = xi;
  for (int j = 2; j <= p; ++j) L[j] = ((2.0 * j - 1.0) * xi * L[j - 1] - (j - 1.0) * L[j - 2]) / j;
  for (int j = 2; j <= p; ++j) {
    const double scale = 1.0 / std::sqrt(4.0 * j - 2.0);
    vals[j] = scale * (L[j] - L[j - 2]);
    derivs[j] = std::sqrt((2.0 * j - 1.0) / 2.0) * L[j - 1];
  }
}

TensorBasis::TensorBasis(int p) : p_(p), n_((p + 1) * (p + 1) * (p + 1)) {
  if (p < 1 || p > 8) throw std::invalid_argument("TensorBasis: degree must be in [1, 8]");
}

void TensorBasis::eval(const Vec3& xi, Eigen::VectorXd& values,
                       Eigen::Matrix<double, Eigen::Dynamic, 3>& gradients) const {
  const int m = p_ + 1;
  double v[3][9], d[3][9];
  for (int dir = 0; dir < 3; ++dir) shape_1d(p_, xi[dir], v[dir], d[dir]);

  values.resize(n_);
  gradients.resize(n_, 3);
  int idx = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c, ++idx) {
        values[idx] = v[0][a] * v[1][b] * v[2][c];
        gradients(idx, 0) = d[0][a] * v[1][b] * v[2][c];
        gradients(idx, 1) = v[0][a] * d[1][b] * v[2][c];
        gradients(idx, 2) = v[0][a] * v[1][b] * d[2][c];
      }
}

void TensorBasis::evalValues(const Vec3& xi, Eigen::VectorXd& values) const {
  const int m = p_ + 1;
  double v[3][9], d[3][9];
  for (int dir = 0; dir < 3; ++dir) shape_1d(p_, xi[dir], v[dir], d[dir]);

  values.resize(n_);
  int idx = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c, ++idx) values[idx] = v[0][a] * v[1][b] * v[2][c];
}

const GaussRule& gauss_rule(int numPoints) {
  if (numPoints < 1 || numPoints > 32) throw std::invalid_argument("gauss_rule: 1..32 points");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(numPoints);
  if (it != cache.end()) return it->second;

  // Newton iteration on Legendre roots.
  GaussRule rule;
  const int n = numPoints;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(numPoints, std::move(rule)).first->second;
}

}  // namespace framecell::fcm
