#include "hypwave/grid.hpp"

#include <cmath>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

RadialGrid::RadialGrid(int n) : n_(n) {
  if (n < 4 || n > 4096) {
    throw validation_error("RadialGrid: node count must be in [4, 4096]");
  }
  const int m = 2 * n - 1;

  // Full Chebyshev–Gauss–Lobatto nodes x_j = cos(j pi / M), j = 0..M.
  full_x_.resize(m + 1);
  for (int j = 0; j <= m; ++j) full_x_(j) = std::cos(kPi * j / m);

  // First-derivative matrix with the negative-sum-trick diagonal.
  Eigen::MatrixXd d(m + 1, m + 1);
  auto cj = [&](int j) { return (j == 0 || j == m) ? 2.0 : 1.0; };
  for (int i = 0; i <= m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= m; ++j) {
      if (i == j) continue;
      const double sign = (((i + j) & 1) != 0) ? -1.0 : 1.0;
      d(i, j) = (cj(i) / cj(j)) * sign / (full_x_(i) - full_x_(j));
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;
  }
  Eigen::MatrixXd d2 = d * d;
  for (int i = 0; i <= m; ++i) {
    d2(i, i) = 0.0;
    d2(i, i) = -d2.row(i).sum();
  }

  // Positive nodes and folded matrices: node j pairs with node M - j at
  // -rho_j, so a field of parity s has value s * u_j there.
  rho_ = full_x_.head(n);
  d1_even_.resize(n, n);
  d1_odd_.resize(n, n);
  d2_even_.resize(n, n);
  d2_odd_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      d1_even_(i, j) = d(i, j) + d(i, m - j);
      d1_odd_(i, j) = d(i, j) - d(i, m - j);
      d2_even_(i, j) = d2(i, j) + d2(i, m - j);
      d2_odd_(i, j) = d2(i, j) - d2(i, m - j);
    }
  }

  // Clenshaw–Curtis weights on [-1, 1] for odd M, then the half-interval
  // weight for \int_0^1 f rho^2 drho of even f is w^cc_j * rho_j^2.
  Eigen::VectorXd wcc = Eigen::VectorXd::Zero(m + 1);
  wcc(0) = 1.0 / (static_cast<double>(m) * m);
  wcc(m) = wcc(0);
  for (int j = 1; j < m; ++j) {
    const double theta = kPi * j / m;
    double v = 1.0;
    for (int k = 1; k <= (m - 1) / 2; ++k) {
      v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    wcc(j) = 2.0 * v / m;
  }
  w_.resize(n);
  for (int i = 0; i < n; ++i) w_(i) = wcc(i) * rho_(i) * rho_(i);

  // Barycentric weights on the full CGL grid: (-1)^j, halved at the ends.
  bary_w_.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    bary_w_(j) = ((j & 1) != 0) ? -1.0 : 1.0;
    if (j == 0 || j == m) bary_w_(j) *= 0.5;
  }
}

const Eigen::MatrixXd& RadialGrid::d1(int parity) const {
  if (parity == 1) return d1_even_;
  if (parity == -1) return d1_odd_;
  throw validation_error("RadialGrid::d1: parity must be +1 or -1");
}

const Eigen::MatrixXd& RadialGrid::d2(int parity) const {
  if (parity == 1) return d2_even_;
  if (parity == -1) return d2_odd_;
  throw validation_error("RadialGrid::d2: parity must be +1 or -1");
}

double RadialGrid::interpolate(const Eigen::VectorXd& values, int parity,
                               double r) const {
  if (values.size() != n_) {
    throw validation_error("RadialGrid::interpolate: value size mismatch");
  }
  if (parity != 1 && parity != -1) {
    throw validation_error("RadialGrid::interpolate: parity must be +1 or -1");
  }
  const int m = 2 * n_ - 1;
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double vj =
        (j < n_) ? values(j)
                 : (parity == 1 ? values(m - j) : -values(m - j));
    const double dx = r - full_x_(j);
    if (dx == 0.0) return vj;
    const double c = bary_w_(j) / dx;
    num += c * vj;
    den += c;
  }
  return num / den;
}

}  // namespace hypwave
