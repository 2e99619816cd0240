#pragma once

#include <Eigen/Dense>

namespace hypwave {

// Collocation grid on the radial interval (0, 1].
//
// The N nodes are the positive Chebyshev–Gauss–Lobatto points of order
// M = 2N - 1 (odd, so rho = 0 is not a node and rho = 1 is node 0).  Fields
// have definite parity under rho -> -rho: even (+1) for even-ell modes, odd
// (-1) for odd-ell modes.  Differentiation matrices act on values at the
// positive nodes by folding the full-grid Chebyshev matrix with the parity
// sign, and the quadrature weights integrate f |-> \int_0^1 f(rho) rho^2 drho
// exactly for even polynomials f of degree <= M - 1.
class RadialGrid {
 public:
  explicit RadialGrid(int n);

  int size() const { return n_; }
  int full_order() const { return 2 * n_ - 1; }
  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::VectorXd& weights() const { return w_; }

  // parity = +1 (even extension) or -1 (odd extension).
  const Eigen::MatrixXd& d1(int parity) const;
  const Eigen::MatrixXd& d2(int parity) const;

  static int parity_of_ell(int ell) { return (ell % 2 == 0) ? +1 : -1; }

  // Barycentric interpolation of grid values (with the given parity) to an
  // arbitrary point r in [-1, 1].
  double interpolate(const Eigen::VectorXd& values, int parity,
                     double r) const;

 private:
  int n_;
  Eigen::VectorXd rho_, w_;
  Eigen::MatrixXd d1_even_, d1_odd_, d2_even_, d2_odd_;
  Eigen::VectorXd full_x_;     // all M+1 Chebyshev nodes
  Eigen::VectorXd bary_w_;     // barycentric weights on the full grid
};

}  // namespace hypwave
