#pragma once

#include <Eigen/Dense>
#include <complex>

#include "hypwave/grid.hpp"

namespace hypwave {

using cplx = std::complex<double>;

// Pair (u1, u2) of radial profiles of a single spherical-harmonic mode,
// sampled on the positive nodes of a RadialGrid.
struct ModeField {
  int ell = 0;
  Eigen::VectorXd u1, u2;
};

struct ModeFieldC {
  int ell = 0;
  Eigen::VectorXcd u1, u2;
};

// Dense discretization of the first-order mode generator
//   row1 = -rho u1' - u1 + u2
//   row2 = u1'' + (2/rho) u1' - l(l+1) u1 / rho^2 - rho u2' - 2 u2
//          [+ 6 u1 when with_potential]
// acting on the stacked vector [u1; u2].
struct GeneratorMatrix {
  int ell = 0;
  bool with_potential = false;
  int n = 0;
  Eigen::MatrixXd a;  // 2n x 2n, column-major (for factorizations)
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      a_row;  // row-major copy used by the matvec kernel
};

GeneratorMatrix build_generator(const RadialGrid& g, int ell,
                                bool with_potential);

// y = A x.  Row-parallel: each row's dot product is summed in a fixed order,
// so the result is bitwise identical in serial and parallel execution.
void apply_generator(const GeneratorMatrix& gen, const double* x, double* y);
void apply_generator(const GeneratorMatrix& gen, const ModeField& u,
                     ModeField& out);

// Energy pairing
//   (u|v) = sum w u1' conj(v1') + l(l+1) sum w u1 conj(v1) / rho^2
//         + u1(1) conj(v1(1)) + sum w u2 conj(v2),
// Hermitian and positive definite.  Radial profiles are treated per mode:
// volume integrals carry the measure rho^2 drho on (0,1) and the boundary
// term has unit weight.
std::complex<double> energy_inner_product(const ModeFieldC& u,
                                          const ModeFieldC& v,
                                          const RadialGrid& g);
double energy_inner_product(const ModeField& u, const ModeField& v,
                            const RadialGrid& g);
double energy_norm(const ModeField& u, const RadialGrid& g);
double energy_norm(const ModeFieldC& u, const RadialGrid& g);

// Re (L0 u | u) + (1/2) (u|u) for the free generator L0 of u's mode; the
// semigroup bound requires this to be <= 0 up to quadrature rounding.
double dissipativity_check(const ModeField& u, const RadialGrid& g);

}  // namespace hypwave
