#pragma once

#include <complex>

#include "hypwave/generator.hpp"
#include "hypwave/grid.hpp"

namespace hypwave {

// Two independent routes to u = (lambda - L)^{-1} f on a single mode.
//
//   matrix                  dense complex LU factorization of the collocation
//                           matrix (lambda I - A); works for any lambda off
//                           the discrete spectrum, real or complex.
//   variation_of_constants  quadrature of the explicit kernel built from the
//                           two hypergeometric Frobenius solutions of the
//                           scalar second-order reduction; implemented for
//                           real lambda > -1/2 and serves as an independent
//                           cross-check of the matrix route.
enum class ResolventMethod { matrix, variation_of_constants };

struct ResolventResult {
  ModeFieldC u;
  // matrix: energy-norm relative residual ||(lambda - L)u - f|| / ||f||.
  // variation_of_constants: max interior-node defect of the scalar
  // second-order equation, relative to the max of its right-hand side.
  double residual = 0.0;
  // Normalization constant C of the homogeneous pair, defined by
  // W(psi0, psi1) = C rho^{-2} (1 - rho^2)^{-(lambda+1)}.  Only set by the
  // variation-of-constants method; a vanishing C means lambda is an
  // eigenvalue and the solve is rejected.
  cplx wronskian_constant = 0.0;
};

// Solves (lambda - L_ell) u = f for the mode generator on grid g.  Throws
// validation_error on malformed input or a lambda outside the chosen
// method's domain, and numerical_error when the accuracy contract (residual
// <= tol) cannot be met, e.g. lambda too close to an eigenvalue.
ResolventResult resolvent_solve(int ell, cplx lambda, const ModeFieldC& f,
                                const RadialGrid& g, ResolventMethod method,
                                bool with_potential = true, double tol = 1e-8);

}  // namespace hypwave
