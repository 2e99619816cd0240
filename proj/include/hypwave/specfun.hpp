#pragma once

#include <complex>

namespace hypwave {

using cplx = std::complex<double>;

namespace sf {

// sin(pi z) with exact zeros at integer z (argument reduction keeps the
// integer part exact instead of multiplying the rounded pi by z directly).
cplx sin_pi(cplx z);

// Gamma function on the complex plane (Lanczos approximation, reflection
// for Re z < 1/2).  Relative accuracy ~1e-13 for |z| <= 30 away from poles.
cplx gamma(cplx z);

// Entire reciprocal 1/Gamma; exactly zero at z = 0, -1, -2, ...
cplx recip_gamma(cplx z);

// Logarithmic derivative Gamma'/Gamma.
cplx digamma(cplx z);

// Gauss hypergeometric function 2F1(a, b; c; z).
//
//  * terminating series when a or b is a nonpositive integer;
//  * direct power series for |z| <= 0.6;
//  * connection formula in 1 - z for real z in (0.6, 1) when c - a - b is
//    not close to an integer; a long direct series otherwise.
//
// Throws validation_error when c is a nonpositive integer or z is outside
// the supported domain, numerical_error when no branch converges.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

}  // namespace sf

// Parameters (a, b, c) of the hypergeometric form of the radial mode ODE in
// the variable z = rho^2.  Always c = ell + 3/2; the exponent pair at z = 1
// is (0, c - a - b) = (0, -lambda).  with_potential selects the operator
// that includes the +6 zeroth-order coupling; the free family drops it.
struct HypFamily {
  int ell = 0;
  cplx lambda = 0;
  cplx a, b, c;
};

HypFamily mode_family(int ell, cplx lambda, bool with_potential);

// Frobenius solutions in z = rho^2 on (0, 1):
//   phi0        analytic at z = 0 (exponent 0),
//   phi0_tilde  singular branch at z = 0 (exponent 1 - c = -ell - 1/2),
//   phi1        analytic at z = 1 (exponent 0),
//   phi1_tilde  singular branch at z = 1: (1-z)^{-lambda} for lambda != 0,
//               the logarithmic Frobenius solution for lambda = 0.
cplx phi0(const HypFamily& f, double z);
cplx phi0_tilde(const HypFamily& f, double z);
cplx phi1(const HypFamily& f, double z);
cplx phi1_tilde(const HypFamily& f, double z);

// Closed elementary form of phi1 for the free family at lambda = 1/2:
//   [ (1-s)^{-ell-1/2} - (1+s)^{-ell-1/2} ] / ((2 ell + 1) s),  s = sqrt(1-z).
// Overflow beyond 1e300 is flagged rather than thrown.
struct ElementaryValue {
  double value = 0;
  bool overflow = false;
};
ElementaryValue phi1_elementary(int ell, double z);

// For the free family at lambda = 1/2, with psi_j(rho) = rho^ell phi_j(rho^2):
// the Wronskian identity psi0 psi1' - psi0' psi1 = C rho^{-2} (1-rho^2)^{-3/2}
// holds with C = wronskian_constant(ell) = -2^{ell + 1/2}, and
// (1-z)^{1/2} phi0(z) -> phi0_boundary_limit(ell) = 2^{ell + 1/2} as z -> 1.
double wronskian_constant(int ell);
double phi0_boundary_limit(int ell);

}  // namespace hypwave
