#pragma once

#include <vector>

#include "hypwave/generator.hpp"
#include "hypwave/specfun.hpp"

namespace hypwave {

// All eigenvalues of the dense generator, sorted by real part (most unstable
// first; ties broken by descending imaginary part).
Eigen::VectorXcd spectrum_eigenvalues(const GeneratorMatrix& gen);

// Resolution filter: an eigenvalue computed at resolution n is accepted when
// an eigenvalue at resolution 2n lies within move_tol of it.  Spurious
// discretization eigenvalues wander under refinement and are rejected.
// Both lists keep the descending-real-part order.
struct FilteredSpectrum {
  std::vector<cplx> accepted;
  std::vector<cplx> rejected;
};
FilteredSpectrum filtered_spectrum(int n, int ell, bool with_potential,
                                   double move_tol = 1e-4);

// Analytic eigenvalue indicator for the potential-coupled mode family:
// 1/(Gamma(a) Gamma(b)) with a = (lambda + ell - 1)/2, b = (lambda + ell + 4)/2.
// Entire in lambda; its zeros in the half-plane Re(lambda) > -1/2 are exactly
// the unstable mode eigenvalues (the solution analytic at rho = 0 picks up a
// (1-rho^2)^{-lambda} singularity at rho = 1 unless a or b hits a Gamma pole).
cplx quantization_function(int ell, cplx lambda);

// Zeros of the indicator in the half-plane Re(lambda) > -1/2 + eps.  Zeros of
// 1/(Gamma(a) Gamma(b)) occur exactly where a or b is a nonpositive integer,
// which forces lambda real with lambda <= 1 - ell, so a sign-change scan over
// (-1/2 + eps, 2.5] followed by secant refinement (to tol) finds them all.
// Requires eps in (0, 1/2).
std::vector<double> find_eigenvalues(int ell, double eps = 1e-6,
                                     double tol = 1e-10);

// Number of zeros of the indicator inside the rectangle
// [re_lo, re_hi] x [im_lo, im_hi], counted by the winding of its boundary
// image around 0 (argument principle; the indicator is entire, so winding =
// zero count).  Requires that no zero lies on the boundary itself.
int indicator_zero_count(int ell, double re_lo, double re_hi, double im_lo,
                         double im_hi, int samples_per_edge = 4000);

}  // namespace hypwave
