#pragma once

#include <vector>

#include "hypwave/generator.hpp"

namespace hypwave {

// Circle in the complex spectral plane.
struct Contour {
  cplx center;
  double radius;
};

// Circle enclosing every unstable eigenvalue while staying in the resolvent
// set: center 1/2, radius 3/4 (reaches Re z = -1/4 > -1/2 on the left and
// passes between the isolated points 0 and 1 and the rest of the spectrum).
Contour unstable_contour();

// Small circles isolating the single eigenvalue 0 or 1 (radius 1/2).
Contour eigenvalue_contour(int which);

enum class ProjectionMethod { contour, eigenvectors };

struct ProjectionMatrix {
  int ell = 0;
  bool with_potential = false;
  int n = 0;
  Contour contour{};
  ProjectionMethod method = ProjectionMethod::contour;
  Eigen::MatrixXd p;                     // 2n x 2n Riesz projection
  int rank = 0;                          // singular values > 0.5
  double idempotency_defect = 0;         // ||P^2 - P||_2
  double commutator_defect = 0;          // ||P A - A P||_2
  double max_imag = 0;                   // residual imaginary part dropped
  std::vector<double> refinement_trace;  // ||P_{2K} - P_K||_F per doubling
};

// Riesz projection (1/2pi i) \oint (z - A)^{-1} dz onto the spectrum of A
// inside the contour.
//  * contour: trapezoid rule starting at 64 nodes, node count doubled until
//    the projection moves by <= quad_tol (Frobenius); the resolvent solves
//    at the nodes run through parallel_for with a fixed summation order, so
//    results are bitwise reproducible at any thread count.  Throws
//    numerical_error with the refinement trace if 1024 nodes do not settle.
//  * eigenvectors: P = V diag(chi) V^{-1} with chi selecting eigenvalues
//    inside the contour.
ProjectionMatrix spectral_projection(const GeneratorMatrix& gen,
                                     const Contour& c,
                                     ProjectionMethod method,
                                     double quad_tol = 1e-9);

// Projection over the default unstable contour.
ProjectionMatrix unstable_projection(
    const GeneratorMatrix& gen,
    ProjectionMethod method = ProjectionMethod::contour);

// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

// y = P x on a stacked [u1; u2] vector or a ModeField.
Eigen::VectorXd apply_projection(const ProjectionMatrix& p,
                                 const Eigen::VectorXd& x);
ModeField apply_projection(const ProjectionMatrix& p, const ModeField& u);

}  // namespace hypwave
