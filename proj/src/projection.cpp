#include "hypwave/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "hypwave/errors.hpp"
#include "hypwave/parallel.hpp"

namespace hypwave {

Contour unstable_contour() { return Contour{cplx(0.5, 0.0), 0.75}; }

Contour eigenvalue_contour(int which) {
  if (which != 0 && which != 1)
    throw validation_error("eigenvalue_contour: which must be 0 or 1");
  return Contour{cplx(static_cast<double>(which), 0.0), 0.5};
}

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

namespace {

// Sum of e^{i theta} (z(theta) - A)^{-1} over the given node angles.  Nodes
// are independent resolvent solves, run through parallel_for in fixed-size
// chunks whose partial results are then added in index order, so the sum is
// bitwise identical in serial and parallel execution.
Eigen::MatrixXcd node_sum(const Eigen::MatrixXd& a, const Contour& c,
                          const std::vector<double>& angles) {
  const Eigen::Index dim = a.rows();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(angles.size());
  constexpr std::ptrdiff_t chunk = 16;
  std::vector<Eigen::MatrixXcd> slot(static_cast<std::size_t>(chunk));
  for (std::ptrdiff_t base = 0; base < count; base += chunk) {
    const std::ptrdiff_t batch = std::min(chunk, count - base);
    parallel_for(batch, [&](std::ptrdiff_t i) {
      const double th = angles[static_cast<std::size_t>(base + i)];
      const cplx phase = std::polar(1.0, th);
      Eigen::MatrixXcd m = (-a).cast<cplx>();
      m.diagonal().array() += c.center + c.radius * phase;
      slot[static_cast<std::size_t>(i)] = phase * m.partialPivLu().inverse();
    });
    for (std::ptrdiff_t i = 0; i < batch; ++i)
      total += slot[static_cast<std::size_t>(i)];
  }
  return total;
}

// Trapezoid rule for (1/2 pi i) \oint (z - A)^{-1} dz on the circle:
// with z = c + r e^{i theta} the rule reduces to (r/K) sum e^{i theta_k} R_k.
// Node count starts at 64 and doubles (reusing previous nodes) until the
// projection moves by <= tol in the Frobenius norm.
Eigen::MatrixXd contour_projection(const Eigen::MatrixXd& a, const Contour& c,
                                   double tol, std::vector<double>& trace,
                                   double& max_imag) {
  constexpr int k_start = 64;
  constexpr int k_max = 1024;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> ang(k_start);
  for (int k = 0; k < k_start; ++k)
    ang[static_cast<std::size_t>(k)] = two_pi * k / k_start;
  Eigen::MatrixXcd s = node_sum(a, c, ang);
  int nodes = k_start;
  Eigen::MatrixXcd p_prev = (c.radius / nodes) * s;

  while (nodes < k_max) {
    std::vector<double> odd(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k)
      odd[static_cast<std::size_t>(k)] = two_pi * (2 * k + 1) / (2 * nodes);
    s += node_sum(a, c, odd);
    nodes *= 2;
    const Eigen::MatrixXcd p_cur = (c.radius / nodes) * s;
    const double delta = (p_cur - p_prev).norm();
    trace.push_back(delta);
    if (delta <= tol) {
      max_imag = p_cur.imag().cwiseAbs().maxCoeff();
      return p_cur.real();
    }
    p_prev = p_cur;
  }

  std::ostringstream msg;
  msg << "contour quadrature did not settle to " << tol << " by " << k_max
      << " nodes; refinement trace:";
  for (double d : trace) msg << " " << d;
  throw numerical_error(msg.str());
}

// Spectral projector assembled from eigenvectors: for each simple eigenvalue
// lambda inside the contour, P_lambda = v y^T / (y^T v) with right and left
// eigenvectors v, y (the latter from the transposed matrix).  This touches
// only the selected, well-separated eigenvalues; inverting the full
// eigenvector basis would drag in the ill-conditioned pseudospectral cloud.
Eigen::MatrixXd eigvec_projection(const Eigen::MatrixXd& a, const Contour& c,
                                  double& max_imag) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigensolver did not converge for the projection");
  const Eigen::VectorXcd d = es.eigenvalues();
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::Index dim = a.rows();

  std::vector<Eigen::Index> sel;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (std::abs(d[i] - c.center) < c.radius) sel.push_back(i);
  if (sel.empty()) {
    max_imag = 0.0;
    return Eigen::MatrixXd::Zero(dim, dim);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> est(a.transpose(),
                                          /*computeEigenvectors=*/true);
  if (est.info() != Eigen::Success)
    throw numerical_error(
        "eigensolver did not converge on the transposed generator");
  const Eigen::VectorXcd dt = est.eigenvalues();
  const Eigen::MatrixXcd y = est.eigenvectors();

  Eigen::MatrixXcd pc = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i : sel) {
    Eigen::Index j = 0;
    double best = std::abs(dt[0] - d[i]);
    for (Eigen::Index k = 1; k < dim; ++k) {
      const double dist = std::abs(dt[k] - d[i]);
      if (dist < best) {
        best = dist;
        j = k;
      }
    }
    if (best > 1e-6 * std::max(1.0, std::abs(d[i])))
      throw numerical_error(
          "left/right eigenvalue pairing failed inside the contour");
    const cplx denom = y.col(j).transpose() * v.col(i);
    if (std::abs(denom) < 1e-8 * y.col(j).norm() * v.col(i).norm())
      throw numerical_error(
          "nearly defective eigenvalue inside the contour; eigenvector "
          "projection is not reliable");
    pc += (v.col(i) * y.col(j).transpose()) / denom;
  }
  max_imag = pc.imag().cwiseAbs().maxCoeff();
  return pc.real();
}

}  // namespace

ProjectionMatrix spectral_projection(const GeneratorMatrix& gen,
                                     const Contour& c, ProjectionMethod method,
                                     double quad_tol) {
  ProjectionMatrix out;
  out.ell = gen.ell;
  out.with_potential = gen.with_potential;
  out.n = gen.n;
  out.contour = c;
  out.method = method;
  if (method == ProjectionMethod::contour)
    out.p = contour_projection(gen.a, c, quad_tol, out.refinement_trace,
                               out.max_imag);
  else
    out.p = eigvec_projection(gen.a, c, out.max_imag);

  out.idempotency_defect = spectral_norm(out.p * out.p - out.p);
  out.commutator_defect = spectral_norm(out.p * gen.a - gen.a * out.p);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(out.p);
  out.rank = static_cast<int>(
      (svd.singularValues().array() > 0.5).count());
  return out;
}

ProjectionMatrix unstable_projection(const GeneratorMatrix& gen,
                                     ProjectionMethod method) {
  return spectral_projection(gen, unstable_contour(), method);
}

Eigen::VectorXd apply_projection(const ProjectionMatrix& p,
                                 const Eigen::VectorXd& x) {
  if (x.size() != p.p.cols())
    throw validation_error("apply_projection: size mismatch");
  return p.p * x;
}

ModeField apply_projection(const ProjectionMatrix& p, const ModeField& u) {
  if (u.u1.size() != p.n || u.u2.size() != p.n)
    throw validation_error("apply_projection: field/grid size mismatch");
  Eigen::VectorXd x(2 * p.n);
  x.head(p.n) = u.u1;
  x.tail(p.n) = u.u2;
  const Eigen::VectorXd y = p.p * x;
  ModeField out;
  out.ell = u.ell;
  out.u1 = y.head(p.n);
  out.u2 = y.tail(p.n);
  return out;
}

}  // namespace hypwave
