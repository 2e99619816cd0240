#include "hypwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypwave/errors.hpp"

namespace hypwave {

Eigen::VectorXcd spectrum_eigenvalues(const GeneratorMatrix& gen) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(gen.a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver did not converge on the " << gen.a.rows() << "x"
        << gen.a.cols() << " generator (ell=" << gen.ell
        << ", with_potential=" << gen.with_potential
        << ", max|A|=" << gen.a.cwiseAbs().maxCoeff() << ")";
    throw numerical_error(msg.str());
  }
  Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), [](cplx p, cplx q) {
    if (p.real() != q.real()) return p.real() > q.real();
    return p.imag() > q.imag();
  });
  return ev;
}

FilteredSpectrum filtered_spectrum(int n, int ell, bool with_potential,
                                   double move_tol) {
  const RadialGrid coarse(n), fine(2 * n);
  const Eigen::VectorXcd ev_coarse =
      spectrum_eigenvalues(build_generator(coarse, ell, with_potential));
  const Eigen::VectorXcd ev_fine =
      spectrum_eigenvalues(build_generator(fine, ell, with_potential));

  FilteredSpectrum out;
  for (Eigen::Index i = 0; i < ev_coarse.size(); ++i) {
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < ev_fine.size(); ++j)
      dist = std::min(dist, std::abs(ev_coarse[i] - ev_fine[j]));
    (dist <= move_tol ? out.accepted : out.rejected).push_back(ev_coarse[i]);
  }
  return out;
}

cplx quantization_function(int ell, cplx lambda) {
  const HypFamily f = mode_family(ell, lambda, /*with_potential=*/true);
  return sf::recip_gamma(f.a) * sf::recip_gamma(f.b);
}

namespace {

// Secant iteration started from a sign-change bracket [x0, x1]; falls back to
// a midpoint step whenever the secant step leaves the current bracket.  The
// indicator's real-axis zeros are simple (its two Gamma factors cannot vanish
// together: b - a = 5/2), so convergence is superlinear.
double refine_root(double x0, double f0, double x1, double f1,
                   const std::function<double(double)>& f, double tol) {
  double lo = x0, flo = f0, hi = x1;
  for (int it = 0; it < 80; ++it) {
    double x = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x) || x <= std::min(lo, hi) || x >= std::max(lo, hi))
      x = 0.5 * (lo + hi);
    const double fx = f(x);
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    if (fx == 0.0 || std::abs(x1 - x0) <= 0.01 * tol * std::max(1.0, std::abs(x1)))
      return x1;
    if (std::signbit(fx) != std::signbit(flo)) {
      hi = x;
    } else {
      lo = x;
      flo = fx;
    }
    if (std::abs(hi - lo) <= 0.01 * tol) return 0.5 * (lo + hi);
  }
  return x1;
}

}  // namespace

std::vector<double> find_eigenvalues(int ell, double eps, double tol) {
  if (ell < 0) throw validation_error("find_eigenvalues: ell must be >= 0");
  if (!(eps > 0.0 && eps < 0.5))
    throw validation_error("find_eigenvalues: eps must lie in (0, 1/2)");
  const double lo = -0.5 + eps;
  const double hi = 2.5;
  const std::function<double(double)> f = [ell](double lam) {
    return quantization_function(ell, cplx(lam, 0.0)).real();
  };

  std::vector<double> roots;
  const int steps = 300;
  double xp = lo, fp = f(lo);
  if (fp == 0.0) roots.push_back(xp);
  for (int k = 1; k <= steps; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / steps;
    const double fx = f(x);
    if (fx == 0.0)
      roots.push_back(x);
    else if (fp != 0.0 && std::signbit(fx) != std::signbit(fp))
      roots.push_back(refine_root(xp, fp, x, fx, f, tol));
    xp = x;
    fp = fx;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [tol](double p, double q) {
                            return std::abs(p - q) <= 10.0 * tol;
                          }),
              roots.end());
  return roots;
}

int indicator_zero_count(int ell, double re_lo, double re_hi, double im_lo,
                         double im_hi, int samples_per_edge) {
  if (!(re_lo < re_hi && im_lo < im_hi))
    throw validation_error("indicator_zero_count: degenerate rectangle");
  if (samples_per_edge < 8)
    throw validation_error("indicator_zero_count: need >= 8 samples per edge");

  const cplx corners[4] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi},
                           {re_lo, im_hi}};
  double total = 0.0;
  cplx fprev = quantization_function(ell, corners[0]);
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corners[e];
    const cplx z1 = corners[(e + 1) % 4];
    for (int k = 1; k <= samples_per_edge; ++k) {
      const cplx z =
          z0 + (z1 - z0) * (static_cast<double>(k) / samples_per_edge);
      const cplx fz = quantization_function(ell, z);
      if (fz == 0.0)
        throw validation_error(
            "indicator_zero_count: indicator vanishes on the rectangle "
            "boundary");
      const double step = std::arg(fz / fprev);
      if (std::abs(step) > 3.0)
        throw numerical_error(
            "indicator_zero_count: phase step near pi; increase "
            "samples_per_edge");
      total += step;
      fprev = fz;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace hypwave
