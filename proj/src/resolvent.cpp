#include "hypwave/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hypwave/errors.hpp"
#include "hypwave/parallel.hpp"
#include "hypwave/specfun.hpp"

namespace hypwave {
namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlPts = 8;
constexpr double kGlX[kGlPts] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[kGlPts] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Value / first / second rho-derivative of one homogeneous branch.
struct Hom {
  double v = 0, dv = 0, ddv = 0;
};

// The two Frobenius branches psi_j(rho) = rho^ell phi_j(rho^2) of the scalar
// second-order reduction of (lambda - L) u = 0, lambda real.  phi_0 is the
// branch analytic at rho = 0, phi_1 the one analytic at rho = 1.
class HomBasis {
 public:
  HomBasis(int ell, double lam, bool with_potential)
      : ell_(ell), lam_(lam) {
    HypFamily fam = mode_family(ell, lam, with_potential);
    a_ = fam.a;
    b_ = fam.b;
    c_ = fam.c;
    d_ = a_ + b_ + 1.0 - c_;  // = lam + 1
  }

  // Branch values only (used at quadrature points).  For psi1 the caller
  // passes w = 1 - rho^2 in a cancellation-free form.
  double psi0_val(double rho) const {
    return std::pow(rho, ell_) * sf::hyp2f1(a_, b_, c_, rho * rho).real();
  }
  double psi1_val(double rho, double w) const {
    return std::pow(rho, ell_) * sf::hyp2f1(a_, b_, d_, w).real();
  }

  // Both branches with derivatives (used at grid nodes, rho < 1).
  void at_node(double rho, Hom& h0, Hom& h1) const {
    const double z = rho * rho;
    const double w = (1.0 - rho) * (1.0 + rho);
    const cplx one = 1.0, two = 2.0;
    const double p0 = sf::hyp2f1(a_, b_, c_, z).real();
    const double p0p =
        (a_ * b_ / c_ * sf::hyp2f1(a_ + one, b_ + one, c_ + one, z)).real();
    const double p0pp = (a_ * (a_ + one) * b_ * (b_ + one) / (c_ * (c_ + one)) *
                         sf::hyp2f1(a_ + two, b_ + two, c_ + two, z))
                            .real();
    const double p1 = sf::hyp2f1(a_, b_, d_, w).real();
    const double p1p =
        -(a_ * b_ / d_ * sf::hyp2f1(a_ + one, b_ + one, d_ + one, w)).real();
    const double p1pp = (a_ * (a_ + one) * b_ * (b_ + one) / (d_ * (d_ + one)) *
                         sf::hyp2f1(a_ + two, b_ + two, d_ + two, w))
                            .real();
    h0 = chain(rho, p0, p0p, p0pp);
    h1 = chain(rho, p1, p1p, p1pp);
  }

  // d/drho psi1 at rho = 1, where phi1(1) = 1.
  double dpsi1_at_one() const {
    return static_cast<double>(ell_) - 2.0 * (a_ * b_ / d_).real();
  }

  // The analytic-at-0 branch grows like psi0 ~ B (1-rho^2)^{-lam} at the far
  // endpoint (log-modified at integer lam).  In the product psi0'(rho) I1(rho)
  // the divergence cancels against the vanishing tail integral, leaving
  // lim_{rho->1} psi0' I1 = [B lam / (lam+1)] F(1) / C; this returns that
  // bracket, B lam = Gamma(c) Gamma(lam+1) / (Gamma(a) Gamma(b)), which stays
  // finite and correct through lam = 0.
  double boundary_coefficient() const {
    return (sf::gamma(c_) * sf::gamma(cplx(lam_ + 1.0)) * sf::recip_gamma(a_) *
            sf::recip_gamma(b_))
               .real() /
           (lam_ + 1.0);
  }

 private:
  // psi = rho^ell phi(rho^2) and its first two rho-derivatives from
  // phi, phi', phi''.
  Hom chain(double rho, double p, double pp, double ppp) const {
    Hom h;
    const double e = static_cast<double>(ell_);
    h.v = std::pow(rho, ell_) * p;
    h.dv = e * std::pow(rho, ell_ - 1) * p + 2.0 * std::pow(rho, ell_ + 1) * pp;
    h.ddv = e * (e - 1.0) * std::pow(rho, ell_ - 2) * p +
            (4.0 * e + 2.0) * std::pow(rho, ell_) * pp +
            4.0 * std::pow(rho, ell_ + 2) * ppp;
    return h;
  }

  int ell_;
  double lam_;
  cplx a_, b_, c_, d_;
};

ResolventResult matrix_solve(int ell, cplx lambda, const ModeFieldC& f,
                             const RadialGrid& g, bool with_potential,
                             double tol) {
  const int n = g.size();
  GeneratorMatrix gen = build_generator(g, ell, with_potential);
  Eigen::MatrixXcd m = (-gen.a).cast<cplx>();
  m.diagonal().array() += lambda;

  Eigen::VectorXcd fv(2 * n);
  fv << f.u1, f.u2;
  Eigen::VectorXcd uv = m.partialPivLu().solve(fv);
  Eigen::VectorXcd rv = m * uv - fv;

  ResolventResult out;
  out.u = ModeFieldC{ell, uv.head(n), uv.tail(n)};
  ModeFieldC r{ell, rv.head(n), rv.tail(n)};
  out.residual = energy_norm(r, g) / energy_norm(f, g);
  if (!(out.residual <= tol)) {
    throw numerical_error(
        "resolvent matrix solve: relative residual " +
        std::to_string(out.residual) + " exceeds tolerance " +
        std::to_string(tol) + " (lambda too close to the spectrum?)");
  }
  return out;
}

ResolventResult kernel_solve(int ell, double lam, const ModeFieldC& f,
                             const RadialGrid& g, bool with_potential,
                             double tol) {
  const int n = g.size();
  const int par = RadialGrid::parity_of_ell(ell);
  const Eigen::VectorXd& rho = g.rho();
  const HomBasis basis(ell, lam, with_potential);

  // Right-hand side of the scalar reduction: F = rho f1' + (lam+2) f1 + f2,
  // same parity as f1, held as real/imaginary nodal parts for interpolation.
  Eigen::VectorXd f1re = f.u1.real(), f1im = f.u1.imag();
  Eigen::VectorXd Fre = rho.cwiseProduct(g.d1(par) * f1re) +
                        (lam + 2.0) * f1re +
                        Eigen::VectorXd(f.u2.real());
  Eigen::VectorXd Fim = rho.cwiseProduct(g.d1(par) * f1im) +
                        (lam + 2.0) * f1im +
                        Eigen::VectorXd(f.u2.imag());

  // Wronskian normalization W(psi0,psi1) = C rho^{-2} (1-rho^2)^{-(lam+1)},
  // anchored at rho = 1/2.  A cancellation there means lambda sits on an
  // eigenvalue and the kernel is singular.
  Hom h0_a, h1_a;
  basis.at_node(0.5, h0_a, h1_a);
  const double anchor = 0.25 * std::pow(0.75, lam + 1.0);
  const double cw = (h0_a.v * h1_a.dv - h0_a.dv * h1_a.v) * anchor;
  const double cw_scale =
      (std::abs(h0_a.v * h1_a.dv) + std::abs(h0_a.dv * h1_a.v)) * anchor;
  if (std::abs(cw) <= 1e-10 * cw_scale) {
    throw numerical_error(
        "resolvent kernel solve: homogeneous branches are dependent "
        "(lambda is numerically an eigenvalue)");
  }

  // Panel-wise cumulative quadrature of the kernel integrals
  //   J0_k = int_{panel k} psi0 F s^2 (1-s^2)^lam ds   (and J1 with psi1)
  // over panels 0 = b_0 < rho_{n-1} < ... < rho_1 < rho_0 = 1.  The last
  // panel is mapped by 1 - s = h v^2 so the (1-s^2)^lam endpoint behavior
  // becomes the mild weight v^{2 lam + 1}.
  std::vector<cplx> j0(n), j1(n);
  std::vector<double> bounds(n + 1);
  bounds[0] = 0.0;
  for (int k = 1; k <= n; ++k) bounds[k] = rho[n - k];
  parallel_for(n, [&](std::ptrdiff_t k) {
    cplx s0 = 0.0, s1 = 0.0;
    if (k < n - 1) {
      const double mid = 0.5 * (bounds[k] + bounds[k + 1]);
      const double half = 0.5 * (bounds[k + 1] - bounds[k]);
      for (int q = 0; q < kGlPts; ++q) {
        const double s = mid + half * kGlX[q];
        const double w = (1.0 - s) * (1.0 + s);
        const cplx fq(g.interpolate(Fre, par, s), g.interpolate(Fim, par, s));
        const cplx core = fq * (half * kGlW[q] * s * s * std::pow(w, lam));
        s0 += basis.psi0_val(s) * core;
        s1 += basis.psi1_val(s, w) * core;
      }
    } else {
      const double h = 1.0 - bounds[n - 1];
      for (int q = 0; q < kGlPts; ++q) {
        const double v = 0.5 + 0.5 * kGlX[q];
        const double s = 1.0 - h * v * v;
        const double w = h * v * v * (2.0 - h * v * v);
        const double meas = 0.5 * kGlW[q] * 2.0 * h * v;
        const cplx fq(g.interpolate(Fre, par, s), g.interpolate(Fim, par, s));
        const cplx core = fq * (meas * s * s * std::pow(w, lam));
        s0 += basis.psi0_val(s) * core;
        s1 += basis.psi1_val(s, w) * core;
      }
    }
    j0[k] = s0;
    j1[k] = s1;
  });

  // I0(rho_i) = (1/C) int_0^{rho_i}, I1(rho_i) = (1/C) int_{rho_i}^1.
  // Node rho_i is panel boundary n - i, so I0 sums panels k < n - i and
  // I1 sums panels k >= n - i.
  Eigen::VectorXcd i0(n), i1(n);
  {
    std::vector<cplx> prefix(n + 1), suffix(n + 1);
    prefix[0] = 0.0;
    for (int k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + j0[k];
    suffix[n] = 0.0;
    for (int k = n - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + j1[k];
    for (int i = 0; i < n; ++i) {
      i0[i] = prefix[n - i] / cw;
      i1[i] = suffix[n - i] / cw;
    }
  }

  // Assemble u1 = -psi1 I0 - psi0 I1, u2 = rho u1' + (lam+1) u1 - f1, and
  // the semi-analytic defect of the scalar equation at interior nodes.
  Eigen::VectorXcd u1(n), u2(n);
  std::vector<double> defect(n, 0.0), fmag(n, 0.0);
  const double pot = with_potential ? 6.0 : 0.0;
  parallel_for(n - 1, [&](std::ptrdiff_t t) {
    const int i = static_cast<int>(t) + 1;
    const double r = rho[i];
    const double w = (1.0 - r) * (1.0 + r);
    const cplx fi(Fre[i], Fim[i]);
    Hom h0, h1;
    basis.at_node(r, h0, h1);
    const cplx v = -h1.v * i0[i] - h0.v * i1[i];
    const cplx dv = -h1.dv * i0[i] - h0.dv * i1[i];
    const cplx ddv = -h1.ddv * i0[i] - h0.ddv * i1[i] - fi / w;
    u1[i] = v;
    u2[i] = r * dv + (lam + 1.0) * v - f.u1[i];
    const cplx res = -w * ddv + 2.0 * ((lam + 2.0) * r - 1.0 / r) * dv +
                     ((lam + 1.0) * (lam + 2.0) - pot +
                      static_cast<double>(ell) * (ell + 1) / (r * r)) *
                         v -
                     fi;
    defect[i] = std::abs(res);
    fmag[i] = std::abs(fi);
  });

  // Boundary node rho = 1: psi1(1) = 1 and I1(1) = 0, and the product
  // psi0' I1 tends to B F(1) / C with B the boundary coefficient.
  {
    const cplx f1 = cplx(Fre[0], Fim[0]);
    u1[0] = -i0[0];
    const cplx du1 =
        -basis.dpsi1_at_one() * i0[0] - basis.boundary_coefficient() * f1 / cw;
    u2[0] = du1 + (lam + 1.0) * u1[0] - f.u1[0];
  }

  ResolventResult out;
  out.u = ModeFieldC{ell, std::move(u1), std::move(u2)};
  out.wronskian_constant = cw;
  const double fmax =
      std::max(*std::max_element(fmag.begin(), fmag.end()), 1e-300);
  out.residual = *std::max_element(defect.begin(), defect.end()) / fmax;
  if (!(out.residual <= tol)) {
    throw numerical_error(
        "resolvent kernel solve: scalar-equation defect " +
        std::to_string(out.residual) + " exceeds tolerance " +
        std::to_string(tol));
  }
  return out;
}

}  // namespace

ResolventResult resolvent_solve(int ell, cplx lambda, const ModeFieldC& f,
                                const RadialGrid& g, ResolventMethod method,
                                bool with_potential, double tol) {
  const int n = g.size();
  std::string bad;
  if (ell < 0) bad += " ell must be >= 0;";
  if (n < 2) bad += " grid needs at least 2 nodes;";
  if (f.ell != ell) bad += " f.ell does not match ell;";
  if (f.u1.size() != n || f.u2.size() != n)
    bad += " f component sizes do not match the grid;";
  if (!(tol > 0.0)) bad += " tol must be positive;";
  if (method == ResolventMethod::variation_of_constants) {
    if (lambda.imag() != 0.0)
      bad += " variation_of_constants requires real lambda;";
    if (!(lambda.real() > -0.5))
      bad += " variation_of_constants requires lambda > -1/2;";
  }
  if (!bad.empty()) throw validation_error("resolvent_solve:" + bad);

  if (energy_norm(f, g) == 0.0) {
    ResolventResult out;
    out.u = ModeFieldC{ell, Eigen::VectorXcd::Zero(n),
                       Eigen::VectorXcd::Zero(n)};
    return out;
  }
  if (method == ResolventMethod::matrix)
    return matrix_solve(ell, lambda, f, g, with_potential, tol);
  return kernel_solve(ell, lambda.real(), f, g, with_potential, tol);
}

}  // namespace hypwave
