#include "hypwave/generator.hpp"

#include <complex>

#include "hypwave/errors.hpp"
#include "hypwave/parallel.hpp"

namespace hypwave {

GeneratorMatrix build_generator(const RadialGrid& g, int ell,
                                bool with_potential) {
  if (ell < 0) throw validation_error("build_generator: requires ell >= 0");
  const int n = g.size();
  const int s = RadialGrid::parity_of_ell(ell);
  const Eigen::MatrixXd& d = g.d1(s);
  const Eigen::MatrixXd& d2 = g.d2(s);
  const Eigen::VectorXd& rho = g.rho();

  GeneratorMatrix gen;
  gen.ell = ell;
  gen.with_potential = with_potential;
  gen.n = n;
  gen.a.setZero(2 * n, 2 * n);

  const double ll1 = static_cast<double>(ell) * (ell + 1);
  for (int i = 0; i < n; ++i) {
    const double r = rho(i);
    for (int j = 0; j < n; ++j) {
      // row1 = -rho u1' - u1 + u2
      gen.a(i, j) = -r * d(i, j);
      // row2 = Delta_l u1 - rho u2' - 2 u2 (+ 6 u1)
      gen.a(n + i, j) = d2(i, j) + (2.0 / r) * d(i, j);
      gen.a(n + i, n + j) = -r * d(i, j);
    }
    gen.a(i, i) -= 1.0;
    gen.a(i, n + i) = 1.0;
    gen.a(n + i, i) -= ll1 / (r * r);
    if (with_potential) gen.a(n + i, i) += 6.0;
    gen.a(n + i, n + i) -= 2.0;
  }
  gen.a_row = gen.a;
  return gen;
}

void apply_generator(const GeneratorMatrix& gen, const double* x, double* y) {
  const int dim = 2 * gen.n;
  const auto& a = gen.a_row;
  parallel_for(dim, [&](std::ptrdiff_t i) {
    const double* row = a.data() + static_cast<std::ptrdiff_t>(i) * dim;
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) acc += row[j] * x[j];
    y[i] = acc;
  });
}

void apply_generator(const GeneratorMatrix& gen, const ModeField& u,
                     ModeField& out) {
  const int n = gen.n;
  if (u.u1.size() != n || u.u2.size() != n) {
    throw validation_error("apply_generator: field size mismatch");
  }
  Eigen::VectorXd x(2 * n), y(2 * n);
  x.head(n) = u.u1;
  x.tail(n) = u.u2;
  apply_generator(gen, x.data(), y.data());
  out.ell = u.ell;
  out.u1 = y.head(n);
  out.u2 = y.tail(n);
}

std::complex<double> energy_inner_product(const ModeFieldC& u,
                                          const ModeFieldC& v,
                                          const RadialGrid& g) {
  const int n = g.size();
  if (u.u1.size() != n || v.u1.size() != n || u.u2.size() != n ||
      v.u2.size() != n) {
    throw validation_error("energy_inner_product: field size mismatch");
  }
  if (u.ell != v.ell) {
    throw validation_error(
        "energy_inner_product: fields belong to different modes");
  }
  const int s = RadialGrid::parity_of_ell(u.ell);
  const Eigen::MatrixXd& d = g.d1(s);
  const Eigen::VectorXcd du = d * u.u1;
  const Eigen::VectorXcd dv = d * v.u1;
  const Eigen::VectorXd& w = g.weights();
  const Eigen::VectorXd& rho = g.rho();
  const double ll1 = static_cast<double>(u.ell) * (u.ell + 1);

  std::complex<double> acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += w(i) * du(i) * std::conj(dv(i));
    acc += w(i) * (ll1 / (rho(i) * rho(i))) * u.u1(i) * std::conj(v.u1(i));
    acc += w(i) * u.u2(i) * std::conj(v.u2(i));
  }
  acc += u.u1(0) * std::conj(v.u1(0));  // boundary term at rho = 1
  return acc;
}

double energy_inner_product(const ModeField& u, const ModeField& v,
                            const RadialGrid& g) {
  ModeFieldC uc{u.ell, u.u1.cast<std::complex<double>>(),
                u.u2.cast<std::complex<double>>()};
  ModeFieldC vc{v.ell, v.u1.cast<std::complex<double>>(),
                v.u2.cast<std::complex<double>>()};
  return energy_inner_product(uc, vc, g).real();
}

double energy_norm(const ModeFieldC& u, const RadialGrid& g) {
  return std::sqrt(std::max(0.0, energy_inner_product(u, u, g).real()));
}

double energy_norm(const ModeField& u, const RadialGrid& g) {
  return std::sqrt(std::max(0.0, energy_inner_product(u, u, g)));
}

double dissipativity_check(const ModeField& u, const RadialGrid& g) {
  GeneratorMatrix free_gen = build_generator(g, u.ell, false);
  ModeField lu;
  apply_generator(free_gen, u, lu);
  return energy_inner_product(lu, u, g) +
         0.5 * energy_inner_product(u, u, g);
}

}  // namespace hypwave
