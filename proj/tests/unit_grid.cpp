#include "hypwave/grid.hpp"

#include <cmath>

#include "doctest.h"
#include "hypwave/errors.hpp"
#include "hypwave/generator.hpp"
#include "hypwave/parallel.hpp"
#include "hypwave/rng.hpp"

using namespace hypwave;

namespace {

Eigen::VectorXd monomial(const RadialGrid& g, int k) {
  Eigen::VectorXd v(g.size());
  for (int i = 0; i < g.size(); ++i) v(i) = std::pow(g.rho()(i), k);
  return v;
}

}  // namespace

TEST_CASE("grid nodes and weights") {
  RadialGrid g(24);
  CHECK(g.size() == 24);
  CHECK(g.rho()(0) == 1.0);                  // boundary node first
  CHECK(g.rho()(g.size() - 1) > 0.0);        // no node at the origin
  for (int i = 0; i + 1 < g.size(); ++i) CHECK(g.rho()(i) > g.rho()(i + 1));
  for (int i = 0; i < g.size(); ++i) CHECK(g.weights()(i) > 0.0);

  // Quadrature: exact moments of rho^2 drho for even polynomials.
  for (int k = 0; k <= 20; k += 2) {
    const double got = g.weights().dot(monomial(g, k));
    const double want = 1.0 / (k + 3);
    CHECK(std::abs(got - want) < 1e-14);
  }
  CHECK_THROWS_AS(RadialGrid(2), validation_error);
}

TEST_CASE("folded differentiation is exact on matching-parity monomials") {
  RadialGrid g(16);
  const int n = g.size();
  for (int k = 0; k <= n / 2; ++k) {
    const int parity = (k % 2 == 0) ? 1 : -1;
    const Eigen::VectorXd u = monomial(g, k);
    const Eigen::VectorXd du = g.d1(parity) * u;
    const Eigen::VectorXd d2u = g.d2(parity) * u;
    for (int i = 0; i < n; ++i) {
      const double r = g.rho()(i);
      const double want1 = k == 0 ? 0.0 : k * std::pow(r, k - 1);
      const double want2 =
          k <= 1 ? 0.0 : static_cast<double>(k) * (k - 1) * std::pow(r, k - 2);
      CHECK(std::abs(du(i) - want1) < 1e-10);
      CHECK(std::abs(d2u(i) - want2) < 5e-8);
    }
  }
}

TEST_CASE("barycentric interpolation reproduces polynomials off-grid") {
  RadialGrid g(16);
  const Eigen::VectorXd u = monomial(g, 6);
  for (double r : {0.123, 0.5, 0.87, 0.999}) {
    CHECK(std::abs(g.interpolate(u, 1, r) - std::pow(r, 6)) < 1e-13);
  }
  const Eigen::VectorXd v = monomial(g, 5);
  for (double r : {0.123, 0.5, 0.87}) {
    CHECK(std::abs(g.interpolate(v, -1, r) - std::pow(r, 5)) < 1e-13);
  }
  // On-grid points return the stored value exactly.
  CHECK(g.interpolate(u, 1, g.rho()(3)) == u(3));
}

TEST_CASE("energy inner product reference values") {
  RadialGrid g(20);
  const int n = g.size();
  ModeField ones{0, Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n)};
  // u1 = 1, ell = 0: only the boundary term contributes.
  CHECK(energy_inner_product(ones, ones, g) == doctest::Approx(1.0).epsilon(1e-14));
  ModeField second{0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
  // u2 = 1: the volume term integrates rho^2 on (0,1).
  CHECK(energy_inner_product(second, second, g) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Hermitian symmetry with complex entries.
  ModeFieldC a{1, Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
  ModeFieldC b = a;
  Rng rng(5);
  for (int i = 0; i < n; ++i) {
    a.u1(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    a.u2(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    b.u1(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    b.u2(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  }
  const auto ab = energy_inner_product(a, b, g);
  const auto ba = energy_inner_product(b, a, g);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
  const auto aa = energy_inner_product(a, a, g);
  CHECK(aa.real() > 0.0);
  CHECK(std::abs(aa.imag()) < 1e-15);
}

TEST_CASE("generator matches symbolic application on monomials") {
  RadialGrid g(18);
  const int n = g.size();
  for (int ell : {0, 1, 2, 3}) {
    for (bool pot : {false, true}) {
      const auto gen = build_generator(g, ell, pot);
      // u1 = rho^k, u2 = rho^j with k, j = ell + 2 (matching parity, high
      // enough that Delta_l u1 is a polynomial).
      const int k = ell + 2;
      ModeField u{ell, monomial(g, k), monomial(g, k)};
      ModeField lu;
      apply_generator(gen, u, lu);
      for (int i = 0; i < n; ++i) {
        const double r = g.rho()(i);
        const double rk = std::pow(r, k);
        const double row1 = -k * rk - rk + rk;
        const double lap =
            (k * (k + 1) - ell * (ell + 1)) * std::pow(r, k - 2);
        const double row2 =
            lap - k * rk - 2.0 * rk + (pot ? 6.0 * rk : 0.0);
        CHECK(std::abs(lu.u1(i) - row1) < 1e-9);
        CHECK(std::abs(lu.u2(i) - row2) < 5e-7);
      }
    }
  }
}

TEST_CASE("exact discrete eigenpairs of the coupled generator") {
  RadialGrid g(32);
  const int n = g.size();
  // ell = 0: (1, 2) is an eigenvector with eigenvalue 1.
  {
    const auto gen = build_generator(g, 0, true);
    ModeField u{0, Eigen::VectorXd::Ones(n), 2.0 * Eigen::VectorXd::Ones(n)};
    ModeField lu;
    apply_generator(gen, u, lu);
    ModeField diff{0, lu.u1 - u.u1, lu.u2 - u.u2};
    // Residual carries the O(N^4 eps) rounding of the second-derivative
    // matrix rows.
    CHECK(energy_norm(diff, g) < 1e-9);
  }
  // ell = 1: (rho, 2 rho) is an eigenvector with eigenvalue 0.
  {
    const auto gen = build_generator(g, 1, true);
    ModeField u{1, g.rho(), 2.0 * g.rho()};
    ModeField lu;
    apply_generator(gen, u, lu);
    ModeField zero{1, lu.u1, lu.u2};
    CHECK(energy_norm(zero, g) < 1e-9);
  }
}

TEST_CASE("free generator dissipativity on a random polynomial family") {
  RadialGrid g(48);
  const int n = g.size();
  Rng rng(20260814);
  for (int ell : {0, 1, 2}) {
    for (int trial = 0; trial < 50; ++trial) {
      // Random polynomial data of degree <= 10 with the mode's parity:
      // the quadrature is then exact and the sign bound must hold to
      // rounding.
      Eigen::VectorXd u1 = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd u2 = Eigen::VectorXd::Zero(n);
      const int base = (ell % 2 == 0) ? 0 : 1;
      for (int k = base; k <= 10; k += 2) {
        const double c1 = rng.uniform(-1, 1);
        const double c2 = rng.uniform(-1, 1);
        for (int i = 0; i < n; ++i) {
          const double p = std::pow(g.rho()(i), k);
          u1(i) += c1 * p;
          u2(i) += c2 * p;
        }
      }
      ModeField u{ell, u1, u2};
      const double v = dissipativity_check(u, g);
      CAPTURE(ell);
      CAPTURE(trial);
      CHECK(v <= 1e-10);
    }
  }
}

TEST_CASE("dissipativity reference value") {
  RadialGrid g(24);
  const int n = g.size();
  ModeField u{0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
  // L0 (0,1) = (1, -2); the combination collapses to -(3/2)||u2||^2.
  CHECK(dissipativity_check(u, g) ==
        doctest::Approx(-1.5 / 3.0).epsilon(1e-13));
}

TEST_CASE("serial and parallel generator application agree bitwise") {
  RadialGrid g(40);
  const auto gen = build_generator(g, 2, true);
  Rng rng(17);
  Eigen::VectorXd x(2 * g.size()), y_par(2 * g.size()), y_ser(2 * g.size());
  for (int i = 0; i < x.size(); ++i) x(i) = rng.uniform(-1, 1);
  apply_generator(gen, x.data(), y_par.data());
  force_serial() = true;
  apply_generator(gen, x.data(), y_ser.data());
  force_serial() = false;
  for (int i = 0; i < x.size(); ++i) CHECK(y_par(i) == y_ser(i));
}
