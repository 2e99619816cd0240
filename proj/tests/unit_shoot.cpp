#include "hypwave/shoot.hpp"

#include <cmath>

#include "doctest.h"
#include "hypwave/errors.hpp"
#include "hypwave/manifold.hpp"

using namespace hypwave;

namespace {

ModeField zero_field(int n) {
  ModeField z;
  z.ell = 0;
  z.u1 = Eigen::VectorXd::Zero(n);
  z.u2 = Eigen::VectorXd::Zero(n);
  return z;
}

// Stable-subspace bump of prescribed energy norm.
ModeField stable_bump(const RadialGrid& g, double scale) {
  IterationConfig mc;
  mc.n = g.size();
  ModeField u;
  u.ell = 0;
  u.u1.resize(g.size());
  u.u2.resize(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double r2 = g.rho()[i] * g.rho()[i];
    u.u1[i] = (1.0 - r2) * (1.0 - r2);
    u.u2[i] = 0.5 * (1.0 - r2);
  }
  ModeField s = remove_unstable(u, g, mc);
  const double nn = energy_norm(s, g);
  s.u1 *= scale / nn;
  s.u2 *= scale / nn;
  return s;
}

}  // namespace

TEST_CASE("classify_radial: exact-family fates and diagnostics") {
  const int n = 12;
  RadialGrid g(n);
  ShootConfig cfg;
  cfg.n = n;

  SUBCASE("positive family parameter relaxes to the flat equilibrium") {
    ShootDiagnostics d;
    const Outcome o = classify_radial(exact_family_va(0.05, 0.0, g), g, cfg, &d);
    CHECK(o == Outcome::dispersive);
    CHECK_FALSE(d.blowup);
    CHECK(d.slope > cfg.slope_threshold);
    CHECK(std::abs(d.mean_u1_final + std::sqrt(2.0)) <= 1e-3);
  }
  SUBCASE("negative family parameter blows up in finite time") {
    ShootDiagnostics d;
    const Outcome o = classify_radial(exact_family_va(-0.05, 0.0, g), g, cfg, &d);
    CHECK(o == Outcome::blowup);
    CHECK(d.blowup);
    CHECK(d.blowup_tau > 2.0);
    CHECK(d.blowup_tau < 4.0);
  }
  SUBCASE("zero data stays on the surface") {
    ShootDiagnostics d;
    const Outcome o = classify_radial(zero_field(n), g, cfg, &d);
    CHECK(o == Outcome::on_manifold);
    CHECK(d.slope <= cfg.slope_threshold);
  }
}

TEST_CASE("shoot_radial: exact family threshold is located at zero") {
  const int n = 12;
  RadialGrid g(n);
  ShootConfig cfg;
  cfg.n = n;
  const ShootResult r = shoot_radial(
      [&g](double b) { return exact_family_va(b, 0.0, g); }, -0.1, 0.1, g, cfg);
  CHECK(r.alpha == 0.0);
  CHECK(r.bracket_hi - r.bracket_lo <= cfg.tol);
  CHECK(std::abs(r.bracket_lo) <= cfg.tol);
  CHECK(std::abs(r.bracket_hi) <= cfg.tol);
  CHECK(r.at_alpha.outcome == Outcome::on_manifold);
  CHECK(r.evaluations <= 2 + cfg.max_bisect + 1);
}

TEST_CASE("shoot_radial: zero base data has threshold exactly zero") {
  const int n = 12;
  RadialGrid g(n);
  ShootConfig cfg;
  cfg.n = n;
  const ShootResult r = shoot_radial(zero_field(n), -0.1, 0.1, g, cfg);
  CHECK(r.alpha == 0.0);
  CHECK(r.at_alpha.outcome == Outcome::on_manifold);
}

TEST_CASE("shoot_radial: bump threshold matches the correction coefficient") {
  // The surface of decaying data is the graph of the correction map over the
  // stable subspace, so the affine-family threshold must reproduce the c0
  // coefficient.  The leading response is quadratic in the data, so flipping
  // the bump's sign leaves the threshold essentially unchanged.
  const int n = 16;
  RadialGrid g(n);
  IterationConfig mc;
  mc.n = n;
  mc.compute_residual = false;
  ShootConfig cfg;
  cfg.n = n;
  cfg.tol = 4e-9;      // resolve the 1e-7-scale threshold itself
  cfg.tau_end = 20.0;  // push the horizon bias below the tolerance

  const ModeField f = stable_bump(g, 1e-3);
  ModeField fm;
  fm.ell = 0;
  fm.u1 = -f.u1;
  fm.u2 = -f.u2;

  const double c0p = correction_map(f, g, mc).c[0];
  const double c0m = correction_map(fm, g, mc).c[0];
  const ShootResult rp = shoot_radial(f, -0.1, 0.1, g, cfg);
  const ShootResult rm = shoot_radial(fm, -0.1, 0.1, g, cfg);

  CHECK(std::abs(c0p) > 1e-8);  // the threshold is genuinely displaced
  CHECK(std::abs(rp.alpha - c0p) <= 1e-8);
  CHECK(std::abs(rm.alpha - c0m) <= 1e-8);
  CHECK(std::abs(rp.alpha - rm.alpha) <= 2e-9);
  CHECK(rp.alpha >= -0.1);
  CHECK(rp.alpha <= 0.1);
  CHECK(rp.at_alpha.outcome == Outcome::on_manifold);
  CHECK(rp.at_alpha.slope <= cfg.slope_threshold);
  CHECK(rm.at_alpha.slope <= cfg.slope_threshold);
}

TEST_CASE("shoot_radial: validation and failure modes") {
  const int n = 12;
  RadialGrid g(n);
  ShootConfig cfg;
  cfg.n = n;

  SUBCASE("same outcome at both endpoints") {
    auto fam = [&g](double b) { return exact_family_va(b, 0.0, g); };
    CHECK_THROWS_AS((void)shoot_radial(fam, 0.01, 0.1, g, cfg),
                    validation_error);  // both dispersive
    CHECK_THROWS_AS((void)shoot_radial(fam, -0.1, -0.01, g, cfg),
                    validation_error);  // both blow up
  }
  SUBCASE("empty parameter range") {
    CHECK_THROWS_AS((void)shoot_radial(zero_field(n), 0.1, -0.1, g, cfg),
                    validation_error);
  }
  SUBCASE("bisection budget too small for the tolerance") {
    ShootConfig tight = cfg;
    tight.max_bisect = 3;
    tight.tol = 1e-9;
    CHECK_THROWS_AS((void)shoot_radial(zero_field(n), -0.1, 0.1, g, tight),
                    numerical_error);
  }
  SUBCASE("malformed data and configuration") {
    ModeField bad = zero_field(n);
    bad.ell = 1;
    CHECK_THROWS_AS((void)classify_radial(bad, g, cfg), validation_error);
    ShootConfig mis = cfg;
    mis.n = n + 4;
    CHECK_THROWS_AS((void)classify_radial(zero_field(n), g, mis),
                    validation_error);
    ShootConfig win = cfg;
    win.fit_hi = 0.5;  // below fit_lo
    CHECK_THROWS_AS((void)classify_radial(zero_field(n), g, win),
                    validation_error);
    ShootConfig far = cfg;
    far.fit_hi = far.tau_end + 1.0;
    CHECK_THROWS_AS((void)classify_radial(zero_field(n), g, far),
                    validation_error);
  }
}
