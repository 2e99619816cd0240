#include "hypwave/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hypwave/errors.hpp"
#include "hypwave/generator.hpp"

namespace hypwave {

namespace {

void validate(const ModeField& data, const RadialGrid& g,
              const ShootConfig& cfg) {
  std::string bad;
  auto fault = [&bad](const std::string& m) { bad += " " + m + ";"; };
  if (data.ell != 0) fault("shooting data must be radial (ell = 0)");
  if (data.u1.size() != g.size() || data.u2.size() != g.size())
    fault("data size does not match the grid");
  if (cfg.n != g.size()) fault("config n does not match the grid");
  if (!(cfg.tau_end > 0.0)) fault("tau_end must be positive");
  if (!(cfg.guard > 0.0)) fault("guard must be positive");
  if (!(cfg.tol > 0.0)) fault("tol must be positive");
  if (cfg.max_bisect < 1) fault("max_bisect must be >= 1");
  if (!(cfg.fit_lo >= 0.0) || !(cfg.fit_hi > cfg.fit_lo))
    fault("decay-fit window must satisfy 0 <= fit_lo < fit_hi");
  if (!(cfg.fit_hi <= cfg.tau_end))
    fault("decay-fit window must end at or before tau_end");
  if (!bad.empty()) throw validation_error("classify_radial:" + bad);
}

ModeField unstable_direction(const RadialGrid& g) {
  ModeField e;
  e.ell = 0;
  e.u1 = Eigen::VectorXd::Ones(g.size());
  e.u2 = 2.0 * Eigen::VectorXd::Ones(g.size());
  const double nn = energy_norm(e, g);
  e.u1 /= nn;
  e.u2 /= nn;
  return e;
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::blowup:
      return "blowup";
    case Outcome::dispersive:
      return "dispersive";
    default:
      return "on_manifold";
  }
}

Outcome classify_radial(const ModeField& data, const RadialGrid& g,
                        const ShootConfig& cfg, ShootDiagnostics* diag) {
  validate(data, g, cfg);
  ShootDiagnostics local;
  ShootDiagnostics& d = diag ? *diag : local;
  d = ShootDiagnostics{};

  if (energy_norm(data, g) == 0.0) {
    // The zero solution never leaves the surface; its norm history is
    // identically zero, so no finite slope can be fitted.
    d.outcome = Outcome::on_manifold;
    d.slope = -std::numeric_limits<double>::infinity();
    return d.outcome;
  }

  EvolutionConfig ec;
  ec.ell = 0;
  ec.n = cfg.n;
  ec.dtau = cfg.dtau;
  ec.tau_end = cfg.tau_end;
  ec.nonlinear = true;
  ec.with_potential = true;
  ec.guard = cfg.guard;
  const double base = ec.dtau > 0.0 ? ec.dtau : 2.0 / (cfg.n * cfg.n);
  const int nsteps = std::max(1, (int)std::ceil(cfg.tau_end / base));
  ec.snapshot_stride = std::max(1, nsteps / 64);

  const Trajectory traj = evolve_mode(data, g, ec);
  const ModeField& last = traj.snapshots.back().u;
  d.mean_u1_final = last.u1.mean();
  d.blowup = traj.blowup;
  d.blowup_tau = traj.blowup_tau;
  if (traj.blowup) {
    d.outcome = Outcome::blowup;
    return d.outcome;
  }

  const RateFit fit = measure_decay_rate(traj, cfg.fit_lo, cfg.fit_hi);
  d.slope = fit.slope;
  d.outcome = fit.slope <= cfg.slope_threshold ? Outcome::on_manifold
                                               : Outcome::dispersive;
  return d.outcome;
}

ShootResult shoot_radial(const std::function<ModeField(double)>& family,
                         double alpha_min, double alpha_max,
                         const RadialGrid& g, const ShootConfig& cfg) {
  if (!(alpha_min < alpha_max))
    throw validation_error("shoot_radial: alpha_min must be < alpha_max");

  ShootResult r;
  double lo = alpha_min, hi = alpha_max;
  const Outcome olo = classify_radial(family(lo), g, cfg);
  const Outcome ohi = classify_radial(family(hi), g, cfg);
  r.evaluations = 2;
  const bool lo_blows = olo == Outcome::blowup;
  if (lo_blows == (ohi == Outcome::blowup)) {
    std::ostringstream msg;
    msg << "shoot_radial: both endpoints produce the same side ("
        << to_string(olo) << " at " << lo << ", " << to_string(ohi) << " at "
        << hi << "); widen the range";
    throw validation_error(msg.str());
  }

  for (int k = 0; k < cfg.max_bisect && (hi - lo) > cfg.tol; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Outcome om = classify_radial(family(mid), g, cfg);
    ++r.evaluations;
    if ((om == Outcome::blowup) == lo_blows)
      lo = mid;
    else
      hi = mid;
  }
  if ((hi - lo) > cfg.tol)
    throw numerical_error(
        "shoot_radial: bisection budget exhausted before the bracket "
        "reached the requested tolerance");

  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.alpha = lo_blows ? hi : lo;
  (void)classify_radial(family(r.alpha), g, cfg, &r.at_alpha);
  ++r.evaluations;
  return r;
}

ShootResult shoot_radial(const ModeField& f, double alpha_min,
                         double alpha_max, const RadialGrid& g,
                         const ShootConfig& cfg) {
  if (f.ell != 0 || f.u1.size() != g.size() || f.u2.size() != g.size())
    throw validation_error(
        "shoot_radial: base data must be radial and match the grid");
  const ModeField e = unstable_direction(g);
  return shoot_radial(
      [&f, &e](double a) {
        ModeField u;
        u.ell = 0;
        u.u1 = f.u1 + a * e.u1;
        u.u2 = f.u2 + a * e.u2;
        return u;
      },
      alpha_min, alpha_max, g, cfg);
}

}  // namespace hypwave
