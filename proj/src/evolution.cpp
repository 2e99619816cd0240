#include "hypwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

// Right-hand side of the evolution: A u, plus the cubic nonlinearity in the
// second component for the radial nonlinear system.
void eval_rhs(const GeneratorMatrix& gen, bool nonlinear, const ModeField& u,
              ModeField& out) {
  apply_generator(gen, u, out);
  if (nonlinear) {
    out.u2.array() += 3.0 * std::numbers::sqrt2 * u.u1.array().square() +
                      u.u1.array().cube();
  }
}

ModeField rk4_step(const ModeField& u, const GeneratorMatrix& gen,
                   bool nonlinear, double dtau) {
  const int n = gen.n;
  ModeField k1{u.ell, Eigen::VectorXd(n), Eigen::VectorXd(n)}, k2 = k1,
      k3 = k1, k4 = k1, tmp = k1;
  eval_rhs(gen, nonlinear, u, k1);
  tmp.u1 = u.u1 + 0.5 * dtau * k1.u1;
  tmp.u2 = u.u2 + 0.5 * dtau * k1.u2;
  eval_rhs(gen, nonlinear, tmp, k2);
  tmp.u1 = u.u1 + 0.5 * dtau * k2.u1;
  tmp.u2 = u.u2 + 0.5 * dtau * k2.u2;
  eval_rhs(gen, nonlinear, tmp, k3);
  tmp.u1 = u.u1 + dtau * k3.u1;
  tmp.u2 = u.u2 + dtau * k3.u2;
  eval_rhs(gen, nonlinear, tmp, k4);
  ModeField out{u.ell, Eigen::VectorXd(n), Eigen::VectorXd(n)};
  out.u1 =
      u.u1 + (dtau / 6.0) * (k1.u1 + 2.0 * k2.u1 + 2.0 * k3.u1 + k4.u1);
  out.u2 =
      u.u2 + (dtau / 6.0) * (k1.u2 + 2.0 * k2.u2 + 2.0 * k3.u2 + k4.u2);
  return out;
}

void check_step_args(const ModeField& u, const GeneratorMatrix& gen,
                     double dtau, bool nonlinear) {
  std::string bad;
  if (u.u1.size() != gen.n || u.u2.size() != gen.n)
    bad += " state size does not match the generator;";
  if (u.ell != gen.ell) bad += " state ell does not match the generator;";
  if (!(dtau > 0.0)) bad += " dtau must be positive;";
  if (nonlinear && (gen.ell != 0 || !gen.with_potential))
    bad += " nonlinear stepping needs the ell = 0 generator with potential;";
  if (!bad.empty()) throw validation_error("evolution step:" + bad);
}

}  // namespace

ModeField step_linear(const ModeField& u, const GeneratorMatrix& gen,
                      double dtau) {
  check_step_args(u, gen, dtau, false);
  return rk4_step(u, gen, false, dtau);
}

ModeField step_nonlinear_radial(const ModeField& u, const GeneratorMatrix& gen,
                                double dtau) {
  check_step_args(u, gen, dtau, true);
  return rk4_step(u, gen, true, dtau);
}

ModeField exact_family_va(double a, double tau, const RadialGrid& g) {
  const double w = a * std::exp(tau);
  if (!(1.0 + w > 0.0)) {
    throw validation_error(
        "exact_family_va: 1 + a e^tau must be positive (requested point is "
        "at or past the blowup time)");
  }
  const double phi1 = -std::numbers::sqrt2 * w / (1.0 + w);
  const double phi2 =
      -std::numbers::sqrt2 * w * (2.0 + w) / ((1.0 + w) * (1.0 + w));
  const int n = g.size();
  ModeField u{0, Eigen::VectorXd::Constant(n, phi1),
              Eigen::VectorXd::Constant(n, phi2)};
  return u;
}

Trajectory evolve_mode(const ModeField& data, const RadialGrid& g,
                       const EvolutionConfig& cfg_in) {
  EvolutionConfig cfg = cfg_in;
  if (cfg.dtau <= 0.0) cfg.dtau = 2.0 / (double(cfg.n) * cfg.n);
  std::string bad;
  if (cfg.n != g.size()) bad += " cfg.n does not match the grid;";
  if (cfg.ell < 0) bad += " ell must be >= 0;";
  if (data.ell != cfg.ell) bad += " data.ell does not match cfg.ell;";
  if (data.u1.size() != g.size() || data.u2.size() != g.size())
    bad += " data size does not match the grid;";
  if (!(cfg.tau_end > 0.0)) bad += " tau_end must be positive;";
  if (!(cfg.guard > 0.0)) bad += " guard must be positive;";
  if (cfg.snapshot_stride < 1) bad += " snapshot_stride must be >= 1;";
  if (cfg.nonlinear && (cfg.ell != 0 || !cfg.with_potential))
    bad += " nonlinear evolution requires ell = 0 with the potential term;";
  if (!bad.empty()) throw validation_error("evolve_mode:" + bad);

  const GeneratorMatrix gen = build_generator(g, cfg.ell, cfg.with_potential);
  const int nsteps =
      std::max(1, (int)std::ceil(cfg.tau_end / cfg.dtau - 1e-9));

  Trajectory traj;
  traj.config = cfg;
  traj.snapshots.reserve(nsteps / cfg.snapshot_stride + 2);
  traj.norm_history.reserve(nsteps + 1);

  // Norm growth beyond e^{2 tau} across this trailing window flags an
  // unstable discretization (the continuous dynamics tops out at e^{tau}).
  const int window = std::max(8, (int)std::lround(0.25 / cfg.dtau));

  ModeField u = data;
  ModeField du{cfg.ell, Eigen::VectorXd(g.size()), Eigen::VectorXd(g.size())};
  double tau = 0.0;
  for (int k = 0;; ++k) {
    traj.norm_history.emplace_back(tau, energy_norm(u, g));
    if (k % cfg.snapshot_stride == 0 || k == nsteps || traj.blowup) {
      eval_rhs(gen, cfg.nonlinear, u, du);
      traj.snapshots.push_back({tau, u, du});
    }
    if (k >= window) {
      const auto& [tau0, norm0] = traj.norm_history[k - window];
      if (norm0 > 0.0 &&
          traj.norm_history[k].second > norm0 * std::exp(2.0 * (tau - tau0)))
        traj.instability = true;
    }
    if (traj.blowup || k == nsteps) break;

    const double dt = std::min(cfg.dtau, cfg.tau_end - k * cfg.dtau);
    u = rk4_step(u, gen, cfg.nonlinear, dt);
    tau = std::min((k + 1) * cfg.dtau, cfg.tau_end);
    if (u.u1.cwiseAbs().maxCoeff() > cfg.guard ||
        !u.u1.allFinite() || !u.u2.allFinite()) {
      traj.blowup = true;
      traj.blowup_tau = tau;
    }
  }
  return traj;
}

ModeField trajectory_eval(const Trajectory& traj, double tau) {
  const auto& snaps = traj.snapshots;
  if (snaps.empty())
    throw validation_error("trajectory_eval: empty trajectory");
  const double lo = snaps.front().tau, hi = snaps.back().tau;
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (tau < lo - slack || tau > hi + slack) {
    throw validation_error("trajectory_eval: tau = " + std::to_string(tau) +
                           " outside the stored range [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
  }
  tau = std::clamp(tau, lo, hi);
  auto it = std::upper_bound(
      snaps.begin(), snaps.end(), tau,
      [](double t, const Snapshot& s) { return t < s.tau; });
  if (it == snaps.begin()) return snaps.front().u;
  if (it == snaps.end()) return snaps.back().u;
  const Snapshot& s0 = *(it - 1);
  const Snapshot& s1 = *it;
  const double h = s1.tau - s0.tau;
  const double th = (tau - s0.tau) / h;
  const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
  const double h10 = th * (1.0 - th) * (1.0 - th);
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);
  ModeField out{s0.u.ell,
                h00 * s0.u.u1 + (h10 * h) * s0.du.u1 + h01 * s1.u.u1 +
                    (h11 * h) * s1.du.u1,
                h00 * s0.u.u2 + (h10 * h) * s0.du.u2 + h01 * s1.u.u2 +
                    (h11 * h) * s1.du.u2};
  return out;
}

RateFit measure_decay_rate(const Trajectory& traj, double tau_lo,
                           double tau_hi) {
  std::vector<double> ts, ys;
  for (const auto& [t, nrm] : traj.norm_history) {
    if (t < tau_lo - 1e-12 || t > tau_hi + 1e-12) continue;
    if (!(nrm > 0.0)) {
      throw validation_error(
          "measure_decay_rate: nonpositive norm in the fit window");
    }
    ts.push_back(t);
    ys.push_back(std::log(nrm));
  }
  if (ts.size() < 10) {
    throw validation_error(
        "measure_decay_rate: window contains fewer than 10 samples");
  }
  const double m = double(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double det = m * stt - st * st;
  if (det <= 0.0)
    throw validation_error("measure_decay_rate: degenerate fit window");
  RateFit fit;
  fit.slope = (m * sty - st * sy) / det;
  fit.intercept = (sy * stt - st * sty) / det;
  double ss = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - fit.slope * ts[i] - fit.intercept;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

namespace {

double weighted_l2(const Eigen::VectorXd& v, const RadialGrid& g) {
  return std::sqrt(g.weights().dot(v.cwiseAbs2()));
}

void check_slice_T(double T) {
  if (!(T >= -1.0 && T < 0.0))
    throw validation_error("slice norms: T must lie in [-1, 0)");
}

}  // namespace

SliceNorms sigma_slice_norms(const Trajectory& traj, const RadialGrid& g,
                             double T) {
  check_slice_T(T);
  const double tau = -std::log(-T);
  const ModeField u = trajectory_eval(traj, tau);
  const int par = RadialGrid::parity_of_ell(u.ell);
  const double at = -T;  // |T|
  SliceNorms s;
  s.l2 = std::sqrt(at) * weighted_l2(u.u1, g);
  s.h1dot = weighted_l2(g.d1(par) * u.u1, g) / std::sqrt(at);
  s.normal_l2 = weighted_l2(u.u2, g) / std::sqrt(at);
  return s;
}

SliceNorms sigma_slice_norms_sampled(const Trajectory& traj,
                                     const RadialGrid& g, double T,
                                     int samples) {
  check_slice_T(T);
  if (samples < 2 || samples % 2 != 0)
    throw validation_error("slice norms: samples must be even and >= 2");
  const double tau = -std::log(-T);
  const ModeField u = trajectory_eval(traj, tau);
  const int par = RadialGrid::parity_of_ell(u.ell);
  const Eigen::VectorXd du1 = g.d1(par) * u.u1;
  const double at = -T;

  // Composite Simpson in the physical radial coordinate r in [0, |T|] of
  // |f(r / |T|)|^2 r^2 dr for the three profiles.
  double acc1 = 0, accd = 0, acc2 = 0;
  const double hr = at / samples;
  for (int j = 0; j <= samples; ++j) {
    const double r = hr * j;
    const double rho = r / at;
    const double wgt =
        (j == 0 || j == samples) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    const double f1 = g.interpolate(u.u1, par, rho);
    const double fd = g.interpolate(du1, -par, rho);
    const double f2 = g.interpolate(u.u2, par, rho);
    acc1 += wgt * f1 * f1 * r * r;
    accd += wgt * fd * fd * r * r;
    acc2 += wgt * f2 * f2 * r * r;
  }
  const double simp = hr / 3.0;
  SliceNorms s;
  s.l2 = std::sqrt(acc1 * simp) / at;
  s.h1dot = std::sqrt(accd * simp) / (at * at);
  s.normal_l2 = std::sqrt(acc2 * simp) / (at * at);
  return s;
}

double strichartz_norm(const Trajectory& traj, const RadialGrid& g, double t,
                       double delta) {
  std::string bad;
  if (!(t >= 1.0)) bad += " t must be >= 1;";
  if (!(delta > 0.0 && delta < 1.0)) bad += " delta must be in (0, 1);";
  if (!bad.empty()) throw validation_error("strichartz_norm:" + bad);
  const double tau_a = std::log(t * delta * (2.0 - delta));
  const double tau_b = std::log(2.0 * t);
  if (traj.snapshots.empty() || traj.snapshots.front().tau > tau_a + 1e-12 ||
      traj.snapshots.back().tau < tau_b - 1e-12) {
    throw validation_error(
        "strichartz_norm: trajectory does not cover tau in [" +
        std::to_string(tau_a) + ", " + std::to_string(tau_b) + "]");
  }

  // Composite Simpson in tau of || u1(tau, .) ||_{L4(B)}^4, resolved a bit
  // finer than the snapshot spacing.
  const double span = tau_b - tau_a;
  const double snap_h =
      (traj.snapshots.back().tau - traj.snapshots.front().tau) /
      std::max<size_t>(1, traj.snapshots.size() - 1);
  int m = (int)std::ceil(span / std::min(0.01, snap_h));
  m += m % 2;
  m = std::max(m, 8);
  const double h = span / m;
  double acc = 0;
  for (int j = 0; j <= m; ++j) {
    const double wgt = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    const ModeField u = trajectory_eval(traj, tau_a + h * j);
    acc += wgt * g.weights().dot(u.u1.array().pow(4).matrix());
  }
  return std::pow(acc * h / 3.0, 0.25);
}

}  // namespace hypwave
