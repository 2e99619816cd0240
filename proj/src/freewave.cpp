#include "hypwave/freewave.hpp"

#include <cmath>
#include <string>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {

// Trapezoid energy of the characteristic pair on nodes 0..J:
// (w_T^2 + w_R^2)/2 = (p^2 + q^2)/4.
double trapezoid_energy(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                        int J, double dr) {
  double acc = 0.5 * 0.25 * (p[0] * p[0] + q[0] * q[0] + p[J] * p[J] + q[J] * q[J]);
  for (int j = 1; j < J; ++j) acc += 0.25 * (p[j] * p[j] + q[j] * q[j]);
  return dr * acc;
}

}  // namespace

Eigen::VectorXd radial_derivative_fd(const Eigen::VectorXd& w, double dr) {
  const Eigen::Index n = w.size();
  if (n < 3) throw validation_error("radial_derivative_fd: need at least 3 nodes");
  if (!(dr > 0)) throw validation_error("radial_derivative_fd: dr must be positive");
  Eigen::VectorXd d(n);
  const double inv2h = 1.0 / (2.0 * dr);
  d[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) * inv2h;
  for (Eigen::Index j = 1; j + 1 < n; ++j) d[j] = (w[j + 1] - w[j - 1]) * inv2h;
  d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) * inv2h;
  return d;
}

FreeWave1p1State gaussian_pulse_state(double T0, int cells, double center,
                                      double width, bool outgoing) {
  if (!(T0 < 0)) throw validation_error("gaussian_pulse_state: T0 must be negative");
  if (cells < 8) throw validation_error("gaussian_pulse_state: need at least 8 cells");
  if (!(width > 0)) throw validation_error("gaussian_pulse_state: width must be positive");
  FreeWave1p1State s;
  s.T0 = T0;
  s.dr = -T0 / cells;
  s.w.resize(cells + 1);
  for (int j = 0; j <= cells; ++j) {
    const double R = j * s.dr;
    const double up = (R - center) / width;
    const double dn = (R + center) / width;
    // Odd in R, so w(0) = 0 holds exactly and the origin reflection is
    // consistent with the data.
    s.w[j] = std::exp(-0.5 * up * up) - std::exp(-0.5 * dn * dn);
  }
  s.w[0] = 0.0;
  // Pure one-directional data: wt = -w_R makes p = wt + w_R vanish (all
  // energy outgoing); wt = +w_R makes q vanish (all ingoing).  Using the
  // same difference operator as the evolver keeps the split exact.
  s.wt = radial_derivative_fd(s.w, s.dr);
  if (outgoing) s.wt = -s.wt;
  s.wt[0] = 0.0;
  return s;
}

FluxRecord free_wave_1p1_evolve(const FreeWave1p1State& s, double T_end) {
  std::string faults;
  auto fault = [&faults](const std::string& msg) {
    if (!faults.empty()) faults += "; ";
    faults += msg;
  };
  if (!(s.T0 < 0)) fault("T0 must be negative");
  if (!(s.dr > 0)) fault("dr must be positive");
  const int J0 = static_cast<int>(s.w.size()) - 1;
  if (s.w.size() != s.wt.size()) fault("w and wt must have equal length");
  if (J0 < 4) fault("need at least 4 cells");
  if (s.dr > 0 && s.T0 < 0 && std::abs(J0 * s.dr + s.T0) > 1e-9 * std::abs(s.T0))
    fault("grid must cover [0, -T0] exactly: J*dr != -T0");
  if (s.w.size() >= 1 && s.wt.size() >= 1) {
    const double scale = std::max({1.0, s.w.lpNorm<Eigen::Infinity>(),
                                   s.wt.lpNorm<Eigen::Infinity>()});
    if (std::abs(s.w[0]) > 1e-12 * scale || std::abs(s.wt[0]) > 1e-12 * scale)
      fault("reflection requires w[0] = wt[0] = 0");
  }
  if (!(T_end > s.T0) || !(T_end < 0)) fault("T_end must lie in (T0, 0)");
  int nsteps = 0;
  if (faults.empty()) {
    nsteps = static_cast<int>(std::floor((T_end - s.T0) / s.dr + 1e-9));
    if (nsteps < 1) fault("T_end is less than one step away from T0");
    if (J0 - nsteps < 3)
      fault("domain shrinks below 3 cells before T_end; stop earlier");
  }
  if (!faults.empty()) throw validation_error("free_wave_1p1_evolve: " + faults);

  const Eigen::VectorXd wr = radial_derivative_fd(s.w, s.dr);
  Eigen::VectorXd p = s.wt + wr;  // ingoing: shifts toward the origin
  Eigen::VectorXd q = s.wt - wr;  // outgoing: shifts toward the boundary

  FluxRecord rec;
  rec.T.reserve(nsteps + 1);
  rec.energy.reserve(nsteps + 1);
  rec.decrement.reserve(nsteps);
  rec.flux_formula.reserve(nsteps);
  rec.flux_est.reserve(nsteps);

  int J = J0;
  rec.T.push_back(s.T0);
  rec.energy.push_back(trapezoid_energy(p, q, J, s.dr));
  for (int n = 0; n < nsteps; ++n) {
    // Boundary loss for this transition, from the pre-step outgoing values.
    // Summing the trapezoid energy before and after the shift cancels
    // everywhere except the three outermost nodes (the origin terms cancel
    // because the reflection keeps q[0] = -p[0]), giving the exact identity
    //   E_{n+1} - E_n = -dr/4 * (q_{J-2}^2/2 + q_{J-1}^2 + q_J^2/2).
    rec.flux_formula.push_back(
        0.25 * (0.5 * q[J - 2] * q[J - 2] + q[J - 1] * q[J - 1] +
                0.5 * q[J] * q[J]));
    rec.flux_est.push_back(0.5 * q[J - 1] * q[J - 1]);

    for (int j = 0; j < J; ++j) p[j] = p[j + 1];
    for (int j = J - 1; j >= 1; --j) q[j] = q[j - 1];
    q[0] = -p[0];
    --J;

    rec.T.push_back(s.T0 + (n + 1) * s.dr);
    rec.energy.push_back(trapezoid_energy(p, q, J, s.dr));
    rec.decrement.push_back(rec.energy[n + 1] - rec.energy[n]);
  }
  return rec;
}

}  // namespace hypwave
