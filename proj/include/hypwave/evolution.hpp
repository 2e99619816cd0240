#pragma once

#include <utility>
#include <vector>

#include "hypwave/generator.hpp"
#include "hypwave/grid.hpp"

namespace hypwave {

// Method-of-lines evolution in the slow time tau of a single mode, either
// the linear system u' = A u or (ell = 0 only) the radial nonlinear system
// u' = A u + N(u) with N(u) = (0, 3 sqrt(2) u1^2 + u1^3).  Classical RK4
// with a fixed step; the spectral differentiation stiffness scales like N^2,
// so the default step is 2 / N^2.
struct EvolutionConfig {
  int ell = 0;
  int n = 32;
  double dtau = -1.0;  // <= 0 selects the default 2 / n^2
  double tau_end = 5.0;
  bool nonlinear = false;      // requires ell = 0 and with_potential
  bool with_potential = true;  // linear generator variant
  double guard = 10.0;         // blowup guard on max |u1|
  int snapshot_stride = 1;     // store every k-th accepted step
};

struct Snapshot {
  double tau = 0.0;
  ModeField u;   // state at tau
  ModeField du;  // right-hand side at tau (for cubic Hermite evaluation)
};

struct Trajectory {
  EvolutionConfig config;
  std::vector<Snapshot> snapshots;
  // (tau, energy norm) at every accepted step, denser than snapshots when a
  // stride is set; entries at snapshot times match the snapshot exactly.
  std::vector<std::pair<double, double>> norm_history;
  bool blowup = false;  // guard tripped; a dynamical outcome, not an error
  double blowup_tau = 0.0;
  // Set when the norm grows faster than e^{2 tau} across a trailing window,
  // which no mode of the continuous problem can do.
  bool instability = false;
};

// One RK4 step of the linear mode system u' = A u.
ModeField step_linear(const ModeField& u, const GeneratorMatrix& gen,
                      double dtau);

// One RK4 step of the radial nonlinear system (gen must be the ell = 0
// generator including the potential term).
ModeField step_nonlinear_radial(const ModeField& u, const GeneratorMatrix& gen,
                                double dtau);

// Drives the evolution from tau = 0 to cfg.tau_end, recording snapshots and
// the norm history; stops early (with the blowup flag) when max |u1| passes
// cfg.guard.
Trajectory evolve_mode(const ModeField& data, const RadialGrid& g,
                       const EvolutionConfig& cfg);

// Spatially constant exact solution family of the radial nonlinear system:
//   u1(tau) = -sqrt(2) w / (1 + w),  u2 = (d/dtau + 1) u1,  w = a e^tau.
// Requires 1 + a e^tau > 0 (below the blowup time when a < 0).
ModeField exact_family_va(double a, double tau, const RadialGrid& g);

// Cubic Hermite evaluation of the trajectory between snapshots.
ModeField trajectory_eval(const Trajectory& traj, double tau);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square misfit of the linear model
};

// Least-squares fit of log(norm) over norm_history entries with
// tau in [tau_lo, tau_hi]; needs at least 10 entries, all positive.
RateFit measure_decay_rate(const Trajectory& traj, double tau_lo,
                           double tau_hi);

// Norms of v - v0 on the spacelike slice indexed by T in [-1, 0), computed
// from the mode profiles at tau = -log(-T) through the exact change-of-
// variables identities:
//   l2        = |T|^{ 1/2} || u1(tau, .) ||_{L2(B)}
//   h1dot     = |T|^{-1/2} || u1'(tau, .) ||_{L2(B)}
//   normal_l2 = |T|^{-1/2} || u2(tau, .) ||_{L2(B)}
// with the radial convention ||f||_{L2(B)}^2 = int_0^1 |f|^2 rho^2 drho.
struct SliceNorms {
  double l2 = 0.0;
  double h1dot = 0.0;
  double normal_l2 = 0.0;
};

SliceNorms sigma_slice_norms(const Trajectory& traj, const RadialGrid& g,
                             double T);

// Same norms by direct composite-Simpson quadrature on the slice sampled in
// the physical radial coordinate (samples subintervals), interpolating the
// profiles off the grid; validates the identity route.
SliceNorms sigma_slice_norms_sampled(const Trajectory& traj,
                                     const RadialGrid& g, double T,
                                     int samples = 2000);

// Localized fourth-power space-time norm of u1 for the time window [t, 2t]
// and spatial cutoff (1 - delta) t, evaluated in the slow-time variables:
//   ( int_{log(t d(2-d))}^{log(2t)} || u1(tau, .) ||_{L4(B)}^4 dtau )^{1/4}.
// The trajectory must cover that tau interval.
double strichartz_norm(const Trajectory& traj, const RadialGrid& g, double t,
                       double delta);

}  // namespace hypwave
