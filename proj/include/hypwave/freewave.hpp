#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hypwave {

// Radial free wave in one space dimension on the shrinking domain
// R in [0, -T), T < 0 increasing toward 0.  The field w obeys
// w_TT = w_RR with odd reflection at the origin (w(T, 0) = 0); the outer
// boundary R = -T moves inward at characteristic speed, so no condition is
// imposed there and energy
//   E(T) = int_0^{-T} (w_T^2 + w_R^2) / 2 dR
// can only leave through it: dE/dT = -(w_T - w_R)^2 / 2 at R = -T.
struct FreeWave1p1State {
  double T0 = -1.0;  // initial time, < 0
  double dr = 0.0;   // cell width; the time step equals dr (unit CFL)
  // Nodal values on R_j = j dr, j = 0..J with J dr = -T0.  The reflection
  // condition requires w[0] = wt[0] = 0.
  Eigen::VectorXd w, wt;
};

// Per-step energy and boundary-flux bookkeeping.  Entry n of decrement /
// flux_formula / flux_est describes the transition T_n -> T_{n+1}.
struct FluxRecord {
  std::vector<double> T;       // size nsteps + 1
  std::vector<double> energy;  // E(T_n), trapezoid rule, size nsteps + 1
  std::vector<double> decrement;     // E_{n+1} - E_n
  std::vector<double> flux_formula;  // exact 3-node boundary loss per unit T
  std::vector<double> flux_est;      // pointwise (w_T - w_R)^2 / 2 at J - 1
};

// Second-order finite-difference R-derivative on a uniform grid (central
// inside, one-sided at the ends).  This is the operator the evolver uses to
// form the characteristic variables from (w, wt).
Eigen::VectorXd radial_derivative_fd(const Eigen::VectorXd& w, double dr);

// Odd-reflected Gaussian pulse, outgoing (moving toward the boundary) or
// ingoing; cells is the initial number of grid cells J.
FreeWave1p1State gaussian_pulse_state(double T0, int cells, double center,
                                      double width, bool outgoing);

// Evolves by exact characteristic transport at unit CFL: the ingoing
// variable p = w_T + w_R shifts one cell toward the origin per step, the
// outgoing q = w_T - w_R one cell outward, the origin reflects p into -q,
// and the boundary node drops out each step.  T_end must leave at least
// three cells active.
FluxRecord free_wave_1p1_evolve(const FreeWave1p1State& s, double T_end);

}  // namespace hypwave
