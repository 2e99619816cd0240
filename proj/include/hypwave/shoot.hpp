// Radial shooting along a one-parameter family of initial data.
//
// The full nonlinear radial flow has exactly one growing linear mode, so the
// set of small data leading to decay is a codimension-one surface: on one
// side of it solutions blow up in finite time, on the other they relax to
// the (-sqrt(2), -sqrt(2)) equilibrium.  shoot_radial brackets the surface
// by bisection on the family parameter and returns the certified non-blowup
// endpoint of the final bracket.
//
// Outcome classification for a single evolution:
//   blowup      - the guard on max |u1| tripped before tau_end,
//   on_manifold - the energy norm's fitted log-slope over the fit window is
//                 at most slope_threshold (the trajectory keeps decaying),
//   dispersive  - neither of the above (the solution leaves the origin's
//                 neighborhood and heads for the flat equilibrium).
#pragma once

#include <functional>

#include "hypwave/evolution.hpp"
#include "hypwave/grid.hpp"

namespace hypwave {

enum class Outcome { blowup, dispersive, on_manifold };

const char* to_string(Outcome o);

// Resolution note: data closer than about e^{-tau_end} to the separatrix
// cannot trip the guard within the trust horizon, so the located threshold
// is biased toward the blowup side by Theta(e^{-tau_end}).  The defaults
// keep that bias (about 2e-7 at tau_end = 16) below tol; to certify the
// decay slope at the returned parameter, refine tol and tau_end together.
struct ShootConfig {
  int n = 48;
  double dtau = -1.0;     // <= 0 selects the default 2 / n^2
  double tau_end = 16.0;  // trust horizon of each evolution
  double guard = 10.0;    // blowup guard on max |u1|
  double tol = 1e-6;      // bisection stops when the bracket is this narrow
  int max_bisect = 64;
  double fit_lo = 1.0;  // decay-fit window, clipped to tau_end
  double fit_hi = 8.0;
  double slope_threshold = -0.4;
};

struct ShootDiagnostics {
  Outcome outcome = Outcome::dispersive;
  double slope = 0.0;  // -infinity for identically zero trajectories
  double mean_u1_final = 0.0;
  bool blowup = false;
  double blowup_tau = 0.0;
};

struct ShootResult {
  double alpha = 0.0;  // non-blowup endpoint of the final bracket
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;  // number of evolutions performed
  ShootDiagnostics at_alpha;
};

// Evolves one radial data set with the cubic nonlinearity and classifies the
// outcome.  Throws validation_error for malformed data or configuration.
Outcome classify_radial(const ModeField& data, const RadialGrid& g,
                        const ShootConfig& cfg,
                        ShootDiagnostics* diag = nullptr);

// Bisects family(alpha) over [alpha_min, alpha_max].  Preconditions: the two
// endpoints classify to distinct sides (exactly one of them blows up);
// otherwise a validation_error reports the pair of outcomes.
ShootResult shoot_radial(const std::function<ModeField(double)>& family,
                         double alpha_min, double alpha_max,
                         const RadialGrid& g, const ShootConfig& cfg);

// Affine family f + alpha * e where e is the normalized growing eigenmode
// (constant profile pair (1, 2)).  f = 0 recovers the threshold alpha = 0
// exactly; small stable-subspace data shifts it by the quadratic response
// of the flow.
ShootResult shoot_radial(const ModeField& f, double alpha_min,
                         double alpha_max, const RadialGrid& g,
                         const ShootConfig& cfg);

}  // namespace hypwave
