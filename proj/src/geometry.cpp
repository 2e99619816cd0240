#include "hypwave/geometry.hpp"

#include <cmath>
#include <string>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {

// Guard for the rational charts: the quadratic form t^2 - |x|^2 must stay
// away from zero relative to the point's magnitude.
double cone_factor(double t, const Vec3& x, const char* where) {
  const double q = t * t - norm2(x);
  const double scale = t * t + norm2(x);
  if (std::abs(q) <= 1e-14 * scale || q == 0.0) {
    throw validation_error(std::string(where) +
                           ": point on (or too close to) the light cone "
                           "t^2 = |x|^2");
  }
  return q;
}

}  // namespace

HyperboloidalPoint kelvin_forward(const SpacetimePoint& p) {
  const double q = cone_factor(p.t, p.x, "kelvin_forward");
  HyperboloidalPoint out;
  out.T = -p.t / q;
  for (int j = 0; j < 3; ++j) out.X[j] = p.x[j] / q;
  return out;
}

SpacetimePoint kelvin_inverse(const HyperboloidalPoint& h) {
  const double q = cone_factor(h.T, h.X, "kelvin_inverse");
  SpacetimePoint out;
  out.t = -h.T / q;
  for (int j = 0; j < 3; ++j) out.x[j] = h.X[j] / q;
  return out;
}

double jacobian_det(const HyperboloidalPoint& h) {
  const double q = cone_factor(h.T, h.X, "jacobian_det");
  const double q2 = q * q;
  return 1.0 / (q2 * q2);
}

SimilarityPoint to_similarity(const SpacetimePoint& p) {
  const double r = std::sqrt(norm2(p.x));
  if (!(p.t > r)) {
    throw validation_error(
        "to_similarity: requires t > |x| (interior of the forward cone)");
  }
  const double q = p.t * p.t - norm2(p.x);
  SimilarityPoint out;
  out.tau = std::log(q / p.t);
  for (int j = 0; j < 3; ++j) out.xi[j] = p.x[j] / p.t;
  return out;
}

SpacetimePoint from_similarity(const SimilarityPoint& s) {
  const double m = norm2(s.xi);
  if (!(m < 1.0)) {
    throw validation_error("from_similarity: requires |xi| < 1");
  }
  const double et = std::exp(s.tau);
  SpacetimePoint out;
  out.t = et / (1.0 - m);
  for (int j = 0; j < 3; ++j) out.x[j] = et * s.xi[j] / (1.0 - m);
  return out;
}

double hyperboloid_height(double T, const Vec3& x) {
  if (!(T < 0.0)) {
    throw validation_error("hyperboloid_height: requires T < 0");
  }
  const double a = -1.0 / (2.0 * T);
  return a + std::sqrt(a * a + norm2(x));
}

PenrosePoint penrose_map(double t, double r) {
  if (!(r >= 0.0)) {
    throw validation_error("penrose_map: requires r >= 0");
  }
  const double U = std::atan(t - r);
  const double V = std::atan(t + r);
  PenrosePoint out;
  out.Tp = 0.5 * (V + U);
  out.R = 0.5 * (V - U);
  out.Omega = std::cos(V) * std::cos(U);
  return out;
}

std::pair<double, double> penrose_inverse(double Tp, double R) {
  const double V = Tp + R;
  const double U = Tp - R;
  const double half_pi = std::asin(1.0);
  if (!(R >= 0.0) || std::abs(V) >= half_pi - 1e-14 ||
      std::abs(U) >= half_pi - 1e-14) {
    throw validation_error(
        "penrose_inverse: point outside the open diagram (Omega = 0 on the "
        "boundary |Tp +- R| = pi/2)");
  }
  const double t = 0.5 * (std::tan(V) + std::tan(U));
  const double r = 0.5 * (std::tan(V) - std::tan(U));
  return {t, r};
}

double normal_gradient(const SpacetimePoint& p, double v, double dt_v,
                       const Vec3& grad_v) {
  return (p.t * p.t + norm2(p.x)) * dt_v + 2.0 * p.t * dot(p.x, grad_v) +
         2.0 * p.t * v;
}

}  // namespace hypwave
