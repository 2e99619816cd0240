#pragma once

#include <array>
#include <utility>

namespace hypwave {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& a) { return dot(a, a); }

// A point (t, x) of Minkowski space in the standard chart, restricted to the
// interior of the forward light cone t > |x| >= 0 for chart conversions.
struct SpacetimePoint {
  double t = 0;
  Vec3 x{0, 0, 0};
};

// Image of a spacetime point under the time-translated Kelvin involution
// (T, X) = (-t, x) / (t^2 - |x|^2).  The region t > |x| maps onto T < -|X|.
struct HyperboloidalPoint {
  double T = 0;
  Vec3 X{0, 0, 0};
};

// Self-similar coordinates tau = log((t^2 - |x|^2)/t), xi = x/t, defined on
// t > |x|; |xi| < 1 there.
struct SimilarityPoint {
  double tau = 0;
  Vec3 xi{0, 0, 0};
};

// Radial conformal compactification: Tp = (V + U)/2, R = (V - U)/2 with
// U = arctan(t - r), V = arctan(t + r); Omega = cos(V) cos(U) is the
// conformal factor, positive inside the diagram and zero on its boundary.
struct PenrosePoint {
  double Tp = 0;
  double R = 0;
  double Omega = 1;
};

// Kelvin involution.  Throws validation_error on the light cone
// t^2 = |x|^2, where the map is singular.
HyperboloidalPoint kelvin_forward(const SpacetimePoint& p);

// Inverse chart (the same rational map; the transform is an involution).
// For T < 0 and |X| < |T| this parametrizes the hyperboloid slice Sigma_T.
SpacetimePoint kelvin_inverse(const HyperboloidalPoint& q);

// Volume distortion |det d(kelvin_inverse)| = (T^2 - |X|^2)^{-4}.
double jacobian_det(const HyperboloidalPoint& q);

// Similarity chart and its inverse.  to_similarity requires t > |x|;
// from_similarity requires |xi| < 1.
SimilarityPoint to_similarity(const SpacetimePoint& p);
SpacetimePoint from_similarity(const SimilarityPoint& s);

// Height t of the slice Sigma_T over the spatial point x, i.e. the positive
// root of T = -t/(t^2 - |x|^2).  Requires T < 0.
double hyperboloid_height(double T, const Vec3& x);

// Compactified radial chart of the (t, r) half-plane and its inverse.
// penrose_inverse throws validation_error on the diagram boundary
// |Tp + R| >= pi/2 or |Tp - R| >= pi/2 (where Omega = 0) and for R < 0.
PenrosePoint penrose_map(double t, double r);
std::pair<double, double> penrose_inverse(double Tp, double R);

// Derivative of a field along the future unit normal of Sigma_T, scaled by
// the induced volume weight:  (t^2 + |x|^2) dt_v + 2 t x.grad_v + 2 t v.
double normal_gradient(const SpacetimePoint& p, double v, double dt_v,
                       const Vec3& grad_v);

}  // namespace hypwave
