#pragma once

#include "locomp/point.hpp"

namespace locomp {

/// Involutive automorphism phi_z of the ball exchanging 0 and z, evaluated at w.
///
///   phi_z(w) = (z - P_z w - s_z Q_z w) / (1 - <w, z>),   s_z = sqrt(1 - |z|^2),
///
/// with P_z the orthogonal projection onto C z and Q_z = I - P_z; for n = 1 this
/// is (z - w) / (1 - conj(z) w).  The gap of the result is computed from
/// 1 - |phi_z(w)|^2 = (1 - |z|^2)(1 - |w|^2) / |1 - <w, z>|^2.
BallPoint mobius(const BallPoint& z, const BallPoint& w);

/// Unchecked version used on quadrature nodes (gaps may be tiny).
Point mobius_map(const Point& z, const Point& w);

/// rho(z, w) = |phi_z(w)|.
double pseudo_hyperbolic(const BallPoint& z, const BallPoint& w);

/// beta(z, w) = atanh(rho(z, w)), evaluated as log(1 + rho) - log(1 - rho^2) / 2
/// from the exact gap so that it stays finite for every pair of ball points.
double bergman_metric(const BallPoint& z, const BallPoint& w);

/// beta as a function of rho alone; rho is clamped at 1 - 1e-15.
double bergman_from_pseudo(double rho);

/// Bergman distance from the origin of a point with the given gap.
double bergman_radius(const Point& z);

}  // namespace locomp
