#include "locomp/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "locomp/errors.hpp"

namespace locomp {

Point mobius_map(const Point& z, const Point& w) {
  const int n = z.dim();
  if (w.dim() != n) throw ValidationError("mobius: dimension mismatch");
  const double zz = z.norm2();
  const cplx wz = inner(w, z);
  const cplx denom = 1.0 - wz;
  std::array<cplx, kMaxDim> out{};
  if (zz == 0.0) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = -w[i];
    return Point::from_coords({out.data(), static_cast<std::size_t>(n)}).with_gap(w.gap());
  }
  const double sz = std::sqrt(z.gap());
  for (int i = 0; i < n; ++i) {
    const cplx proj = wz / zz * z[i];
    const cplx orth = w[i] - proj;
    out[static_cast<std::size_t>(i)] = (z[i] - proj - sz * orth) / denom;
  }
  const double gap = z.gap() * w.gap() / std::norm(denom);
  return Point::from_coords({out.data(), static_cast<std::size_t>(n)}).with_gap(gap);
}

BallPoint mobius(const BallPoint& z, const BallPoint& w) {
  return BallPoint(mobius_map(z.point(), w.point()));
}

double pseudo_hyperbolic(const BallPoint& z, const BallPoint& w) {
  return std::min(mobius_map(z.point(), w.point()).norm(), 1.0);
}

double bergman_from_pseudo(double rho) {
  const double r = std::clamp(rho, 0.0, 1.0 - 1e-15);
  return std::atanh(r);
}

double bergman_metric(const BallPoint& z, const BallPoint& w) {
  const Point m = mobius_map(z.point(), w.point());
  const double rho = std::min(m.norm(), 1.0);
  if (rho < 0.5) return std::atanh(rho);
  return std::log1p(rho) - 0.5 * std::log(m.gap());
}

double bergman_radius(const Point& z) {
  const double rho = std::min(z.norm(), 1.0);
  if (rho < 0.5) return std::atanh(rho);
  return std::log1p(rho) - 0.5 * std::log(z.gap());
}

}  // namespace locomp
