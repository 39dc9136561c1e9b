#include "locomp/point.hpp"

#include <cmath>
#include <cstdio>

#include "locomp/errors.hpp"

namespace locomp {

Point::Point(cplx z1) : n_(1) {
  c_[0] = z1;
  gap_ = 1.0 - norm2();
}

Point::Point(cplx z1, cplx z2) : n_(2) {
  c_[0] = z1;
  c_[1] = z2;
  gap_ = 1.0 - norm2();
}

Point Point::from_coords(std::span<const cplx> coords) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw ValidationError("point dimension must be 1 or 2, got " + std::to_string(coords.size()));
  }
  Point p;
  p.n_ = static_cast<int>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = coords[i];
  p.gap_ = 1.0 - p.norm2();
  return p;
}

Point Point::on_shell(std::span<const cplx> direction, double gap) {
  Point p = from_coords(direction);
  const double radius = std::sqrt(std::max(0.0, 1.0 - gap));
  for (int i = 0; i < p.n_; ++i) p.c_[static_cast<std::size_t>(i)] *= radius;
  p.gap_ = gap;
  return p;
}

Point Point::origin(int n) {
  if (n < 1 || n > kMaxDim) throw ValidationError("dimension must be 1 or 2");
  Point p;
  p.n_ = n;
  p.gap_ = 1.0;
  return p;
}

double Point::norm2() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += std::norm(c_[static_cast<std::size_t>(i)]);
  return s;
}

double Point::norm() const { return std::sqrt(norm2()); }

bool Point::is_finite() const {
  for (int i = 0; i < n_; ++i) {
    const cplx v = c_[static_cast<std::size_t>(i)];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return std::isfinite(gap_);
}

Point Point::with_gap(double gap) const {
  Point p = *this;
  p.gap_ = gap;
  return p;
}

std::string Point::to_string() const {
  std::string out = "(";
  char buf[96];
  for (int i = 0; i < n_; ++i) {
    const cplx v = c_[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof buf, "%s%.17g%+.17gi", i ? ", " : "", v.real(), v.imag());
    out += buf;
  }
  return out + ")";
}

cplx inner(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw ValidationError("dimension mismatch in inner product");
  cplx s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

Point operator+(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw ValidationError("dimension mismatch");
  std::array<cplx, kMaxDim> c{};
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = a[i] + b[i];
  return Point::from_coords({c.data(), static_cast<std::size_t>(a.dim())});
}

Point operator-(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw ValidationError("dimension mismatch");
  std::array<cplx, kMaxDim> c{};
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = a[i] - b[i];
  return Point::from_coords({c.data(), static_cast<std::size_t>(a.dim())});
}

Point operator*(cplx s, const Point& a) {
  std::array<cplx, kMaxDim> c{};
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = s * a[i];
  return Point::from_coords({c.data(), static_cast<std::size_t>(a.dim())});
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

BallPoint::BallPoint(const Point& p) : p_(p) {
  // On-shell nodes may round to |z| = 1 while their exact gap is positive.
  if (!p.is_finite() || p.gap() <= 0.0 || p.norm2() > 1.0 + 4e-16) {
    throw DomainError("point " + p.to_string() + " is not in the open unit ball");
  }
}

PlanePoint::PlanePoint(const Point& p) : p_(p) {
  if (!p.is_finite()) throw DomainError("point " + p.to_string() + " has non-finite coordinates");
}

}  // namespace locomp
