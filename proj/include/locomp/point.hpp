#pragma once

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <string>

namespace locomp {

using cplx = std::complex<double>;

/// Largest complex dimension handled by the quadrature and basis code.
inline constexpr int kMaxDim = 2;

/// A point of C^n (n <= 2).
///
/// Besides its coordinates a point carries its boundary gap 1 - |z|^2.  Points
/// created on a shell (`Point::on_shell`) keep the gap exactly, so integrands
/// that depend on 1 - |z|^2 stay accurate at nodes that are numerically on the
/// unit sphere.  For points of the plane the gap is just 1 - |z|^2 and carries
/// no meaning.
class Point {
 public:
  Point() = default;
  explicit Point(cplx z1);
  Point(cplx z1, cplx z2);

  static Point from_coords(std::span<const cplx> coords);
  /// sqrt(1 - gap) * direction, with `direction` a unit vector.
  static Point on_shell(std::span<const cplx> direction, double gap);
  static Point origin(int n);

  int dim() const { return n_; }
  cplx operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const cplx> coords() const { return {c_.data(), static_cast<std::size_t>(n_)}; }

  double norm2() const;
  double norm() const;
  double gap() const { return gap_; }
  bool is_finite() const;

  /// Copy with the gap replaced by an externally known, more accurate value.
  Point with_gap(double gap) const;

  std::string to_string() const;

 private:
  std::array<cplx, kMaxDim> c_{};
  int n_ = 1;
  double gap_ = 1.0;
};

/// <a, b> = sum a_i conj(b_i).
cplx inner(const Point& a, const Point& b);
Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(cplx s, const Point& a);
double distance(const Point& a, const Point& b);

/// Point of the open unit ball; construction rejects |z| >= 1.
class BallPoint {
 public:
  explicit BallPoint(const Point& p);
  explicit BallPoint(cplx z1) : BallPoint(Point(z1)) {}
  BallPoint(cplx z1, cplx z2) : BallPoint(Point(z1, z2)) {}

  const Point& point() const { return p_; }
  operator const Point&() const { return p_; }
  int dim() const { return p_.dim(); }

 private:
  Point p_;
};

/// Point of C^n with finite coordinates.
class PlanePoint {
 public:
  explicit PlanePoint(const Point& p);
  explicit PlanePoint(cplx z1) : PlanePoint(Point(z1)) {}

  const Point& point() const { return p_; }
  operator const Point&() const { return p_; }
  int dim() const { return p_.dim(); }

 private:
  Point p_;
};

}  // namespace locomp
