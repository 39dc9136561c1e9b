#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "locomp/kernels.hpp"
#include "locomp/point.hpp"

namespace locomp {

/// A bounded function u with a declared bound sup |u| <= sup_bound.
///
/// Radial symbols also carry their profile as a function of |z|, which lets
/// Toeplitz matrices be built from one-dimensional integrals; `breakpoints`
/// lists radii where the profile is not smooth.
class Symbol {
 public:
  Symbol(Function u, double sup_bound, std::string label);
  static Symbol radial(std::function<double(double)> profile, double sup_bound, std::string label,
                       std::vector<double> breakpoints = {});

  cplx operator()(const Point& z) const { return u_(z); }
  /// u(z), throwing ValidationError if |u(z)| exceeds the declared bound.
  cplx checked(const Point& z) const;
  double checked_radial(double r) const;

  double sup_bound() const { return sup_bound_; }
  const std::string& label() const { return label_; }
  bool is_radial() const { return static_cast<bool>(profile_); }
  double profile(double r) const { return profile_(r); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  Function u_;
  std::function<double(double)> profile_;
  double sup_bound_;
  std::string label_;
  std::vector<double> breakpoints_;
};

/// Built-in symbols by name.  Parameters (with defaults):
///   constant {value: 1}; one_minus_abs2; abs2; radial_step {radius: 0.5, inside: -1, outside: 1};
///   radial_bump {radius: 0.7}; angular {power: 2}; gaussian_decay {scale: 0.5}.
/// abs2 is unbounded on the plane, so its bound is taken as {bound} (required there).
Symbol builtin_symbol(const std::string& name, const std::map<std::string, double>& params = {});
std::vector<std::string> builtin_symbol_names();

/// Real expression over r = |z|, x = Re z_1, y = Im z_1 (and theta = arg z_1).
/// Supports + - * / ^, unary minus, parentheses, numbers, pi, e and the functions
/// exp, log, sqrt, abs, sin, cos, tan, tanh, atan, min, max, step (1 for arguments >= 0).
class Expression {
 public:
  explicit Expression(const std::string& text);
  double operator()(double r, double x, double y) const;
  /// True if the expression depends on r only.
  bool radial_only() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

Symbol expression_symbol(const std::string& text, double sup_bound, std::string label = "");

}  // namespace locomp
