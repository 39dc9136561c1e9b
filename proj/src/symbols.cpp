#include "locomp/symbols.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "locomp/errors.hpp"

namespace locomp {

namespace {

// Tolerance for rounding when checking the declared bound.
constexpr double kBoundSlack = 1e-12;

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Symbol::Symbol(Function u, double sup_bound, std::string label)
    : u_(std::move(u)), sup_bound_(sup_bound), label_(std::move(label)) {
  if (!(sup_bound > 0.0) || !std::isfinite(sup_bound)) throw ValidationError("symbol sup_bound must be positive");
}

Symbol Symbol::radial(std::function<double(double)> profile, double sup_bound, std::string label,
                      std::vector<double> breakpoints) {
  Symbol s([profile](const Point& z) { return cplx(profile(z.norm())); }, sup_bound, std::move(label));
  s.profile_ = std::move(profile);
  s.breakpoints_ = std::move(breakpoints);
  return s;
}

cplx Symbol::checked(const Point& z) const {
  const cplx v = u_(z);
  if (!(std::abs(v) <= sup_bound_ * (1.0 + kBoundSlack))) {
    throw ValidationError("symbol '" + label_ + "' exceeds its declared bound " + fmt(sup_bound_) + " at " +
                          z.to_string() + " (value modulus " + fmt(std::abs(v)) + ")");
  }
  return v;
}

double Symbol::checked_radial(double r) const {
  const double v = profile_(r);
  if (!(std::abs(v) <= sup_bound_ * (1.0 + kBoundSlack))) {
    throw ValidationError("symbol '" + label_ + "' exceeds its declared bound " + fmt(sup_bound_) + " at |z| = " +
                          fmt(r) + " (value " + fmt(v) + ")");
  }
  return v;
}

std::vector<std::string> builtin_symbol_names() {
  return {"constant", "one_minus_abs2", "abs2", "radial_step", "radial_bump", "angular", "gaussian_decay"};
}

Symbol builtin_symbol(const std::string& name, const std::map<std::string, double>& p) {
  if (name == "constant") {
    const double c = param(p, "value", 1.0);
    if (c == 0.0) return Symbol([](const Point&) { return cplx(0.0); }, 1.0, "constant(0)");
    return Symbol::radial([c](double) { return c; }, std::abs(c), "constant(" + fmt(c) + ")");
  }
  if (name == "one_minus_abs2") {
    return Symbol::radial([](double r) { return 1.0 - r * r; }, param(p, "bound", 1.0), "one_minus_abs2");
  }
  if (name == "abs2") {
    return Symbol::radial([](double r) { return r * r; }, param(p, "bound", 1.0), "abs2");
  }
  if (name == "radial_step") {
    const double r0 = param(p, "radius", 0.5);
    const double in = param(p, "inside", -1.0), out = param(p, "outside", 1.0);
    return Symbol::radial([r0, in, out](double r) { return r < r0 ? in : out; },
                          std::max(std::abs(in), std::abs(out)), "radial_step(" + fmt(r0) + ")", {r0});
  }
  if (name == "radial_bump") {
    const double r0 = param(p, "radius", 0.7);
    return Symbol::radial(
        [r0](double r) {
          const double q = r * r / (r0 * r0);
          return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
        },
        1.0, "radial_bump(" + fmt(r0) + ")", {r0});
  }
  if (name == "angular") {
    const double k = param(p, "power", 2.0);
    return Symbol(
        [k](const Point& z) {
          const double a = std::abs(z[0]);
          const cplx phase = a > 0.0 ? z[0] / a : cplx(1.0);
          return phase * std::pow(std::max(0.0, z.gap()), k);
        },
        1.0, "angular(" + fmt(k) + ")");
  }
  if (name == "gaussian_decay") {
    const double s = param(p, "scale", 0.5);
    return Symbol::radial([s](double r) { return std::exp(-s * r * r); }, 1.0, "gaussian_decay(" + fmt(s) + ")");
  }
  throw ValidationError("unknown built-in symbol '" + name + "'");
}

Symbol expression_symbol(const std::string& text, double sup_bound, std::string label) {
  const Expression e(text);
  if (label.empty()) label = "expr(" + text + ")";
  if (e.radial_only()) {
    return Symbol::radial([e](double r) { return e(r, r, 0.0); }, sup_bound, std::move(label));
  }
  return Symbol([e](const Point& z) { return cplx(e(z.norm(), z[0].real(), z[0].imag())); }, sup_bound,
                std::move(label));
}

}  // namespace locomp
