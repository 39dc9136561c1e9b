#include "locomp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"
#include "parallel.hpp"

namespace locomp {

namespace {

constexpr double kPi = std::numbers::pi;
// Radial DE range: exp(-pi sinh 4.764) ~ 1e-80, so nodes reach gaps near 1e-80.
constexpr double kRadialDE = 4.764;
// Angular DE range: the mass missed at theta = +-pi is below 1e-15.
constexpr double kAngularDE = 3.15;

double factorial(int k) { return std::tgamma(k + 1.0); }

struct Radial {
  std::vector<double> v;  // radial variable (s or t)
  std::vector<double> w;  // d(variable) weight
};

// DE rule on [a, b] in the radial variable, clustering double-exponentially at both ends.
// v = a + (b - a) / (1 + E), E = exp(-pi sinh x); written with q = exp(-|pi sinh x|) so
// that distances to either end are computed without cancellation.
Radial de_radial(double a, double b, int count) {
  Radial r;
  const double h = 2.0 * kRadialDE / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double x = -kRadialDE + h * i;
    const double ps = kPi * std::sinh(x);
    const double q = std::exp(-std::abs(ps));
    const double frac = q / (1.0 + q);  // distance to the near end as a fraction of (b - a)
    const double v = ps < 0.0 ? a + (b - a) * frac : b - (b - a) * frac;
    const double dv = (b - a) * kPi * std::cosh(x) * q / ((1.0 + q) * (1.0 + q)) * h;
    if (dv <= 0.0 || !std::isfinite(dv)) continue;
    r.v.push_back(v);
    r.w.push_back(dv);
  }
  return r;
}

Radial gl_radial(double a, double b, int count) {
  Radial r;
  gauss_legendre(count, a, b, r.v, r.w);
  return r;
}

// Unit directions of the angular part with normalized surface weights.
struct Angular {
  std::vector<std::array<cplx, kMaxDim>> dir;
  std::vector<double> w;
};

Angular circle_nodes(int count, AngularScheme scheme, double rotation) {
  Angular a;
  if (scheme == AngularScheme::trapezoid) {
    for (int j = 0; j < count; ++j) {
      const double th = rotation + 2.0 * kPi * j / count;
      a.dir.push_back({std::polar(1.0, th), cplx{}});
      a.w.push_back(1.0 / count);
    }
    return a;
  }
  // theta = pi (1 + tanh(pi/2 sinh x)) clusters at theta = 0 = 2 pi.  The offset from
  // the focus is evaluated directly so that small offsets keep full relative accuracy.
  const double h = 2.0 * kAngularDE / (count - 1);
  for (int j = 0; j < count; ++j) {
    const double x = -kAngularDE + h * j;
    const double v = 0.5 * kPi * std::sinh(x);
    const double e = std::exp(-2.0 * std::abs(v));
    const double off = 2.0 * kPi * e / (1.0 + e);
    const double th = v < 0.0 ? off : -off;
    const double ch = std::cosh(v);
    const double wt = 0.25 * kPi * std::cosh(x) / (ch * ch) * h;
    if (wt <= 0.0 || !std::isfinite(wt)) continue;
    a.dir.push_back({std::polar(1.0, rotation + th), cplx{}});
    a.w.push_back(wt);
  }
  return a;
}

// n = 2: xi = (sqrt(u) e^{i th1}, sqrt(1 - u) e^{i th2}) with d sigma = du dth1 dth2 / (4 pi^2).
Angular sphere_nodes(int polar, int count) {
  Angular a;
  std::vector<double> u, uw;
  gauss_legendre(polar, 0.0, 1.0, u, uw);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r1 = std::sqrt(u[i]);
    const double r2 = std::sqrt(1.0 - u[i]);
    for (int j = 0; j < count; ++j) {
      for (int k = 0; k < count; ++k) {
        a.dir.push_back({std::polar(r1, 2.0 * kPi * j / count), std::polar(r2, 2.0 * kPi * k / count)});
        a.w.push_back(uw[i] / (static_cast<double>(count) * count));
      }
    }
  }
  return a;
}

double gaussian_excluded(int n, double x) {
  // e^{-x} sum_{k<n} x^k / k!
  double term = 1.0, s = 0.0;
  for (int k = 0; k < n; ++k) {
    s += term;
    term *= x / (k + 1);
  }
  return std::exp(-x) * s;
}

double region_gap_limit(double R) {
  if (R <= 0.0) return 1.0;
  const double c = std::cosh(R);
  return 1.0 / (c * c);
}

QuadratureRule assemble(const RuleSpec& spec, const Point& center, double R) {
  spec.validate();
  const int n = spec.n;
  QuadratureRule rule;
  rule.spec = spec;
  rule.center = center;
  rule.inner_radius = R;

  const double rotation = (n == 1 && center.norm2() > 0.0) ? std::arg(center[0]) : 0.0;
  const Angular ang = n == 1 ? circle_nodes(spec.angular_nodes, spec.angular, rotation)
                             : sphere_nodes(spec.polar_nodes, spec.angular_nodes);
  rule.per_ring = static_cast<int>(ang.w.size());

  Radial rad;
  if (is_ball(spec.measure)) {
    const double s_min = std::max(0.0, 1.0 - spec.rho_max * spec.rho_max);
    const double s_max = std::min(1.0, region_gap_limit(R));
    if (s_max <= s_min) {
      rule.closed_form_mass = 0.0;
      return rule;
    }
    rad = spec.radial == RadialScheme::double_exponential ? de_radial(s_min, s_max, spec.radial_nodes)
                                                          : gl_radial(s_min, s_max, spec.radial_nodes);
    for (std::size_t i = 0; i < rad.v.size(); ++i) {
      const double s = rad.v[i];
      double dens = n * std::pow(1.0 - s, n - 1);
      if (spec.measure == Measure::ball_invariant) dens /= std::pow(s, n + 1);
      rad.w[i] *= dens;
    }
    rule.truncation_bound = 1.0 - std::pow(1.0 - s_min, n);
    if (spec.measure == Measure::ball_lebesgue) {
      rule.closed_form_mass = std::pow(1.0 - s_min, n) - std::pow(1.0 - s_max, n);
    } else if (n == 1 && s_min > 0.0) {
      rule.closed_form_mass = 1.0 / s_min - 1.0 / s_max;
    } else {
      rule.closed_form_mass = s_min > 0.0 ? std::nan("") : INFINITY;
    }
  } else {
    const double t_min = R * R;
    const double t_max = spec.range * spec.range;
    if (t_max <= t_min) {
      rule.closed_form_mass = 0.0;
      return rule;
    }
    rad = gl_radial(t_min, t_max, spec.radial_nodes);
    const double lebesgue = std::pow(kPi, n) / factorial(n - 1);
    for (std::size_t i = 0; i < rad.v.size(); ++i) rad.w[i] *= lebesgue * std::pow(rad.v[i], n - 1);
    if (spec.measure == Measure::plane_gaussian) {
      const double x = spec.alpha * t_max;
      rule.truncation_bound = gaussian_excluded(n, x);
      rule.closed_form_mass = center.norm2() == 0.0
                                  ? gaussian_excluded(n, spec.alpha * t_min) - gaussian_excluded(n, x)
                                  : std::nan("");
    } else {
      rule.truncation_bound = 0.0;
      rule.closed_form_mass = std::pow(kPi, n) / factorial(n) * (std::pow(t_max, n) - std::pow(t_min, n));
    }
  }

  rule.rings = static_cast<int>(rad.v.size());
  rule.ring_radial = rad.v;
  rule.ring_weight = rad.w;
  const std::size_t total = rad.v.size() * ang.w.size();
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  const bool moved = center.norm2() > 0.0;
  if (moved) rule.local_nodes.reserve(total);
  const double log_norm_c = is_ball(spec.measure) ? -0.5 * (n + 1) * std::log(center.gap()) : 0.0;
  for (std::size_t i = 0; i < rad.v.size(); ++i) {
    for (std::size_t j = 0; j < ang.w.size(); ++j) {
      const std::span<const cplx> dir{ang.dir[j].data(), static_cast<std::size_t>(n)};
      double w = rad.w[i] * ang.w[j];
      Point node;
      if (is_ball(spec.measure)) {
        const Point u = Point::on_shell(dir, rad.v[i]);
        node = moved ? mobius_map(center, u) : u;
        if (moved) rule.local_nodes.push_back(u);
        if (moved && spec.measure == Measure::ball_lebesgue) {
          // Jacobian of phi_center: |k_center(u)|^2.
          const double lk = -(n + 1) * std::log(std::abs(1.0 - inner(u, center))) - log_norm_c;
          w *= std::exp(2.0 * lk);
        }
      } else {
        const double t = std::sqrt(rad.v[i]);
        Point u = Point::from_coords(dir);
        u = cplx(t) * u;
        node = moved ? center + u : u;
        if (moved) rule.local_nodes.push_back(u);
        if (spec.measure == Measure::plane_gaussian) {
          w *= std::pow(spec.alpha / kPi, n) * std::exp(-spec.alpha * node.norm2());
        }
      }
      rule.nodes.push_back(node);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::ball_lebesgue: return "ball-lebesgue";
    case Measure::ball_invariant: return "ball-invariant";
    case Measure::plane_gaussian: return "plane-gaussian";
    case Measure::plane_lebesgue: return "plane-lebesgue";
  }
  return "?";
}

std::string to_string(RadialScheme s) {
  return s == RadialScheme::gauss_legendre ? "gauss-legendre" : "double-exponential";
}

std::string to_string(AngularScheme s) { return s == AngularScheme::trapezoid ? "trapezoid" : "focused"; }

Measure measure_from_string(const std::string& s) {
  for (Measure m : {Measure::ball_lebesgue, Measure::ball_invariant, Measure::plane_gaussian, Measure::plane_lebesgue}) {
    if (to_string(m) == s) return m;
  }
  throw ValidationError("unknown measure '" + s + "'");
}

RadialScheme radial_scheme_from_string(const std::string& s) {
  if (s == "gauss-legendre") return RadialScheme::gauss_legendre;
  if (s == "double-exponential") return RadialScheme::double_exponential;
  throw ValidationError("unknown radial scheme '" + s + "'");
}

AngularScheme angular_scheme_from_string(const std::string& s) {
  if (s == "trapezoid") return AngularScheme::trapezoid;
  if (s == "focused") return AngularScheme::focused;
  throw ValidationError("unknown angular scheme '" + s + "'");
}

void RuleSpec::validate() const {
  if (n < 1 || n > kMaxDim) throw ValidationError("quadrature dimension must be 1 or 2");
  if (radial_nodes < 4 || angular_nodes < 4) throw ValidationError("node counts must be at least 4");
  if (n == 2 && polar_nodes < 1) throw ValidationError("polar node count must be positive");
  if (n == 2 && angular == AngularScheme::focused) throw ValidationError("focused angular rules need n = 1");
  if (is_ball(measure)) {
    if (!(rho_max > 0.0 && rho_max <= 1.0)) throw ValidationError("rho_max must lie in (0, 1]");
  } else {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
    if (!(range > 0.0) || !std::isfinite(range)) throw ValidationError("plane range must be positive and finite");
  }
}

RuleSpec RuleSpec::refined() const {
  RuleSpec r = *this;
  r.radial_nodes = 2 * radial_nodes;
  r.angular_nodes = 2 * angular_nodes;
  if (n == 2) r.polar_nodes = 2 * polar_nodes;
  return r;
}

QuadratureRule build_rule(const RuleSpec& spec) { return assemble(spec, Point::origin(spec.n), 0.0); }

QuadratureRule build_ball_rule(int n, int radial_nodes, int angular_nodes, double rho_max, Measure measure) {
  if (!is_ball(measure)) throw ValidationError("build_ball_rule needs a ball measure");
  RuleSpec s;
  s.n = n;
  s.measure = measure;
  s.radial = measure == Measure::ball_invariant ? RadialScheme::double_exponential : RadialScheme::gauss_legendre;
  s.radial_nodes = radial_nodes;
  s.angular_nodes = angular_nodes;
  s.rho_max = rho_max;
  return build_rule(s);
}

QuadratureRule build_plane_rule(int n, double alpha, double range_R, int radial_nodes, int angular_nodes,
                                Measure measure) {
  if (is_ball(measure)) throw ValidationError("build_plane_rule needs a plane measure");
  RuleSpec s;
  s.n = n;
  s.measure = measure;
  s.alpha = alpha;
  s.range = range_R;
  s.radial_nodes = radial_nodes;
  s.angular_nodes = angular_nodes;
  return build_rule(s);
}

QuadratureRule centered_rule(const QuadratureRule& base, const Point& center, double R) {
  if (R < 0.0 || !std::isfinite(R)) throw ValidationError("excluded radius must be finite and nonnegative");
  if (center.dim() != base.spec.n) throw ValidationError("center dimension does not match the rule");
  if (is_ball(base.spec.measure)) {
    BallPoint check(center);
    (void)check;
  }
  return assemble(base.spec, center, R);
}

namespace {

template <class T>
T pairwise(const T* v, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise(v.data(), v.size()); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise(v.data(), v.size()); }

std::vector<cplx> evaluate_nodes(const Function& f, const QuadratureRule& rule) {
  std::vector<cplx> vals(rule.size());
  std::vector<char> bad(rule.size(), 0);
  // Blocks of nodes keep the scheduling overhead small.
  constexpr std::size_t kBlock = 256;
  detail::parallel_for((rule.size() + kBlock - 1) / kBlock, [&](std::size_t b) {
    const std::size_t end = std::min(rule.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const cplx v = f(rule.nodes[i]);
      vals[i] = v;
      bad[i] = !(std::isfinite(v.real()) && std::isfinite(v.imag()));
    }
  });
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (bad[i]) throw NumericalError("non-finite integrand value at node " + rule.nodes[i].to_string());
  }
  return vals;
}

cplx integrate(const Function& f, const QuadratureRule& rule) {
  std::vector<cplx> vals = evaluate_nodes(f, rule);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= rule.weights[i];
  return pairwise_sum(std::span<const cplx>(vals));
}

double integrate_real(const std::function<double(const Point&)>& f, const QuadratureRule& rule) {
  const cplx v = integrate([&f](const Point& z) { return cplx(f(z)); }, rule);
  return v.real();
}

double tail_integral(const Function& f, const Point& center, double R, const QuadratureRule& rule) {
  if (rule.centered()) throw ValidationError("tail_integral expects an uncentered base rule");
  const QuadratureRule moved = centered_rule(rule, center, R);
  return integrate([&f](const Point& w) { return cplx(std::abs(f(w))); }, moved).real();
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be positive");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (t * p1 - p0) / (t * t - 1.0);
    const double wt = 2.0 / ((1.0 - t * t) * dp * dp);
    const std::size_t lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = mid - half * t;
    x[hi] = mid + half * t;
    w[lo] = w[hi] = half * wt;
  }
}

Rule1D composite_gauss_legendre(double a, double b, std::vector<double> breaks, int panels, int nodes_per_panel) {
  if (!(b > a)) throw ValidationError("composite rule needs a < b");
  std::vector<double> cuts{a, b};
  for (double c : breaks) {
    if (c > a && c < b) cuts.push_back(c);
  }
  for (int k = 1; k < panels; ++k) cuts.push_back(a + (b - a) * k / panels);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double u, double v) { return std::abs(u - v) < 1e-14; }),
             cuts.end());
  Rule1D r;
  std::vector<double> x, w;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    gauss_legendre(nodes_per_panel, cuts[k], cuts[k + 1], x, w);
    r.x.insert(r.x.end(), x.begin(), x.end());
    r.w.insert(r.w.end(), w.begin(), w.end());
  }
  return r;
}

}  // namespace locomp
