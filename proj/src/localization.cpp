#include "locomp/localization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"
#include "locomp/kernels.hpp"
#include "parallel.hpp"

namespace locomp {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_i w_i f(i) over the rule, serial and in fixed order.
double weighted_sum(const QuadratureRule& rule, const std::function<double(std::size_t)>& f) {
  std::vector<double> v(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = f(i);
    if (!std::isfinite(x)) throw NumericalError("non-finite integrand value at node " + rule.nodes[i].to_string());
    v[i] = rule.weights[i] * x;
  }
  return pairwise_sum(std::span<const double>(v));
}

void require_base(const QuadratureRule& base, Measure want, int n) {
  if (base.centered()) throw ValidationError("localization integrals need an uncentered base rule");
  if (base.spec.measure != want) {
    throw ValidationError("localization integrals need a " + to_string(want) + " rule, got " + base.domain_tag());
  }
  if (base.spec.n != n) throw ValidationError("rule dimension does not match the operator");
}

void require_exponent(int n, double a) {
  if (!(a > LocalizationParams::a_min(n) && a < 1.0)) {
    throw ValidationError("exponent a must lie in ((n-1)/(n+1), 1)");
  }
}

// Localization integrand summed over a rule centered at z.
double tail_on(const CorrelationEvaluator& ev, const SpaceDescriptor& space, const Point& z, double a,
               const QuadratureRule& rule) {
  if (space.is_bergman()) {
    const double lz = log_kernel_norm(space, z);
    return weighted_sum(rule, [&](std::size_t i) {
      const Point& w = rule.nodes[i];
      const double m = ev.modulus(w);
      return m == 0.0 ? 0.0 : m * std::exp(a * (lz - log_kernel_norm(space, w)));
    });
  }
  return weighted_sum(rule, [&](std::size_t i) { return ev.modulus(rule.nodes[i]); });
}

// Rudin-Forelli integrand in the local variable u of a rule centered at z.
double rudin_forelli_on(int n, double a, const Point& z, const QuadratureRule& rule) {
  const double e1 = 0.5 * (n + 1) * (1.0 + a), e2 = -a * (n + 1);
  return weighted_sum(rule, [&](std::size_t i) {
    const Point& u = rule.local(i);
    return std::exp(e1 * std::log(u.gap()) + e2 * std::log(std::abs(1.0 - inner(u, z))));
  });
}

Measure base_measure(const SpaceDescriptor& s) {
  return s.is_bergman() ? Measure::ball_invariant : Measure::plane_lebesgue;
}

// Median of the last k entries.
double tail_median(std::vector<double> v, std::size_t k) {
  if (v.size() > k) v.erase(v.begin(), v.end() - static_cast<std::ptrdiff_t>(k));
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

LocalizationParams LocalizationParams::for_space(const SpaceDescriptor& space, double delta) {
  LocalizationParams p{space.n, space.p, delta};
  p.validate();
  return p;
}

void LocalizationParams::validate() const {
  if (n < 1 || n > kMaxDim) throw ValidationError("dimension must be 1 or 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("p must lie in (1, inf)");
  if (!(delta > 0.0 && delta < std::min(p, conjugate()))) throw ValidationError("delta must lie in (0, min(p, p'))");
}

double LocalizationParams::a_T() const { return 1.0 - 2.0 * delta / (conjugate() * (n + 1.0)); }
double LocalizationParams::a_Tstar() const { return 1.0 - 2.0 * delta / (p * (n + 1.0)); }

bool TailProfile::non_increasing(double rel_tol) const {
  for (std::size_t i = 1; i < value.size(); ++i) {
    if (value[i] > value[i - 1] * (1.0 + rel_tol) + 1e-300) return false;
  }
  return true;
}

RuleSpec default_localization_rule(const SpaceDescriptor& space) {
  space.validate();
  RuleSpec s;
  s.n = space.n;
  if (space.is_bergman()) {
    s.measure = Measure::ball_invariant;
    s.radial = RadialScheme::double_exponential;
    s.angular = space.n == 1 ? AngularScheme::focused : AngularScheme::trapezoid;
    s.radial_nodes = space.n == 1 ? 64 : 40;
    s.angular_nodes = space.n == 1 ? 64 : 16;
    s.polar_nodes = 8;
  } else {
    s.measure = Measure::plane_lebesgue;
    s.radial = RadialScheme::gauss_legendre;
    s.angular = AngularScheme::trapezoid;
    s.radial_nodes = space.n == 1 ? 64 : 40;
    s.angular_nodes = space.n == 1 ? 64 : 16;
    s.polar_nodes = 8;
    s.alpha = space.alpha;
    s.range = 10.0 / std::sqrt(space.alpha);
  }
  return s;
}

std::vector<Point> default_z_grid(const SpaceDescriptor& space) {
  const std::vector<double> radii = space.is_bergman() ? std::vector<double>{0.0, 0.3, 0.6, 0.8, 0.9, 0.95}
                                                       : std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<Point> grid;
  for (double r : radii) {
    const int m = r == 0.0 ? 1 : 8;
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * kPi * k / 8.0;
      if (space.n == 1) {
        grid.emplace_back(std::polar(r, t));
      } else {
        grid.emplace_back(cplx(r * std::cos(t)), std::polar(r * std::sin(t), t));
      }
    }
  }
  return grid;
}

std::vector<double> default_r_list() { return {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}; }

double bergman_localization_integral(const TruncatedOperator& T, const Point& z, double a, const QuadratureRule& base,
                                     bool adjoint) {
  return bergman_localization_tail(T, z, 0.0, a, base, adjoint);
}

double bergman_localization_tail(const TruncatedOperator& T, const Point& z, double r, double a,
                                 const QuadratureRule& base, bool adjoint) {
  if (!T.space().is_bergman()) throw ValidationError("bergman_localization_tail needs a Bergman operator");
  return localization_tails(T, z, {r}, a, base, adjoint)[0];
}

double fock_localization_integral(const TruncatedOperator& T, const Point& z, const QuadratureRule& base,
                                  bool adjoint) {
  return fock_localization_tail(T, z, 0.0, base, adjoint);
}

double fock_localization_tail(const TruncatedOperator& T, const Point& z, double r, const QuadratureRule& base,
                              bool adjoint) {
  if (T.space().is_bergman()) throw ValidationError("fock_localization_tail needs a Fock operator");
  return localization_tails(T, z, {r}, 0.0, base, adjoint)[0];
}

std::vector<double> localization_tails(const TruncatedOperator& T, const Point& z, const std::vector<double>& radii,
                                       double a, const QuadratureRule& base, bool adjoint) {
  const SpaceDescriptor& space = T.space();
  require_base(base, base_measure(space), space.n);
  require_domain(space, z);
  if (space.is_bergman()) require_exponent(space.n, a);
  for (double r : radii) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("tail radius must be finite and nonnegative");
  }
  const CorrelationEvaluator ev(T, z, adjoint);
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(tail_on(ev, space, z, a, centered_rule(base, z, r)));
  return out;
}

double rudin_forelli_integral(int n, double a, const Point& z, double R, const QuadratureRule& base) {
  require_base(base, Measure::ball_invariant, n);
  BallPoint check(z);
  (void)check;
  return rudin_forelli_on(n, a, z, centered_rule(base, z, R));
}

double fock_rudin_forelli_integral(const SpaceDescriptor& space, const Point& z, double R, const QuadratureRule& base) {
  if (space.is_bergman()) throw ValidationError("fock_rudin_forelli_integral needs a Fock space");
  require_base(base, Measure::plane_lebesgue, space.n);
  require_domain(space, z);
  const QuadratureRule rule = centered_rule(base, z, R);
  // |<k_z, k_w>| = exp(-alpha |z - w|^2 / 2) with w = z + u.
  return weighted_sum(rule, [&](std::size_t i) { return std::exp(-0.5 * space.alpha * rule.local(i).norm2()); });
}

RudinForelliCheck rudin_forelli_check(int n, double a, const std::vector<Point>& z_grid, const RuleSpec& spec) {
  if (!std::isfinite(a)) throw ValidationError("exponent a must be finite");
  if (spec.measure != Measure::ball_invariant || spec.n != n) {
    throw ValidationError("rudin_forelli_check needs a ball-invariant rule of matching dimension");
  }
  if (z_grid.empty()) throw ValidationError("z grid is empty");
  RudinForelliCheck out;
  out.n = n;
  out.a = a;
  out.z_grid = z_grid;
  const QuadratureRule base = build_rule(spec);
  const QuadratureRule fine = build_rule(spec.refined());

  const std::size_t G = z_grid.size();
  std::vector<double> coarse(G), refined(G);
  detail::parallel_for(G, [&](std::size_t i) {
    coarse[i] = rudin_forelli_integral(n, a, z_grid[i], 0.0, base);
    refined[i] = rudin_forelli_integral(n, a, z_grid[i], 0.0, fine);
  });
  out.values = coarse;
  out.refined_values = refined;
  out.sup = *std::max_element(coarse.begin(), coarse.end());
  out.refined_sup = *std::max_element(refined.begin(), refined.end());
  out.stable = std::abs(out.refined_sup - out.sup) <= 0.01 * std::abs(out.refined_sup);

  // Sweep toward the boundary: increments shrink geometrically when the sup is finite
  // and stop shrinking (or grow) when it is not.
  std::array<cplx, kMaxDim> e1{};
  e1[0] = 1.0;
  for (int k = 2; k <= 16; ++k) {
    const double g = std::pow(10.0, -0.5 * k);
    out.sweep_gap.push_back(g);
  }
  out.sweep_value.resize(out.sweep_gap.size());
  detail::parallel_for(out.sweep_gap.size(), [&](std::size_t i) {
    const Point z = Point::on_shell({e1.data(), static_cast<std::size_t>(n)}, out.sweep_gap[i]);
    out.sweep_value[i] = rudin_forelli_integral(n, a, z, 0.0, base);
  });
  bool blown = false;
  for (double v : out.sweep_value) blown = blown || !(v < 1e12);
  for (double v : out.values) blown = blown || !(v < 1e12);
  std::vector<double> ratios;
  for (std::size_t i = 2; i < out.sweep_value.size(); ++i) {
    const double d0 = out.sweep_value[i - 1] - out.sweep_value[i - 2];
    const double d1 = out.sweep_value[i] - out.sweep_value[i - 1];
    ratios.push_back(d0 != 0.0 ? std::abs(d1 / d0) : (d1 == 0.0 ? 0.0 : INFINITY));
  }
  out.divergent = blown || tail_median(ratios, 4) >= 0.995;
  return out;
}

TailProfile rudin_forelli_tail(int n, double a, const std::vector<double>& R_list, const std::vector<Point>& z_grid,
                               const QuadratureRule& base) {
  TailProfile prof;
  prof.radius = R_list;
  prof.value.assign(R_list.size(), 0.0);
  prof.error_bar.assign(R_list.size(), 0.0);
  std::vector<std::vector<double>> vals(z_grid.size());
  detail::parallel_for(z_grid.size(), [&](std::size_t i) {
    for (double R : R_list) vals[i].push_back(rudin_forelli_integral(n, a, z_grid[i], R, base));
  });
  for (std::size_t k = 0; k < R_list.size(); ++k) {
    for (const auto& v : vals) prof.value[k] = std::max(prof.value[k], v[k]);
  }
  return prof;
}

TailProfile fock_rudin_forelli_tail(const SpaceDescriptor& space, const std::vector<double>& R_list,
                                    const std::vector<Point>& z_grid, const QuadratureRule& base) {
  TailProfile prof;
  prof.radius = R_list;
  prof.value.assign(R_list.size(), 0.0);
  prof.error_bar.assign(R_list.size(), 0.0);
  std::vector<std::vector<double>> vals(z_grid.size());
  detail::parallel_for(z_grid.size(), [&](std::size_t i) {
    for (double R : R_list) vals[i].push_back(fock_rudin_forelli_integral(space, z_grid[i], R, base));
  });
  for (std::size_t k = 0; k < R_list.size(); ++k) {
    for (const auto& v : vals) prof.value[k] = std::max(prof.value[k], v[k]);
  }
  return prof;
}

SchurBound schur_bound(const KernelFunction& kernel, const WeightFunction& h, double p, const QuadratureRule& rule) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("Schur exponent p must lie in (1, inf)");
  const double q = p / (p - 1.0);
  const std::size_t N = rule.size();
  std::vector<double> hv(N);
  for (std::size_t i = 0; i < N; ++i) {
    hv[i] = h(rule.nodes[i]);
    if (!(hv[i] > 0.0) || !std::isfinite(hv[i])) {
      throw ValidationError("Schur test function must be positive; got " + std::to_string(hv[i]) + " at node " +
                            rule.nodes[i].to_string());
    }
  }
  std::vector<double> row(N), col(N);
  detail::parallel_for(N, [&](std::size_t i) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      s1 += kernel(rule.nodes[i], rule.nodes[j]) * std::pow(hv[j], q) * rule.weights[j];
      s2 += kernel(rule.nodes[j], rule.nodes[i]) * std::pow(hv[j], p) * rule.weights[j];
    }
    row[i] = s1 / std::pow(hv[i], q);
    col[i] = s2 / std::pow(hv[i], p);
  });
  SchurBound b;
  b.c1 = *std::max_element(row.begin(), row.end());
  b.c2 = *std::max_element(col.begin(), col.end());
  if (!std::isfinite(b.c1) || !std::isfinite(b.c2)) throw NumericalError("Schur integrals are not finite");
  b.value = std::max(b.c1, b.c2);
  b.norm_bound = std::pow(b.c1, 1.0 / q) * std::pow(b.c2, 1.0 / p);
  return b;
}

LocalizationCertificate certify(const TruncatedOperator& T, const LocalizationParams& params,
                                const std::vector<double>& r_list, const std::vector<Point>& z_grid,
                                const QuadratureRule& base, const Thresholds& thresholds) {
  const SpaceDescriptor& space = T.space();
  params.validate();
  if (params.n != space.n) throw ValidationError("localization parameters and operator differ in dimension");
  if (z_grid.empty() || r_list.empty()) throw ValidationError("certificate needs a nonempty z grid and r list");
  if (!std::is_sorted(r_list.begin(), r_list.end())) throw ValidationError("r list must be increasing");
  if (!(thresholds.full > 0.0) || !(thresholds.tail_fraction > 0.0)) throw ValidationError("thresholds must be positive");
  require_base(base, base_measure(space), space.n);

  LocalizationCertificate c;
  c.provenance = T.provenance();
  c.space = space;
  c.params = params;
  c.degree = T.degree();
  c.a_T = space.is_bergman() ? params.a_T() : 0.0;
  c.a_Tstar = space.is_bergman() ? params.a_Tstar() : 0.0;
  c.z_grid = z_grid;
  c.thresholds = thresholds;
  c.rule = base.spec;

  std::vector<double> radii{0.0};
  radii.insert(radii.end(), r_list.begin(), r_list.end());
  const std::size_t G = z_grid.size(), K = r_list.size();
  std::vector<std::vector<double>> vt(G), vs(G);
  std::vector<double> bars(G);
  const double norm = T.norm();
  detail::parallel_for(G, [&](std::size_t i) {
    const Point& z = z_grid[i];
    require_domain(space, z);
    const CorrelationEvaluator ev(T, z), ev_adj(T, z, true);
    double rf = 0.0;
    for (double r : radii) {
      const QuadratureRule rule = centered_rule(base, z, r);
      vt[i].push_back(tail_on(ev, space, z, c.a_T, rule));
      vs[i].push_back(tail_on(ev_adj, space, z, c.a_Tstar, rule));
      if (r != 0.0) continue;
      if (space.is_bergman()) {
        rf = std::max(rudin_forelli_on(space.n, c.a_T, z, rule), rudin_forelli_on(space.n, c.a_Tstar, z, rule));
      } else {
        rf = weighted_sum(rule, [&](std::size_t j) { return std::exp(-0.5 * space.alpha * rule.local(j).norm2()); });
      }
    }
    bars[i] = norm * kernel_coefficient_tail(space, z, T.degree()) * rf;
  });

  c.error_bar = *std::max_element(bars.begin(), bars.end());
  for (TailProfile* tp : {&c.tail_T, &c.tail_Tstar, &c.tail}) {
    tp->radius = r_list;
    tp->value.assign(K, 0.0);
    tp->error_bar.assign(K, c.error_bar);
  }
  for (std::size_t i = 0; i < G; ++i) {
    c.sup_full_T = std::max(c.sup_full_T, vt[i][0]);
    c.sup_full_Tstar = std::max(c.sup_full_Tstar, vs[i][0]);
    for (std::size_t k = 0; k < K; ++k) {
      c.tail_T.value[k] = std::max(c.tail_T.value[k], vt[i][k + 1]);
      c.tail_Tstar.value[k] = std::max(c.tail_Tstar.value[k], vs[i][k + 1]);
    }
  }
  for (std::size_t k = 0; k < K; ++k) c.tail.value[k] = std::max(c.tail_T.value[k], c.tail_Tstar.value[k]);
  c.sup_full = std::max(c.sup_full_T, c.sup_full_Tstar);
  c.full_ok = c.sup_full < thresholds.full;
  const double target = thresholds.tail_fraction * c.sup_full;
  for (std::size_t k = 0; k < K; ++k) {
    if (c.tail.value[k] <= target) {
      c.tail_ok = true;
      c.pass_radius = r_list[k];
      break;
    }
  }
  c.pass = c.full_ok && c.tail_ok;
  return c;
}

LocalizationCertificate certify(const TruncatedOperator& T, const LocalizationParams& params,
                                const Thresholds& thresholds) {
  const QuadratureRule base = build_rule(default_localization_rule(T.space()));
  return certify(T, params, default_r_list(), default_z_grid(T.space()), base, thresholds);
}

}  // namespace locomp
