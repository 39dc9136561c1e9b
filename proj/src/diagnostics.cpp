#include "locomp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"
#include "locomp/kernels.hpp"
#include "parallel.hpp"

namespace locomp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double block_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

Point direction_point(int n, double r, double t) {
  if (n == 1) return Point(std::polar(r, t));
  return Point(cplx(r * std::cos(t)), std::polar(r * std::sin(t), t));
}

// Largest |z| over the grid, and the points attaining it.
std::vector<Point> outermost(const std::vector<Point>& grid) {
  double rmax = 0.0;
  for (const Point& z : grid) rmax = std::max(rmax, z.norm());
  std::vector<Point> out;
  for (const Point& z : grid) {
    if (z.norm() >= rmax * (1.0 - 1e-12)) out.push_back(z);
  }
  return out;
}

void require_shells(const SpaceDescriptor& space, const std::vector<double>& shells) {
  if (shells.empty()) throw ValidationError("shell list is empty");
  for (double s : shells) {
    if (!(s >= 0.0) || !std::isfinite(s) || (space.is_bergman() && !(s < 1.0))) {
      throw ValidationError("shell radius " + fmt(s) + " is outside the domain");
    }
  }
  if (!std::is_sorted(shells.begin(), shells.end())) throw ValidationError("shells must be increasing");
}

struct TestFunction {
  std::string name;
  std::function<cplx(const Point&)> f;
};

// Fixed battery on a region of coordinate radius rho.
std::vector<TestFunction> test_functions(double rho) {
  const double w = 0.25 * rho;
  return {
      {"one", [](const Point&) { return cplx(1.0); }},
      {"half_plane", [](const Point& z) { return cplx(z[0].real() > 0.0 ? 1.0 : 0.0); }},
      {"phase", [rho](const Point& z) { return z[0] / rho; }},
      {"bump", [rho, w](const Point& z) { return cplx(std::exp(-std::norm(z[0] - 0.5 * rho) / (w * w))); }},
      {"oscillating", [rho](const Point& z) { return std::polar(1.0, 6.0 * z[0].real() / rho); }},
  };
}

}  // namespace

double essential_norm_proxy(const TruncatedOperator& T, int m) {
  if (m < 1 || m > T.degree()) {
    throw ValidationError("essential_norm_proxy needs 0 < m <= D (m = " + std::to_string(m) +
                          ", D = " + std::to_string(T.degree()) + ")");
  }
  const MonomialBasis basis(T.space(), T.degree());
  const auto k = static_cast<Eigen::Index>(basis.prefix(m - 1));
  const Eigen::MatrixXcd& M = T.matrix();
  const Eigen::Index d = M.rows();
  // Rows are images, columns are inputs: T Q_m keeps columns >= k, Q_m T keeps rows >= k.
  return std::max(block_norm(M.rightCols(d - k)), block_norm(M.bottomRows(d - k)));
}

std::vector<Point> shell_points(const SpaceDescriptor& space, double shell, int angles) {
  if (angles < 1) throw ValidationError("shell needs at least one direction");
  if (shell == 0.0) return {direction_point(space.n, 0.0, 0.0)};
  std::vector<Point> out;
  for (int k = 0; k < angles; ++k) out.push_back(direction_point(space.n, shell, 2.0 * kPi * k / angles));
  return out;
}

std::vector<Point> disk_samples(const SpaceDescriptor& space, const Point& z, double r, const DiskSampling& disk) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("disk radius must be finite and nonnegative");
  if (disk.radial < 1 || disk.angular < 1) throw ValidationError("disk sampling needs positive counts");
  require_domain(space, z);
  const double s = space.is_bergman() ? std::tanh(r) : r;
  std::vector<Point> us{Point::origin(space.n)};
  for (int i = 1; i <= disk.radial; ++i) {
    const double rho = s * i / disk.radial;
    for (int j = 0; j < disk.angular; ++j) {
      const cplx c = std::polar(rho, 2.0 * kPi * j / disk.angular);
      us.emplace_back(space.n == 1 ? Point(c) : Point(c, cplx(0.0)));
      if (space.n == 2) us.emplace_back(cplx(0.0), c);
    }
  }
  std::vector<Point> out;
  out.reserve(us.size());
  for (const Point& u : us) {
    out.push_back(space.is_bergman() ? mobius_map(z, u) : z + u);
  }
  return out;
}

BoundedValue disk_correlation_sup(const TruncatedOperator& T, double r, const std::vector<Point>& shell_grid,
                                  const DiskSampling& disk, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("p must lie in (1, inf)");
  if (shell_grid.empty()) throw ValidationError("shell grid is empty");
  const SpaceDescriptor& space = T.space();
  const double norm = T.norm();
  const double e = space.is_bergman() ? 1.0 - 2.0 / p : 0.0;
  std::vector<BoundedValue> per(shell_grid.size());
  detail::parallel_for(shell_grid.size(), [&](std::size_t i) {
    const Point& z = shell_grid[i];
    const CorrelationEvaluator ev(T, z);
    const double tz = kernel_coefficient_tail(space, z, T.degree());
    const double lz = log_kernel_norm(space, z);
    BoundedValue b;
    for (const Point& w : disk_samples(space, z, r, disk)) {
      // <T k_z^(p), k_w^(p')> = <T k_z, k_w> (||K_w|| / ||K_z||)^{1 - 2/p}.
      const double scale = e == 0.0 ? 1.0 : std::exp(e * (log_kernel_norm(space, w) - lz));
      const double v = ev.modulus(w) * scale;
      const double bar = norm * (tz + kernel_coefficient_tail(space, w, T.degree())) * scale;
      if (!std::isfinite(v) || !std::isfinite(bar)) throw NumericalError("non-finite correlation at " + w.to_string());
      b.value = std::max(b.value, v);
      b.error_bar = std::max(b.error_bar, bar);
    }
    per[i] = b;
  });
  BoundedValue out;
  for (const BoundedValue& b : per) {
    out.value = std::max(out.value, b.value);
    out.error_bar = std::max(out.error_bar, b.error_bar);
  }
  return out;
}

BoundedValue theorem_rhs(const TruncatedOperator& T, double r, const std::vector<Point>& shell_grid,
                         const DiskSampling& disk, double p) {
  if (shell_grid.empty()) throw ValidationError("shell grid is empty");
  return disk_correlation_sup(T, r, outermost(shell_grid), disk, p);
}

Profile berezin_boundary_profile(const TruncatedOperator& T, const std::vector<double>& shells, int angles,
                                 double tau_B) {
  require_shells(T.space(), shells);
  if (!(tau_B > 0.0)) throw ValidationError("tau_B must be positive");
  Profile out(shells.size());
  detail::parallel_for(shells.size(), [&](std::size_t k) {
    ProfileEntry& e = out[k];
    e.at = shells[k];
    for (const Point& z : shell_points(T.space(), shells[k], angles)) {
      const Correlation c = berezin(T, z);
      e.value = std::max(e.value, std::abs(c.value));
      e.error_bar = std::max(e.error_bar, c.error_bar);
    }
    e.refused = e.error_bar > 0.1 * std::max(e.value, tau_B);
  });
  return out;
}

DecompositionRules default_decomposition_rules(const SpaceDescriptor& space) {
  DecompositionRules r;
  r.tail_rule = default_localization_rule(space);
  r.z_grid = default_z_grid(space);
  return r;
}

DecompositionError decomposition_error(const TruncatedOperator& T, const Covering& covering,
                                       const LocalizationParams& params, const DecompositionRules& rules) {
  const SpaceDescriptor& space = T.space();
  params.validate();
  if (params.n != space.n || covering.n != space.n) throw ValidationError("covering dimension does not match the operator");
  const Metric want = space.is_bergman() ? Metric::bergman : Metric::euclidean;
  if (covering.metric != want) throw ValidationError("covering metric does not match the space");
  if (covering.cells.empty()) throw ValidationError("covering has no cells");
  if (rules.z_grid.empty()) throw ValidationError("decomposition needs a nonempty z grid");
  if (rules.test_radial < 2 || rules.test_angular < 1) throw ValidationError("test rule sizes must be positive");

  DecompositionError out;
  out.radius = covering.r;
  const double r = covering.r;
  const double p = space.is_bergman() ? params.p : 2.0;
  const double q = p / (p - 1.0);
  const double aT = space.is_bergman() ? params.a_T() : 0.0;
  const double aS = space.is_bergman() ? params.a_Tstar() : 0.0;
  const QuadratureRule base = build_rule(rules.tail_rule);

  // Schur constants from the tails of T (columns) and T^* (rows).
  const std::size_t G = rules.z_grid.size();
  std::vector<double> tT(G), tS(G), bars(G);
  const double norm = T.norm();
  detail::parallel_for(G, [&](std::size_t i) {
    const Point& z = rules.z_grid[i];
    tT[i] = localization_tails(T, z, {r}, aT, base, false)[0];
    tS[i] = localization_tails(T, z, {r}, aS, base, true)[0];
    const double rf = space.is_bergman() ? std::max(rudin_forelli_integral(space.n, aT, z, 0.0, base),
                                                    rudin_forelli_integral(space.n, aS, z, 0.0, base))
                                         : fock_rudin_forelli_integral(space, z, 0.0, base);
    bars[i] = norm * kernel_coefficient_tail(space, z, T.degree()) * rf;
  });
  out.c1 = *std::max_element(tS.begin(), tS.end());
  out.c2 = *std::max_element(tT.begin(), tT.end());
  out.bound = std::pow(out.c1, 1.0 / q) * std::pow(out.c2, 1.0 / p);
  out.error_bar = *std::max_element(bars.begin(), bars.end());

  // Test functions on the covered region.
  const double rho = space.is_bergman() ? std::tanh(covering.region_radius) : covering.region_radius;
  const QuadratureRule rule =
      space.is_bergman()
          ? build_ball_rule(space.n, rules.test_radial, rules.test_angular, rho, Measure::ball_lebesgue)
          : build_plane_rule(space.n, space.alpha, rho, rules.test_radial, rules.test_angular, Measure::plane_lebesgue);
  const std::size_t N = rule.size();
  std::vector<int> cell(N);
  for (std::size_t i = 0; i < N; ++i) {
    int j = covering.locate(rule.nodes[i]);
    if (j < 0) {
      // Nodes on the rim of the region may fall outside every cell by rounding.
      double best = INFINITY;
      for (std::size_t c = 0; c < covering.cells.size(); ++c) {
        const double d = covering.cells[c].distance(rule.nodes[i]);
        if (d < best) best = d, j = static_cast<int>(c);
      }
    }
    cell[i] = j;
  }
  std::vector<int> used(cell.begin(), cell.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<int, std::size_t> slot;
  for (std::size_t s = 0; s < used.size(); ++s) slot[used[s]] = s;
  std::vector<std::vector<char>> outside(used.size(), std::vector<char>(N));
  detail::parallel_for(used.size(), [&](std::size_t s) {
    for (std::size_t k = 0; k < N; ++k) {
      outside[s][k] = !covering.in_enlargement(static_cast<std::size_t>(used[s]), rule.nodes[k]);
    }
  });

  const std::vector<TestFunction> tests = test_functions(rho);
  const std::size_t F = tests.size();
  std::vector<cplx> fv(F * N);
  for (std::size_t t = 0; t < F; ++t) {
    for (std::size_t k = 0; k < N; ++k) fv[t * N + k] = tests[t].f(rule.nodes[k]);
  }
  std::vector<double> lk(N);
  for (std::size_t k = 0; k < N; ++k) lk[k] = log_kernel_norm(space, rule.nodes[k]);
  const double fock_scale = std::pow(space.alpha / kPi, space.n);
  std::vector<cplx> Sf(F * N);
  detail::parallel_for(N, [&](std::size_t i) {
    const Point& z = rule.nodes[i];
    const CorrelationEvaluator ev(T, z, true);
    const std::vector<char>& mask = outside[slot.at(cell[i])];
    std::vector<cplx> acc(F, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
      if (!mask[k]) continue;
      // Kernel of TP on L^2(dv): <T K_w, K_z> (Bergman), (alpha/pi)^n <T k_w, k_z> (Fock).
      cplx kv = std::conj(ev(rule.nodes[k]));
      kv *= space.is_bergman() ? std::exp(lk[i] + lk[k]) : fock_scale;
      const cplx wk = rule.weights[k] * kv;
      for (std::size_t t = 0; t < F; ++t) acc[t] += wk * fv[t * N + k];
    }
    for (std::size_t t = 0; t < F; ++t) Sf[t * N + i] = acc[t];
  });
  for (std::size_t t = 0; t < F; ++t) {
    std::vector<double> num(N), den(N);
    for (std::size_t k = 0; k < N; ++k) {
      num[k] = rule.weights[k] * std::pow(std::abs(Sf[t * N + k]), p);
      den[k] = rule.weights[k] * std::pow(std::abs(fv[t * N + k]), p);
    }
    const double a = pairwise_sum(std::span<const double>(num)), b = pairwise_sum(std::span<const double>(den));
    if (!std::isfinite(a) || !(b > 0.0)) throw NumericalError("test function norms are not finite");
    out.test_names.push_back(tests[t].name);
    out.test_ratio.push_back(std::pow(a / b, 1.0 / p));
  }
  out.max_test_ratio = *std::max_element(out.test_ratio.begin(), out.test_ratio.end());
  return out;
}

EquivalenceReport equivalence_probe(const TruncatedOperator& T, const std::vector<double>& r_list, double fixed_r,
                                    const std::vector<double>& shells, const DiskSampling& disk, int angles) {
  require_shells(T.space(), shells);
  if (r_list.empty()) throw ValidationError("equivalence probe needs a nonempty r list");
  EquivalenceReport rep;
  rep.r_list = r_list;
  rep.fixed_r = fixed_r;
  rep.c = berezin_boundary_profile(T, shells, angles);
  const double p = T.space().p;
  for (double s : shells) {
    const std::vector<Point> grid = shell_points(T.space(), s, angles);
    ProfileEntry a{s, 0.0, 0.0, false};
    for (double r : r_list) {
      const BoundedValue v = disk_correlation_sup(T, r, grid, disk, p);
      a.value = std::max(a.value, v.value);
      a.error_bar = std::max(a.error_bar, v.error_bar);
    }
    const BoundedValue b = disk_correlation_sup(T, fixed_r, grid, disk, p);
    rep.a.push_back(a);
    rep.b.push_back({s, b.value, b.error_bar, false});
  }
  return rep;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::compact_consistent:
      return "compact-consistent";
    case Verdict::non_compact_consistent:
      return "non-compact-consistent";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

Verdict decide_verdict(bool certificate_pass, double berezin_sup, double proxy, const VerdictThresholds& t) {
  if (certificate_pass && berezin_sup < t.tau_B && proxy < t.tau_e) return Verdict::compact_consistent;
  if (proxy > t.tau_nc) return Verdict::non_compact_consistent;
  return Verdict::inconclusive;
}

CompactnessConfig CompactnessConfig::defaults(const SpaceDescriptor& space) {
  space.validate();
  CompactnessConfig c;
  c.shells = space.is_bergman() ? std::vector<double>{0.0, 0.3, 0.6, 0.8, 0.9, 0.95, 0.98}
                                : std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0};
  c.params = LocalizationParams::for_space(space);
  c.r_list = default_r_list();
  c.covering_region = space.is_bergman() ? 2.0 : 5.0;
  c.covering_radius = space.is_bergman() ? 1.0 : 2.0;
  return c;
}

void CompactnessConfig::validate(const SpaceDescriptor& space) const {
  space.validate();
  require_shells(space, shells);
  params.validate();
  if (params.n != space.n) throw ValidationError("localization parameters and space differ in dimension");
  if (angles < 1) throw ValidationError("angles must be positive");
  if (block_degree < 1) throw ValidationError("block_degree must be positive");
  if (proxy_m < 1 || proxy_m > block_degree) throw ValidationError("proxy_m must lie in [1, block_degree]");
  if (!(theorem_r > 0.0) || !std::isfinite(theorem_r)) throw ValidationError("theorem_r must be positive");
  if (disk.radial < 1 || disk.angular < 1) throw ValidationError("disk sampling needs positive counts");
  if (r_list.empty() || !std::is_sorted(r_list.begin(), r_list.end())) {
    throw ValidationError("r_list must be nonempty and increasing");
  }
  if (!(localization.full > 0.0) || !(localization.tail_fraction > 0.0)) {
    throw ValidationError("localization thresholds must be positive");
  }
  if (!(covering_radius > 0.0) || !(covering_region > 0.0)) throw ValidationError("covering radii must be positive");
  if (!(verdict.tau_B > 0.0) || !(verdict.tau_e > 0.0) || !(verdict.tau_nc > 0.0)) {
    throw ValidationError("verdict thresholds must be positive");
  }
}

CompactnessReport compactness_report(const TruncatedOperator& T, const CompactnessConfig& config) {
  const SpaceDescriptor& space = T.space();
  config.validate(space);
  if (T.degree() < config.block_degree) {
    throw ValidationError("operator degree " + std::to_string(T.degree()) + " is below block_degree " +
                          std::to_string(config.block_degree));
  }
  CompactnessReport rep;
  rep.provenance = T.provenance();
  rep.space = space;
  rep.degree = T.degree();
  rep.thresholds = config.verdict;

  rep.berezin_profile = berezin_boundary_profile(T, config.shells, config.angles, config.verdict.tau_B);
  for (const ProfileEntry& e : rep.berezin_profile) {
    if (e.refused) {
      throw NumericalError("shell " + fmt(e.at) + " refused: truncation bar " + fmt(e.error_bar) +
                            " exceeds 10% of the measured value " + fmt(e.value) + "; raise the degree");
    }
  }
  rep.berezin_boundary_sup = rep.berezin_profile.back().value;
  rep.berezin_error_bar = rep.berezin_profile.back().error_bar;

  const TruncatedOperator block = T.degree() == config.block_degree ? T : leading_block(T, config.block_degree);
  const QuadratureRule base = build_rule(default_localization_rule(space));
  rep.certificate = certify(block, config.params, config.r_list, default_z_grid(space), base, config.localization);
  rep.essnorm_proxy = essential_norm_proxy(block, config.proxy_m);

  const BoundedValue rhs =
      theorem_rhs(T, config.theorem_r, shell_points(space, config.shells.back(), config.angles), config.disk, space.p);
  rep.theorem_rhs = rhs.value;
  rep.theorem_rhs_error_bar = rhs.error_bar;
  rep.rhs_ratio = rhs.value > 0.0 ? rep.essnorm_proxy / rhs.value : 0.0;

  if (!space.is_bergman() || space.n == 1) {
    const Covering cov = build_covering(space, config.covering_radius, config.covering_region);
    rep.decomposition = decomposition_error(block, cov, config.params, default_decomposition_rules(space));
    rep.decomposition_error_bound = rep.decomposition.bound;
    rep.has_decomposition = true;
  }
  rep.verdict = decide_verdict(rep.certificate.pass, rep.berezin_boundary_sup, rep.essnorm_proxy, config.verdict);
  return rep;
}

}  // namespace locomp
