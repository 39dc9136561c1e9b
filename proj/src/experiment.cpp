#include "locomp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "locomp/battery.hpp"
#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"
#include "locomp/kernels.hpp"

namespace locomp {

namespace {

using Keys = std::vector<std::string>;

void check_keys(const Json& obj, const Keys& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + where);
    }
  }
}

double get_number(const Json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const Json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::vector<double> get_list(const Json& obj, const char* key, std::vector<double> fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(where + "." + key + " must be a list of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw ValidationError(where + "." + key + " must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Json object_or_empty(const Json& j, const char* key) { return j.contains(key) ? j.at(key) : Json::object(); }

void require_increasing(const std::vector<double>& v, const std::string& name, bool allow_empty = false) {
  if (v.empty() && !allow_empty) throw ValidationError(name + " must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0) throw ValidationError(name + " entries must be finite and nonnegative");
    if (i && !(v[i] > v[i - 1])) throw ValidationError(name + " must be strictly increasing");
  }
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Metadata shared by every artifact.
struct Meta {
  std::string subcommand;
  std::string hash;
  Json resolution;

  Json json() const {
    return Json{{"tool", "locomp"}, {"subcommand", subcommand}, {"config_hash", hash}, {"resolution", resolution}};
  }
  std::string csv_comment() const { return "locomp " + subcommand + " config_hash=" + hash; }
};

void write_report(const std::filesystem::path& out, const Meta& meta, Json result) {
  write_json(out / "report.json", Json{{"meta", meta.json()}, {"result", std::move(result)}});
}

void write_csv(const std::filesystem::path& out, const std::string& name, const CsvTable& t, const Meta& meta) {
  write_text(out / name, t.render(meta.csv_comment()));
}

TruncatedOperator build_operator(const ExperimentConfig& c) {
  return toeplitz(c.space, c.symbol.build(), c.degree, c.toeplitz_rule());
}

TruncatedOperator certificate_block(const ExperimentConfig& c, const TruncatedOperator& T) {
  return T.degree() == c.block_degree ? T : leading_block(T, c.block_degree);
}

// ---- kernel-identities ----------------------------------------------------

struct IdentityCheck {
  std::string name;
  int samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return max_error <= tolerance; }
};

Point random_point(std::mt19937_64& rng, const SpaceDescriptor& s) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<cplx, kMaxDim> c{};
  double norm2 = 0.0;
  for (int i = 0; i < s.n; ++i) {
    c[static_cast<std::size_t>(i)] = cplx(g(rng), g(rng));
    norm2 += std::norm(c[static_cast<std::size_t>(i)]);
  }
  const double radius = s.is_bergman() ? 0.95 * std::pow(u(rng), 1.0 / (2 * s.n)) : 3.0 * u(rng) / std::sqrt(s.alpha);
  for (int i = 0; i < s.n; ++i) c[static_cast<std::size_t>(i)] *= radius / std::sqrt(norm2);
  return Point::from_coords({c.data(), static_cast<std::size_t>(s.n)});
}

std::vector<IdentityCheck> identity_suite(const ExperimentConfig& c) {
  const SpaceDescriptor& s = c.space;
  std::mt19937_64 rng(c.seed);
  std::vector<IdentityCheck> out;
  const int N = c.identity_pairs;

  IdentityCheck norm{"kernel_norm_squared_is_diagonal", N, 0.0, 1e-12};
  IdentityCheck corr{s.is_bergman() ? "kernel_mobius" : "fock_correlation_gaussian", N, 0.0, 1e-10};
  IdentityCheck invol{"mobius_involution", N, 0.0, 1e-12};
  for (int i = 0; i < N; ++i) {
    const Point z = random_point(rng, s), w = random_point(rng, s);
    const double kz = kernel_norm(s, z);
    norm.max_error = std::max(norm.max_error, std::abs(kz * kz - kernel_eval(s, z, z).real()) / (kz * kz));
    const double m = std::abs(correlation_closed_form(s, z, w));
    if (s.is_bergman()) {
      // |<k_z, k_w>| ||K_{phi_z(w)}|| = 1.
      corr.max_error = std::max(corr.max_error, std::abs(m * kernel_norm(s, mobius_map(z, w)) - 1.0));
      invol.max_error = std::max(invol.max_error, distance(mobius_map(z, mobius_map(z, w)), w));
    } else {
      corr.max_error = std::max(corr.max_error, std::abs(m - std::exp(-0.5 * s.alpha * distance(z, w) * distance(z, w))));
    }
  }
  out.push_back(norm);
  out.push_back(corr);
  if (s.is_bergman()) out.push_back(invol);

  // Reproducing property for monomials of degree <= 10 at 20 interior points.
  const QuadratureRule rule = s.is_bergman()
                                  ? build_ball_rule(s.n, 200, s.n == 1 ? 256 : 48, 1.0)
                                  : build_plane_rule(s.n, s.alpha, 12.0 / std::sqrt(s.alpha), 200, s.n == 1 ? 128 : 48);
  IdentityCheck rep{"reproducing_monomials", 0, 0.0, 1e-6};
  std::vector<Point> pts;
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const double rmax = s.is_bergman() ? (s.n == 1 ? 0.8 : 0.6) : 2.0 / std::sqrt(s.alpha);
  for (int i = 0; i < 20; ++i) {
    const double r = rmax * (i + 1) / 20.0, t = ang(rng);
    pts.push_back(s.n == 1 ? Point(std::polar(r, t)) : Point(cplx(r * std::cos(t)), std::polar(r * std::sin(t), 2.0 * t)));
  }
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= (s.n == 2 ? 10 - a : 0); ++b) {
      auto mono = [a, b, &s](const Point& w) {
        cplx v = std::pow(w[0], a);
        if (s.n == 2) v *= std::pow(w[1], b);
        return v;
      };
      for (const Point& z : pts) {
        const cplx got = integrate([&](const Point& w) { return mono(w) * std::conj(kernel_eval(s, z, w)); }, rule);
        rep.max_error = std::max(rep.max_error, std::abs(got - mono(z)));
        ++rep.samples;
      }
    }
  }
  out.push_back(rep);
  return out;
}

// ---- subcommands -------------------------------------------------------------

void run_identities(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const std::vector<IdentityCheck> checks = identity_suite(c);
  CsvTable t({"check", "samples", "max_error", "tolerance", "pass"});
  Json res = Json::array();
  for (const IdentityCheck& k : checks) {
    t.add({k.name, std::to_string(k.samples), format_double(k.max_error), format_double(k.tolerance), k.pass() ? "1" : "0"});
    res.push_back({{"check", k.name}, {"samples", k.samples}, {"max_error", k.max_error}, {"tolerance", k.tolerance},
                   {"pass", k.pass()}});
  }
  write_csv(out, "identities.csv", t, meta);
  write_report(out, meta, Json{{"checks", res}});
}

void run_rudin_forelli(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const std::vector<Point> grid = c.z_grid();
  const RuleSpec spec = c.localization_rule();
  Json res = Json::object();
  if (c.space.is_bergman()) {
    CsvTable values({"a", "abs_z", "angle", "value", "error_bar"});
    CsvTable tails({"a", "shell_or_r", "value", "error_bar"});
    const QuadratureRule base = build_rule(spec), fine = build_rule(spec.refined());
    Json checks = Json::array();
    for (double a : c.rf_a) {
      const RudinForelliCheck chk = rudin_forelli_check(c.space.n, a, grid, spec);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        values.add_numbers({a, grid[i].norm(), std::arg(grid[i][0]), chk.values[i],
                            std::abs(chk.refined_values[i] - chk.values[i])});
      }
      Json cj = to_json(chk);
      if (a > LocalizationParams::a_min(c.space.n) && a < 1.0) {
        const TailProfile tp = rudin_forelli_tail(c.space.n, a, c.rf_R, grid, base);
        const TailProfile tf = rudin_forelli_tail(c.space.n, a, c.rf_R, grid, fine);
        for (std::size_t k = 0; k < tp.radius.size(); ++k) {
          tails.add_numbers({a, tp.radius[k], tp.value[k], std::abs(tf.value[k] - tp.value[k])});
        }
        cj["tail"] = to_json(tp);
      }
      checks.push_back(cj);
    }
    write_csv(out, "rudin_forelli.csv", values, meta);
    write_csv(out, "rudin_forelli_tail.csv", tails, meta);
    res["checks"] = checks;
  } else {
    const QuadratureRule base = build_rule(spec), fine = build_rule(spec.refined());
    const TailProfile tp = fock_rudin_forelli_tail(c.space, c.rf_R, grid, base);
    const TailProfile tf = fock_rudin_forelli_tail(c.space, c.rf_R, grid, fine);
    CsvTable tails({"shell_or_r", "value", "error_bar", "closed_form"});
    Json rows = Json::array();
    for (std::size_t k = 0; k < tp.radius.size(); ++k) {
      // int_{|u| > R} e^{-alpha |u|^2 / 2} dv(u) = (2 pi / alpha)^n e^{-x} sum_{j<n} x^j / j!,  x = alpha R^2 / 2.
      const double x = 0.5 * c.space.alpha * tp.radius[k] * tp.radius[k];
      const double closed = std::pow(2.0 * std::numbers::pi / c.space.alpha, c.space.n) * std::exp(-x) *
                            (c.space.n == 1 ? 1.0 : 1.0 + x);
      const double bar = std::abs(tf.value[k] - tp.value[k]);
      tails.add_numbers({tp.radius[k], tp.value[k], bar, closed});
      rows.push_back({{"shell_or_r", tp.radius[k]}, {"value", tp.value[k]}, {"error_bar", bar}, {"closed_form", closed}});
    }
    write_csv(out, "rudin_forelli_tail.csv", tails, meta);
    res["tail"] = rows;
  }
  write_report(out, meta, res);
}

void run_toeplitz(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const TruncatedOperator T = build_operator(c);
  CsvTable t({"row", "col", "re", "im"});
  const Eigen::MatrixXcd& M = T.matrix();
  for (Eigen::Index k = 0; k < M.rows(); ++k) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const cplx v = M(k, j);
      if (v == cplx(0.0)) continue;
      t.add({std::to_string(k), std::to_string(j), format_double(v.real()), format_double(v.imag())});
    }
  }
  write_csv(out, "toeplitz.csv", t, meta);
  write_report(out, meta,
               Json{{"provenance", T.provenance()}, {"dim", T.dim()}, {"degree", T.degree()}, {"norm", T.norm()},
                    {"nonzero_entries", t.rows()}});
}

void run_berezin_map(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const TruncatedOperator T = build_operator(c);
  CsvTable t({"abs_z", "angle", "x", "y", "value", "imag", "error_bar"});
  double max_bar = 0.0;
  for (double s : c.shells) {
    for (const Point& z : shell_points(c.space, s, c.angles)) {
      const Correlation b = berezin(T, z);
      t.add_numbers({z.norm(), std::arg(z[0]), z[0].real(), z[0].imag(), b.value.real(), b.value.imag(), b.error_bar});
      max_bar = std::max(max_bar, b.error_bar);
    }
  }
  const Profile prof = berezin_boundary_profile(T, c.shells, c.angles, c.verdict.tau_B);
  write_csv(out, "berezin_map.csv", t, meta);
  write_csv(out, "berezin_profile.csv", profile_table(prof), meta);
  write_report(out, meta, Json{{"provenance", T.provenance()}, {"points", t.rows()}, {"max_error_bar", max_bar},
                               {"profile", to_json(prof)}});
}

void run_localize(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const TruncatedOperator T = build_operator(c);
  const LocalizationParams params = LocalizationParams::for_space(c.space, c.delta);
  const LocalizationCertificate cert =
      certify(certificate_block(c, T), params, c.r_list, c.z_grid(), build_rule(c.localization_rule()), c.localization);
  write_csv(out, "localization_tail.csv", profile_table(cert.tail), meta);
  write_report(out, meta, to_json(cert));
}

void run_covering(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  CsvTable t({"r", "cells", "overlap_bound", "max_overlap", "max_diameter", "gaps_found", "overlaps_found", "ok"});
  Json rows = Json::array();
  for (double r : c.covering_radii) {
    const Covering cov = build_covering(c.space, r, c.covering_region);
    const CoveringReport rep = verify_covering(cov, c.covering_samples, c.seed);
    t.add({format_double(r), std::to_string(cov.cells.size()), std::to_string(cov.overlap_bound),
           std::to_string(rep.max_overlap), format_double(rep.max_diameter), rep.gaps_found ? "1" : "0",
           rep.overlaps_found ? "1" : "0", rep.ok(cov) ? "1" : "0"});
    Json j = to_json(rep);
    j["r"] = r;
    j["cells"] = cov.cells.size();
    j["overlap_bound"] = cov.overlap_bound;
    j["metric"] = to_string(cov.metric);
    j["ok"] = rep.ok(cov);
    rows.push_back(j);
  }
  write_csv(out, "covering.csv", t, meta);
  write_report(out, meta, Json{{"region_radius", c.covering_region}, {"coverings", rows}});
}

void run_compactness(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const TruncatedOperator T = build_operator(c);
  const CompactnessReport rep = compactness_report(T, c.compactness());
  write_csv(out, "berezin_profile.csv", profile_table(rep.berezin_profile), meta);
  write_csv(out, "localization_tail.csv", profile_table(rep.certificate.tail), meta);
  write_report(out, meta, to_json(rep));
}

void run_spectrum(const ExperimentConfig& c, const std::filesystem::path& out, const Meta& meta) {
  const TruncatedOperator T = build_operator(c);
  const Eigen::VectorXd s = singular_values(T);
  CsvTable t({"index", "value"});
  for (Eigen::Index i = 0; i < s.size(); ++i) t.add({std::to_string(i), format_double(s(i))});
  write_csv(out, "spectrum.csv", t, meta);
  const TruncatedOperator block = certificate_block(c, T);
  write_report(out, meta,
               Json{{"provenance", T.provenance()}, {"dim", T.dim()}, {"norm", s.size() ? s(0) : 0.0},
                    {"essnorm_proxy", essential_norm_proxy(block, c.proxy_m)}, {"block_degree", c.block_degree},
                    {"proxy_m", c.proxy_m}});
}

}  // namespace

Symbol SymbolSpec::build() const {
  if (!expression.empty()) return expression_symbol(expression, bound);
  return builtin_symbol(builtin, params);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentConfig ExperimentConfig::defaults(const SpaceDescriptor& space) {
  space.validate();
  ExperimentConfig c;
  c.space = space;
  const RuleSpec rule = default_localization_rule(space);
  c.localization_radial = rule.radial_nodes;
  c.localization_angular = rule.angular_nodes;
  c.r_list = default_r_list();
  c.rf_a = {0.5};
  c.rf_R = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  if (space.is_bergman()) {
    c.degree = 400;
    c.shells = {0.0, 0.3, 0.6, 0.8, 0.9, 0.95, 0.98};
    c.z_radii = {0.0, 0.3, 0.6, 0.8, 0.9, 0.95};
    c.covering_radii = {0.5, 1.0, 2.0};
    c.covering_radius = 1.0;
    c.covering_region = 2.0;
  } else {
    c.degree = 60;
    c.shells = {0.0, 1.0, 2.0, 3.0, 4.0};
    c.z_radii = {0.0, 1.0, 2.0, 3.0, 4.0};
    c.covering_radii = {1.0, 2.0, 3.0};
    c.covering_radius = 2.0;
    c.covering_region = 5.0;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  try {
    check_keys(j, {"space", "symbol", "degree", "quadrature", "grids", "localization", "diagnostics", "thresholds",
                   "rudin_forelli", "covering", "identities", "output", "seed"},
               "config");
    const Json sp = object_or_empty(j, "space");
    check_keys(sp, {"family", "n", "p", "alpha"}, "space");
    SpaceDescriptor space;
    if (sp.contains("family")) {
      if (!sp.at("family").is_string()) throw ValidationError("space.family must be a string");
      space.family = family_from_string(sp.at("family").get<std::string>());
    }
    space.n = get_int(sp, "n", 1, "space");
    space.p = get_number(sp, "p", 2.0, "space");
    space.alpha = get_number(sp, "alpha", 1.0, "space");
    if (space.is_bergman() && sp.contains("alpha")) throw ValidationError("space.alpha applies to the Fock family only");
    ExperimentConfig c = defaults(space);

    const Json sy = object_or_empty(j, "symbol");
    check_keys(sy, {"builtin", "params", "expression", "bound"}, "symbol");
    if (sy.contains("builtin") && sy.contains("expression")) {
      throw ValidationError("symbol takes either 'builtin' or 'expression', not both");
    }
    if (sy.contains("builtin")) {
      if (!sy.at("builtin").is_string()) throw ValidationError("symbol.builtin must be a string");
      c.symbol.builtin = sy.at("builtin").get<std::string>();
    }
    if (sy.contains("params")) {
      const Json& p = sy.at("params");
      if (!p.is_object()) throw ValidationError("symbol.params must be an object");
      for (const auto& [key, value] : p.items()) {
        if (!value.is_number()) throw ValidationError("symbol.params." + key + " must be a number");
        c.symbol.params[key] = value.get<double>();
      }
    }
    if (sy.contains("expression")) {
      if (!sy.at("expression").is_string()) throw ValidationError("symbol.expression must be a string");
      c.symbol.expression = sy.at("expression").get<std::string>();
      if (c.symbol.expression.empty()) throw ValidationError("symbol.expression must not be empty");
      if (!sy.contains("bound")) throw ValidationError("expression symbols need a declared 'bound'");
    }
    c.symbol.bound = get_number(sy, "bound", 1.0, "symbol");
    if (sy.contains("bound") && c.symbol.expression.empty()) {
      throw ValidationError("symbol.bound applies to expression symbols only (built-ins take params.bound)");
    }

    c.degree = get_int(j, "degree", c.degree, "config");

    const Json q = object_or_empty(j, "quadrature");
    check_keys(q, {"toeplitz_radial", "toeplitz_angular", "localization_radial", "localization_angular"}, "quadrature");
    c.toeplitz_radial = get_int(q, "toeplitz_radial", c.toeplitz_radial, "quadrature");
    c.toeplitz_angular = get_int(q, "toeplitz_angular", c.toeplitz_angular, "quadrature");
    c.localization_radial = get_int(q, "localization_radial", c.localization_radial, "quadrature");
    c.localization_angular = get_int(q, "localization_angular", c.localization_angular, "quadrature");

    const Json g = object_or_empty(j, "grids");
    check_keys(g, {"shells", "r_list", "z_radii", "angles"}, "grids");
    c.shells = get_list(g, "shells", c.shells, "grids");
    c.r_list = get_list(g, "r_list", c.r_list, "grids");
    c.z_radii = get_list(g, "z_radii", c.z_radii, "grids");
    c.angles = get_int(g, "angles", c.angles, "grids");

    const Json l = object_or_empty(j, "localization");
    check_keys(l, {"delta", "full", "tail_fraction"}, "localization");
    c.delta = get_number(l, "delta", c.delta, "localization");
    c.localization.full = get_number(l, "full", c.localization.full, "localization");
    c.localization.tail_fraction = get_number(l, "tail_fraction", c.localization.tail_fraction, "localization");

    const Json d = object_or_empty(j, "diagnostics");
    check_keys(d, {"block_degree", "proxy_m", "theorem_r", "disk_radial", "disk_angular", "covering_radius",
                   "covering_region"},
               "diagnostics");
    c.block_degree = get_int(d, "block_degree", c.block_degree, "diagnostics");
    c.proxy_m = get_int(d, "proxy_m", c.proxy_m, "diagnostics");
    c.theorem_r = get_number(d, "theorem_r", c.theorem_r, "diagnostics");
    c.disk.radial = get_int(d, "disk_radial", c.disk.radial, "diagnostics");
    c.disk.angular = get_int(d, "disk_angular", c.disk.angular, "diagnostics");
    c.covering_radius = get_number(d, "covering_radius", c.covering_radius, "diagnostics");
    c.covering_region = get_number(d, "covering_region", c.covering_region, "diagnostics");

    const Json t = object_or_empty(j, "thresholds");
    check_keys(t, {"tau_B", "tau_e", "tau_nc"}, "thresholds");
    c.verdict.tau_B = get_number(t, "tau_B", c.verdict.tau_B, "thresholds");
    c.verdict.tau_e = get_number(t, "tau_e", c.verdict.tau_e, "thresholds");
    c.verdict.tau_nc = get_number(t, "tau_nc", c.verdict.tau_nc, "thresholds");

    const Json rf = object_or_empty(j, "rudin_forelli");
    check_keys(rf, {"a", "R_list"}, "rudin_forelli");
    c.rf_a = get_list(rf, "a", c.rf_a, "rudin_forelli");
    c.rf_R = get_list(rf, "R_list", c.rf_R, "rudin_forelli");

    const Json cv = object_or_empty(j, "covering");
    check_keys(cv, {"radii", "samples"}, "covering");
    c.covering_radii = get_list(cv, "radii", c.covering_radii, "covering");
    c.covering_samples = get_int(cv, "samples", c.covering_samples, "covering");

    const Json id = object_or_empty(j, "identities");
    check_keys(id, {"pairs"}, "identities");
    c.identity_pairs = get_int(id, "pairs", c.identity_pairs, "identities");

    if (j.contains("output")) {
      if (!j.at("output").is_string()) throw ValidationError("output must be a string");
      c.output = j.at("output").get<std::string>();
    }
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ValidationError("seed must be a nonnegative integer");
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

Json ExperimentConfig::to_json() const {
  Json sym = Json::object();
  if (symbol.expression.empty()) {
    sym["builtin"] = symbol.builtin;
    Json p = Json::object();
    for (const auto& [k, v] : symbol.params) p[k] = v;
    sym["params"] = p;
  } else {
    sym["expression"] = symbol.expression;
    sym["bound"] = symbol.bound;
  }
  return Json{
      {"space", locomp::to_json(space)},
      {"symbol", sym},
      {"degree", degree},
      {"quadrature",
       {{"toeplitz_radial", toeplitz_radial},
        {"toeplitz_angular", toeplitz_angular},
        {"localization_radial", localization_radial},
        {"localization_angular", localization_angular}}},
      {"grids", {{"shells", shells}, {"r_list", r_list}, {"z_radii", z_radii}, {"angles", angles}}},
      {"localization", {{"delta", delta}, {"full", localization.full}, {"tail_fraction", localization.tail_fraction}}},
      {"diagnostics",
       {{"block_degree", block_degree},
        {"proxy_m", proxy_m},
        {"theorem_r", theorem_r},
        {"disk_radial", disk.radial},
        {"disk_angular", disk.angular},
        {"covering_radius", covering_radius},
        {"covering_region", covering_region}}},
      {"thresholds", {{"tau_B", verdict.tau_B}, {"tau_e", verdict.tau_e}, {"tau_nc", verdict.tau_nc}}},
      {"rudin_forelli", {{"a", rf_a}, {"R_list", rf_R}}},
      {"covering", {{"radii", covering_radii}, {"samples", covering_samples}}},
      {"identities", {{"pairs", identity_pairs}}},
      {"output", output},
      {"seed", seed},
  };
}

void ExperimentConfig::validate() const {
  space.validate();
  (void)symbol.build();
  if (degree < 1 || degree > 2000) throw ValidationError("degree must lie in [1, 2000]");
  if (space.n == 2 && degree > 80) throw ValidationError("degree must be at most 80 for n = 2");
  if (toeplitz_radial < 0 || toeplitz_angular < 0) throw ValidationError("Toeplitz rule sizes must be nonnegative");
  if (localization_radial < 4 || localization_angular < 4) throw ValidationError("localization rule sizes must be >= 4");
  require_increasing(shells, "grids.shells");
  for (double s : shells) {
    if (space.is_bergman() && !(s < 1.0)) throw ValidationError("grids.shells must lie inside the ball");
  }
  require_increasing(r_list, "grids.r_list");
  require_increasing(z_radii, "grids.z_radii");
  for (double r : z_radii) {
    if (space.is_bergman() && !(r < 1.0)) throw ValidationError("grids.z_radii must lie inside the ball");
  }
  if (angles < 1 || angles > 4096) throw ValidationError("grids.angles must lie in [1, 4096]");
  LocalizationParams::for_space(space, delta);
  if (!(block_degree <= degree)) throw ValidationError("diagnostics.block_degree must not exceed degree");
  compactness().validate(space);
  require_increasing(rf_a, "rudin_forelli.a");
  require_increasing(rf_R, "rudin_forelli.R_list");
  require_increasing(covering_radii, "covering.radii");
  for (double r : covering_radii) {
    if (!(r > 0.0)) throw ValidationError("covering.radii must be positive");
  }
  if (covering_samples < 0) throw ValidationError("covering.samples must be nonnegative");
  if (identity_pairs < 1) throw ValidationError("identities.pairs must be positive");
  if (output.empty()) throw ValidationError("output must not be empty");
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

std::vector<Point> ExperimentConfig::z_grid() const {
  std::vector<Point> g;
  for (double r : z_radii) {
    const std::vector<Point> s = shell_points(space, r, angles);
    g.insert(g.end(), s.begin(), s.end());
  }
  return g;
}

RuleSpec ExperimentConfig::localization_rule() const {
  RuleSpec s = default_localization_rule(space);
  s.radial_nodes = localization_radial;
  s.angular_nodes = localization_angular;
  return s;
}

QuadratureRule ExperimentConfig::toeplitz_rule() const {
  if (toeplitz_radial == 0 && toeplitz_angular == 0) return locomp::toeplitz_rule(space, degree);
  const QuadratureRule autorule = locomp::toeplitz_rule(space, degree);
  RuleSpec s = autorule.spec;
  if (toeplitz_radial) s.radial_nodes = toeplitz_radial;
  if (toeplitz_angular) s.angular_nodes = toeplitz_angular;
  return build_rule(s);
}

CompactnessConfig ExperimentConfig::compactness() const {
  CompactnessConfig c;
  c.shells = shells;
  c.angles = angles;
  c.block_degree = block_degree;
  c.proxy_m = proxy_m;
  c.theorem_r = theorem_r;
  c.disk = disk;
  c.params = LocalizationParams{space.n, space.p, delta};
  c.r_list = r_list;
  c.localization = localization;
  c.covering_radius = covering_radius;
  c.covering_region = covering_region;
  c.verdict = verdict;
  return c;
}

std::vector<std::string> experiment_subcommands() {
  return {"kernel-identities", "rudin-forelli", "toeplitz", "berezin-map", "localize", "covering", "compactness", "spectrum"};
}

void run_experiment(const std::string& subcommand, const ExperimentConfig& config, const std::filesystem::path& out) {
  const auto subs = experiment_subcommands();
  if (std::find(subs.begin(), subs.end(), subcommand) == subs.end()) {
    throw ValidationError("unknown subcommand '" + subcommand + "'");
  }
  config.validate();
  std::filesystem::create_directories(out);

  Meta meta;
  meta.subcommand = subcommand;
  meta.hash = config.hash();
  const QuadratureRule trule = config.toeplitz_rule();
  meta.resolution = Json{{"degree", config.degree},
                         {"block_degree", config.block_degree},
                         {"toeplitz_rule", to_json(trule.spec)},
                         {"localization_rule", to_json(config.localization_rule())}};
  write_json(out / "config.echo.json", config.to_json());

  if (subcommand == "kernel-identities") return run_identities(config, out, meta);
  if (subcommand == "rudin-forelli") return run_rudin_forelli(config, out, meta);
  if (subcommand == "toeplitz") return run_toeplitz(config, out, meta);
  if (subcommand == "berezin-map") return run_berezin_map(config, out, meta);
  if (subcommand == "localize") return run_localize(config, out, meta);
  if (subcommand == "covering") return run_covering(config, out, meta);
  if (subcommand == "compactness") return run_compactness(config, out, meta);
  run_spectrum(config, out, meta);
}

}  // namespace locomp
