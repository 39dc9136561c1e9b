#include "locomp/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "locomp/errors.hpp"

namespace locomp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const SpaceDescriptor& s) {
  Json j{{"family", to_string(s.family)}, {"n", s.n}, {"p", s.p}};
  if (!s.is_bergman()) j["alpha"] = s.alpha;
  return j;
}

Json to_json(const RuleSpec& s) {
  Json j{{"n", s.n},
         {"measure", to_string(s.measure)},
         {"radial", to_string(s.radial)},
         {"angular", to_string(s.angular)},
         {"radial_nodes", s.radial_nodes},
         {"angular_nodes", s.angular_nodes}};
  if (s.n == 2) j["polar_nodes"] = s.polar_nodes;
  if (is_ball(s.measure)) {
    j["rho_max"] = s.rho_max;
  } else {
    j["alpha"] = s.alpha;
    j["range"] = s.range;
  }
  return j;
}

Json to_json(const Point& z) {
  Json j = Json::array();
  for (const cplx& c : z.coords()) j.push_back({c.real(), c.imag()});
  return j;
}

Json to_json(const Profile& p) {
  Json j = Json::array();
  for (const ProfileEntry& e : p) {
    j.push_back({{"shell_or_r", e.at}, {"value", e.value}, {"error_bar", e.error_bar}, {"refused", e.refused}});
  }
  return j;
}

Json to_json(const TailProfile& t) {
  Json j = Json::array();
  for (std::size_t k = 0; k < t.radius.size(); ++k) {
    j.push_back({{"shell_or_r", t.radius[k]}, {"value", t.value[k]}, {"error_bar", t.error_bar[k]}});
  }
  return j;
}

Json to_json(const LocalizationCertificate& c) {
  Json grid = Json::array();
  for (const Point& z : c.z_grid) grid.push_back(to_json(z));
  return Json{{"provenance", c.provenance},
              {"space", to_json(c.space)},
              {"p", c.params.p},
              {"delta", c.params.delta},
              {"degree", c.degree},
              {"a_T", c.a_T},
              {"a_Tstar", c.a_Tstar},
              {"sup_full_T", c.sup_full_T},
              {"sup_full_Tstar", c.sup_full_Tstar},
              {"sup_full", c.sup_full},
              {"error_bar", c.error_bar},
              {"tail_T", to_json(c.tail_T)},
              {"tail_Tstar", to_json(c.tail_Tstar)},
              {"tail", to_json(c.tail)},
              {"thresholds", {{"full", c.thresholds.full}, {"tail_fraction", c.thresholds.tail_fraction}}},
              {"full_ok", c.full_ok},
              {"tail_ok", c.tail_ok},
              {"pass", c.pass},
              {"pass_radius", c.pass_radius},
              {"rule", to_json(c.rule)},
              {"z_grid", grid}};
}

Json to_json(const RudinForelliCheck& c) {
  Json sweep = Json::array();
  for (std::size_t i = 0; i < c.sweep_gap.size(); ++i) {
    sweep.push_back({{"gap", c.sweep_gap[i]}, {"value", c.sweep_value[i]}});
  }
  return Json{{"n", c.n},          {"a", c.a},           {"sup", c.sup},     {"refined_sup", c.refined_sup},
              {"stable", c.stable}, {"divergent", c.divergent}, {"values", c.values}, {"sweep", sweep}};
}

Json to_json(const CoveringReport& r) {
  return Json{{"samples", r.samples},           {"max_overlap", r.max_overlap}, {"max_diameter", r.max_diameter},
              {"gaps_found", r.gaps_found}, {"overlaps_found", r.overlaps_found}};
}

Json to_json(const DecompositionError& d) {
  Json tests = Json::object();
  for (std::size_t i = 0; i < d.test_names.size(); ++i) tests[d.test_names[i]] = d.test_ratio[i];
  return Json{{"radius", d.radius},       {"c1", d.c1}, {"c2", d.c2}, {"bound", d.bound}, {"error_bar", d.error_bar},
              {"test_ratio", tests}, {"max_test_ratio", d.max_test_ratio}};
}

Json to_json(const EquivalenceReport& e) {
  return Json{{"r_list", e.r_list}, {"fixed_r", e.fixed_r}, {"a", to_json(e.a)}, {"b", to_json(e.b)}, {"c", to_json(e.c)}};
}

Json to_json(const CompactnessReport& r) {
  Json j{{"provenance", r.provenance},
         {"space", to_json(r.space)},
         {"degree", r.degree},
         {"berezin_boundary_sup", r.berezin_boundary_sup},
         {"berezin_error_bar", r.berezin_error_bar},
         {"berezin_profile", to_json(r.berezin_profile)},
         {"essnorm_proxy", r.essnorm_proxy},
         {"theorem_rhs", r.theorem_rhs},
         {"theorem_rhs_error_bar", r.theorem_rhs_error_bar},
         {"rhs_ratio", r.rhs_ratio},
         {"decomposition_error_bound", r.decomposition_error_bound},
         {"decomposition", r.has_decomposition ? to_json(r.decomposition) : Json()},
         {"certificate", to_json(r.certificate)},
         {"thresholds", {{"tau_B", r.thresholds.tau_B}, {"tau_e", r.thresholds.tau_e}, {"tau_nc", r.thresholds.tau_nc}}},
         {"verdict", to_string(r.verdict)}};
  return j;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw ValidationError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::add_numbers(const std::vector<double>& row) {
  std::vector<std::string> s;
  s.reserve(row.size());
  for (double v : row) s.push_back(format_double(v));
  add(std::move(s));
}

std::string CsvTable::render(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

CsvTable profile_table(const Profile& p) {
  CsvTable t({"shell_or_r", "value", "error_bar"});
  for (const ProfileEntry& e : p) t.add_numbers({e.at, e.value, e.error_bar});
  return t;
}

CsvTable profile_table(const TailProfile& tp) {
  CsvTable t({"shell_or_r", "value", "error_bar"});
  for (std::size_t k = 0; k < tp.radius.size(); ++k) t.add_numbers({tp.radius[k], tp.value[k], tp.error_bar[k]});
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace locomp
