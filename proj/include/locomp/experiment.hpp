#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "locomp/diagnostics.hpp"
#include "locomp/serialize.hpp"
#include "locomp/symbols.hpp"

namespace locomp {

/// Built-in symbol (name + parameters) or an expression with a declared bound.
struct SymbolSpec {
  std::string builtin = "constant";
  std::map<std::string, double> params;
  std::string expression;  // used when nonempty
  double bound = 1.0;      // expression symbols only

  Symbol build() const;
};

/// One experiment, read from a JSON file.
///
/// Every field is optional; missing ones take family-dependent defaults and unknown
/// keys are rejected.  to_json() writes the complete canonical form, which reads back
/// to the same configuration and the same bytes.
struct ExperimentConfig {
  SpaceDescriptor space;
  SymbolSpec symbol;
  int degree = 400;

  // Quadrature resolutions; 0 keeps the automatic Toeplitz rule.
  int toeplitz_radial = 0;
  int toeplitz_angular = 0;
  int localization_radial = 64;
  int localization_angular = 64;

  // Grids.
  std::vector<double> shells;
  std::vector<double> r_list;
  std::vector<double> z_radii;
  int angles = 8;

  // Localization.
  double delta = 1.0;
  Thresholds localization;

  // Diagnostics.
  int block_degree = 60;
  int proxy_m = 40;
  double theorem_r = 0.5;
  DiskSampling disk;
  double covering_radius = 1.0;
  double covering_region = 2.0;
  VerdictThresholds verdict;

  // Rudin-Forelli and covering subcommands.
  std::vector<double> rf_a;
  std::vector<double> rf_R;
  std::vector<double> covering_radii;
  int covering_samples = 2000;

  // Kernel identity suite.
  int identity_pairs = 1000;

  std::string output = "out";
  std::uint64_t seed = 1;

  static ExperimentConfig defaults(const SpaceDescriptor& space);
  static ExperimentConfig from_json(const Json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  Json to_json() const;
  /// Throws ValidationError on any out-of-range value.
  void validate() const;
  /// FNV-1a (64 bit) of the compact canonical JSON, as 16 hex digits.
  std::string hash() const;

  std::vector<Point> z_grid() const;
  RuleSpec localization_rule() const;
  QuadratureRule toeplitz_rule() const;
  CompactnessConfig compactness() const;
};

std::uint64_t fnv1a64(const std::string& bytes);

std::vector<std::string> experiment_subcommands();

/// Runs a subcommand and writes report.json, config.echo.json and its CSV files to `out`.
void run_experiment(const std::string& subcommand, const ExperimentConfig& config, const std::filesystem::path& out);

}  // namespace locomp
