#pragma once

#include <string>
#include <vector>

#include "locomp/covering.hpp"
#include "locomp/localization.hpp"
#include "locomp/operators.hpp"
#include "locomp/quadrature.hpp"

namespace locomp {

/// max(||T Q_m||, ||Q_m T||), Q_m the projection onto basis elements of degree >= m.
/// Needs 0 < m <= D.
double essential_norm_proxy(const TruncatedOperator& T, int m);

/// One sample of a boundary profile (a shell radius or a disk radius).
struct ProfileEntry {
  double at = 0.0;
  double value = 0.0;
  double error_bar = 0.0;
  bool refused = false;  // truncation bar exceeds 10% of max(value, tau_B)
};
using Profile = std::vector<ProfileEntry>;

/// Points of the shell |z| = shell: `angles` directions (a single point for shell 0).
/// n = 2 uses (r cos t, r sin t e^{it}).
std::vector<Point> shell_points(const SpaceDescriptor& space, double shell, int angles = 8);

/// Samples of D(z, r): w = phi_z(u) (Bergman) or w = z + u (Fock) with u on
/// `radial` circles of radius up to tanh r (resp. r) and `angular` directions, plus w = z.
struct DiskSampling {
  int radial = 4;
  int angular = 12;
};
std::vector<Point> disk_samples(const SpaceDescriptor& space, const Point& z, double r, const DiskSampling& disk);

struct BoundedValue {
  double value = 0.0;
  double error_bar = 0.0;
};

/// max over z in `shell_grid`, w in D(z, r) of |<T k_z^(p), k_w^(p')>|.
/// Fock uses normalized kernels for every p.
BoundedValue disk_correlation_sup(const TruncatedOperator& T, double r, const std::vector<Point>& shell_grid,
                                  const DiskSampling& disk, double p);

/// disk_correlation_sup over the outermost points of shell_grid (largest |z|).
BoundedValue theorem_rhs(const TruncatedOperator& T, double r, const std::vector<Point>& shell_grid,
                         const DiskSampling& disk, double p);

/// Per shell: sup over shell_points of |berezin(T, z)|, with the truncation bar and the refusal flag.
Profile berezin_boundary_profile(const TruncatedOperator& T, const std::vector<double>& shells, int angles = 8,
                                 double tau_B = 0.05);

/// Rules used by decomposition_error.
struct DecompositionRules {
  RuleSpec tail_rule;        // uncentered ball-invariant / plane-lebesgue rule for the tail integrals
  std::vector<Point> z_grid;  // sup of the tails is taken over these points
  int test_radial = 32;      // Lebesgue rule over the covered region for the test functions
  int test_angular = 48;
};
DecompositionRules default_decomposition_rules(const SpaceDescriptor& space);

/// Defect of TP - sum_j 1_{F_j} T P 1_{G_j}.
///
/// The defect kernel is dominated by 1_{D(z,r)^c}(w) |<T K_w, K_z>|.  Bergman: with
/// h(z) = ||K_z||^{2 delta / (p p' (n+1))} the Schur constants are c1 = sup_z tail of T^*
/// at exponent a_T*, c2 = sup_z tail of T at exponent a_T, and bound = c1^{1/p'} c2^{1/p}.
/// Fock: plain tails int_{|w-z|>r} |<T k_z, k_w>| dv(w) with p = 2.
/// The test functions measure ||1_Omega S 1_Omega f|| / ||f|| on L^p(dv) over the covered
/// region Omega (L^2 for Fock, with the kernel of P on L^2(dv)).
struct DecompositionError {
  double radius = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double bound = 0.0;
  double error_bar = 0.0;
  std::vector<std::string> test_names;
  std::vector<double> test_ratio;
  double max_test_ratio = 0.0;
};
DecompositionError decomposition_error(const TruncatedOperator& T, const Covering& covering,
                                       const LocalizationParams& params, const DecompositionRules& rules);

/// Three boundary profiles that vanish together for the operators in scope:
///   (a) max over r in r_list of the disk-correlation sup, (b) the same at fixed_r,
///   (c) sup |berezin| on the shell.
struct EquivalenceReport {
  std::vector<double> r_list;
  double fixed_r = 0.0;
  Profile a;
  Profile b;
  Profile c;
};
EquivalenceReport equivalence_probe(const TruncatedOperator& T, const std::vector<double>& r_list, double fixed_r,
                                    const std::vector<double>& shells, const DiskSampling& disk = {},
                                    int angles = 8);

enum class Verdict { compact_consistent, non_compact_consistent, inconclusive };
std::string to_string(Verdict v);

struct VerdictThresholds {
  double tau_B = 0.05;
  double tau_e = 0.1;
  double tau_nc = 0.5;
};

/// compact-consistent iff the certificate passes, berezin_sup < tau_B and proxy < tau_e;
/// non-compact-consistent iff proxy > tau_nc; inconclusive otherwise.
Verdict decide_verdict(bool certificate_pass, double berezin_sup, double proxy, const VerdictThresholds& t);

struct CompactnessConfig {
  std::vector<double> shells;
  int angles = 8;
  int block_degree = 60;  // certificate and proxy act on the leading block of this degree
  int proxy_m = 40;
  double theorem_r = 0.5;
  DiskSampling disk;
  LocalizationParams params;
  std::vector<double> r_list;
  Thresholds localization;
  double covering_radius = 1.0;
  double covering_region = 2.0;  // Bergman radius (ball) or Euclidean radius (plane) of the covered region
  VerdictThresholds verdict;

  static CompactnessConfig defaults(const SpaceDescriptor& space);
  void validate(const SpaceDescriptor& space) const;
};

struct CompactnessReport {
  std::string provenance;
  SpaceDescriptor space;
  int degree = 0;
  Profile berezin_profile;
  double berezin_boundary_sup = 0.0;
  double berezin_error_bar = 0.0;
  LocalizationCertificate certificate;
  double essnorm_proxy = 0.0;
  double theorem_rhs = 0.0;
  double theorem_rhs_error_bar = 0.0;
  double rhs_ratio = 0.0;  // essnorm_proxy / theorem_rhs (0 when both vanish)
  bool has_decomposition = false;  // ball coverings exist for n = 1 only
  DecompositionError decomposition;
  double decomposition_error_bound = 0.0;
  VerdictThresholds thresholds;
  Verdict verdict = Verdict::inconclusive;
};

/// Throws NumericalError if any requested shell is refused (raise the degree).
CompactnessReport compactness_report(const TruncatedOperator& T, const CompactnessConfig& config);

}  // namespace locomp
