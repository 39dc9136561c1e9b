#pragma once

#include <functional>
#include <string>
#include <vector>

#include "locomp/operators.hpp"
#include "locomp/quadrature.hpp"
#include "locomp/space.hpp"

namespace locomp {

/// Exponent data of the weak localization conditions.
///
/// a_T = 1 - 2 delta / (p' (n + 1)) weights the integrals of T and
/// a_T* = 1 - 2 delta / (p (n + 1)) those of the adjoint.
struct LocalizationParams {
  int n = 1;
  double p = 2.0;
  double delta = 1.0;

  static LocalizationParams for_space(const SpaceDescriptor& space, double delta = 1.0);
  /// Throws unless 0 < delta < min(p, p'); then both exponents lie in ((n-1)/(n+1), 1).
  void validate() const;
  double conjugate() const { return p / (p - 1.0); }
  double a_T() const;
  double a_Tstar() const;
  /// Rudin-Forelli threshold 2n / (n + 1).
  static double kappa(int n) { return 2.0 * n / (n + 1.0); }
  /// Lower end (n - 1)/(n + 1) of the admissible exponent range.
  static double a_min(int n) { return (n - 1.0) / (n + 1.0); }
};

struct Thresholds {
  double full = 50.0;           // bound on sup_z of the full integrals
  double tail_fraction = 0.05;  // tail must reach this fraction of the full sup
};

/// Sup over a z-grid of tail integrals, one entry per radius.
struct TailProfile {
  std::vector<double> radius;
  std::vector<double> value;
  std::vector<double> error_bar;
  bool non_increasing(double rel_tol = 1e-9) const;
};

/// Default uncentered base rules: ball-invariant (double-exponential radial, focused
/// angular for n = 1) and plane-lebesgue with range 10 / sqrt(alpha).
RuleSpec default_localization_rule(const SpaceDescriptor& space);
/// Bergman: |z| in {0, 0.3, 0.6, 0.8, 0.9, 0.95}; Fock: |z| in {0, ..., 4}; 8 directions each.
std::vector<Point> default_z_grid(const SpaceDescriptor& space);
/// {0, 1, ..., 6}.
std::vector<double> default_r_list();

// The localization integrals below use the degree-D compression as the operator:
// <T k_z, k_w> = b(w)^* M a(z).  `base` is an uncentered rule for the invariant
// measure (Bergman) or Lebesgue measure (Fock); it is re-centered at z internally.

/// int |<T k_z, k_w>| (||K_z|| / ||K_w||)^a d lambda(w).
double bergman_localization_integral(const TruncatedOperator& T, const Point& z, double a, const QuadratureRule& base,
                                     bool adjoint = false);
/// Same integrand over the complement of the Bergman disk D(z, r).
double bergman_localization_tail(const TruncatedOperator& T, const Point& z, double r, double a,
                                 const QuadratureRule& base, bool adjoint = false);
/// int |<T k_z, k_w>| dv(w) with Lebesgue dv on C^n.
double fock_localization_integral(const TruncatedOperator& T, const Point& z, const QuadratureRule& base,
                                  bool adjoint = false);
double fock_localization_tail(const TruncatedOperator& T, const Point& z, double r, const QuadratureRule& base,
                              bool adjoint = false);
/// Tails at several radii from one evaluator; r = 0 gives the full integral.  `a` is ignored for Fock.
std::vector<double> localization_tails(const TruncatedOperator& T, const Point& z, const std::vector<double>& radii,
                                       double a, const QuadratureRule& base, bool adjoint = false);

/// Rudin-Forelli integral int_{D(z,R)^c} |<k_z, k_w>| (||K_z|| / ||K_w||)^a d lambda(w), evaluated
/// after the substitution w = phi_z(u) as int_{|u| > tanh R} (1-|u|^2)^{(n+1)(1+a)/2} |1 - <u,z>|^{-a(n+1)} d lambda(u).
double rudin_forelli_integral(int n, double a, const Point& z, double R, const QuadratureRule& base);
/// Fock analogue int_{|w - z| > R} |<k_z, k_w>| dv(w).
double fock_rudin_forelli_integral(const SpaceDescriptor& space, const Point& z, double R, const QuadratureRule& base);

struct RudinForelliCheck {
  int n = 1;
  double a = 0.5;
  std::vector<Point> z_grid;
  std::vector<double> values;
  std::vector<double> refined_values;
  double sup = 0.0;
  double refined_sup = 0.0;  // same grid, rule with doubled resolution
  bool stable = false;       // |refined_sup - sup| <= 1% of refined_sup
  /// Values along z = t e_1 with 1 - |z|^2 = 10^{-k/2}, k = 2..16.
  std::vector<double> sweep_gap;
  std::vector<double> sweep_value;
  bool divergent = false;
};

/// Evaluates the integral on the grid, repeats it with the refined rule, and sweeps
/// toward the boundary.  Out-of-range a is allowed and is reported through `divergent`.
RudinForelliCheck rudin_forelli_check(int n, double a, const std::vector<Point>& z_grid, const RuleSpec& rule);
TailProfile rudin_forelli_tail(int n, double a, const std::vector<double>& R_list, const std::vector<Point>& z_grid,
                               const QuadratureRule& base);
TailProfile fock_rudin_forelli_tail(const SpaceDescriptor& space, const std::vector<double>& R_list,
                                    const std::vector<Point>& z_grid, const QuadratureRule& base);

using KernelFunction = std::function<double(const Point& z, const Point& w)>;
using WeightFunction = std::function<double(const Point& z)>;

/// Schur test constants over the rule's nodes:
///   c1 = sup_z int K(z,w) h(w)^{p'} dmu(w) / h(z)^{p'},  c2 = sup_w int K(z,w) h(z)^p dmu(z) / h(w)^p.
/// The integral operator is bounded on L^p(mu) with norm at most c1^{1/p'} c2^{1/p}.
struct SchurBound {
  double c1 = 0.0;
  double c2 = 0.0;
  double value = 0.0;       // max(c1, c2)
  double norm_bound = 0.0;  // c1^{1/p'} c2^{1/p}
};
SchurBound schur_bound(const KernelFunction& kernel, const WeightFunction& h, double p, const QuadratureRule& rule);

struct LocalizationCertificate {
  std::string provenance;
  SpaceDescriptor space;
  LocalizationParams params;
  int degree = 0;
  double a_T = 0.0;
  double a_Tstar = 0.0;
  std::vector<Point> z_grid;
  double sup_full_T = 0.0;
  double sup_full_Tstar = 0.0;
  double sup_full = 0.0;
  double error_bar = 0.0;  // heuristic: ||M|| * max_z ||Q_D k_z|| * Rudin-Forelli constant
  TailProfile tail_T;
  TailProfile tail_Tstar;
  TailProfile tail;  // entrywise max of the two
  Thresholds thresholds;
  bool full_ok = false;
  bool tail_ok = false;
  bool pass = false;
  double pass_radius = -1.0;  // smallest r whose tail meets the threshold
  RuleSpec rule;
};

LocalizationCertificate certify(const TruncatedOperator& T, const LocalizationParams& params,
                                const std::vector<double>& r_list, const std::vector<Point>& z_grid,
                                const QuadratureRule& base, const Thresholds& thresholds = {});
/// Default grids and rule.
LocalizationCertificate certify(const TruncatedOperator& T, const LocalizationParams& params,
                                const Thresholds& thresholds = {});

}  // namespace locomp
