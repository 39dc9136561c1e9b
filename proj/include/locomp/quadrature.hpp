#pragma once

#include <span>
#include <string>
#include <vector>

#include "locomp/kernels.hpp"
#include "locomp/point.hpp"

namespace locomp {

enum class Measure {
  ball_lebesgue,   // normalized volume dv, v(B_n) = 1
  ball_invariant,  // d lambda = dv / (1 - |z|^2)^{n+1}
  plane_gaussian,  // (alpha/pi)^n e^{-alpha |z|^2} dv
  plane_lebesgue,  // Lebesgue dv on C^n
};

enum class RadialScheme { gauss_legendre, double_exponential };
enum class AngularScheme { trapezoid, focused };

std::string to_string(Measure m);
std::string to_string(RadialScheme s);
std::string to_string(AngularScheme s);
Measure measure_from_string(const std::string& s);
RadialScheme radial_scheme_from_string(const std::string& s);
AngularScheme angular_scheme_from_string(const std::string& s);

inline bool is_ball(Measure m) { return m == Measure::ball_lebesgue || m == Measure::ball_invariant; }

/// Resolution and support of a polar product rule.
///
/// Ball rules use the radial variable s = 1 - |z|^2 on [1 - rho_max^2, 1]; plane
/// rules use t = |z|^2 on [0, range^2].  Nodes are stored ring-major: all
/// angular nodes of the first radial node, then the next ring.
struct RuleSpec {
  int n = 1;
  Measure measure = Measure::ball_lebesgue;
  RadialScheme radial = RadialScheme::gauss_legendre;
  AngularScheme angular = AngularScheme::trapezoid;
  int radial_nodes = 400;
  int angular_nodes = 256;
  int polar_nodes = 8;  // n = 2 only: nodes in |xi_1|^2 on the sphere
  double rho_max = 1.0;
  double alpha = 1.0;
  double range = 8.0;

  void validate() const;
  /// Same rule with radial and angular resolution doubled.
  RuleSpec refined() const;
};

struct QuadratureRule {
  RuleSpec spec;
  Point center;               // nodes are phi_center(u) (ball) or center + u (plane)
  double inner_radius = 0.0;  // excluded metric disk D(center, inner_radius)
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::vector<Point> local_nodes;  // u for each node of a moved rule (empty otherwise)

  int rings = 0;
  int per_ring = 0;
  std::vector<double> ring_radial;  // s (ball) or t = |u|^2 (plane) per ring
  std::vector<double> ring_weight;  // radial weight including the measure density

  /// Closed-form mass of the target measure on the represented region (inf if unbounded).
  double closed_form_mass = 0.0;
  /// Mass of the target measure outside the support (Gaussian tail or ball shell);
  /// for the invariant measure this is the Lebesgue mass of the excluded shell.
  double truncation_bound = 0.0;

  std::size_t size() const { return nodes.size(); }
  const Point& local(std::size_t i) const { return local_nodes.empty() ? nodes[i] : local_nodes[i]; }
  std::string domain_tag() const { return to_string(spec.measure); }
  bool centered() const { return inner_radius != 0.0 || center.norm2() != 0.0; }
};

QuadratureRule build_rule(const RuleSpec& spec);

/// Polar product rule on {|z| <= rho_max}; rho_max = 1 gives the whole ball.
/// Gauss-Legendre radial by default; double-exponential for the invariant measure.
QuadratureRule build_ball_rule(int n, int radial_nodes, int angular_nodes, double rho_max,
                               Measure measure = Measure::ball_lebesgue);

/// Polar rule on {|z| <= range_R}.
QuadratureRule build_plane_rule(int n, double alpha, double range_R, int radial_nodes, int angular_nodes,
                                Measure measure = Measure::plane_gaussian);

/// The rule moved to `center` with the metric disk D(center, R) removed.
///
/// Ball: an annulus rule {tanh R <= |u| <= rho_max} in u is mapped by w = phi_center(u);
/// invariant weights are unchanged and Lebesgue weights pick up the Jacobian
/// |k_center(u)|^2.  For n = 1 the angular nodes are rotated by arg(center), which
/// puts the focus of a focused angular rule on the boundary point nearest to center.
/// Plane: the annulus {R <= |u| <= range} is translated by center.
QuadratureRule centered_rule(const QuadratureRule& base, const Point& center, double R);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

/// Evaluates f at all nodes (in parallel) and throws NumericalError at the first non-finite value.
std::vector<cplx> evaluate_nodes(const Function& f, const QuadratureRule& rule);

cplx integrate(const Function& f, const QuadratureRule& rule);
double integrate_real(const std::function<double(const Point&)>& f, const QuadratureRule& rule);

/// int |f| over the complement of D(center, R) within the rule's support.
double tail_integral(const Function& f, const Point& center, double R, const QuadratureRule& rule);

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

/// Composite Gauss-Legendre on [a, b] with panels split at the given interior points.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};
Rule1D composite_gauss_legendre(double a, double b, std::vector<double> breaks, int panels, int nodes_per_panel);

}  // namespace locomp
