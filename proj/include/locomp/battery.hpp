#pragma once

#include <map>
#include <string>
#include <vector>

#include "locomp/diagnostics.hpp"
#include "locomp/operators.hpp"
#include "locomp/symbols.hpp"

namespace locomp {

/// Uncentered rule for toeplitz() at degree D: ball-lebesgue or plane-gaussian,
/// with more than 2D angular nodes so that general symbols are accepted.
QuadratureRule toeplitz_rule(const SpaceDescriptor& space, int D);

/// toeplitz() with toeplitz_rule(space, D).
TruncatedOperator build_toeplitz(const SpaceDescriptor& space, const Symbol& u, int D);

/// A Toeplitz operator of the built-in battery with its expected side.
struct BatteryMember {
  std::string name;
  SpaceDescriptor space;
  std::string symbol;
  std::map<std::string, double> params;
  bool compact_side = false;
  int degree = 60;  // diagnostics degree; certificates use the degree-60 block
};

/// Bergman (n = 1, degree 400): constant 1, radial_step(0.5), radial_bump(0.7), angular(2).
/// Fock (n = 1, alpha = 1, degree 60): radial_step(2), gaussian_decay(0.5).
std::vector<BatteryMember> default_battery();
TruncatedOperator build_member(const BatteryMember& m);

/// Compactness settings for the battery: defaults with Bergman shells ending at 0.95.
CompactnessConfig battery_config(const SpaceDescriptor& space);

/// scale * e_D (x) e_0: sends the constant to the top-degree monomial.  At D = 120 the
/// tail test fails at unit scale; at D = 60 only a large scale fails (through `full`).
TruncatedOperator rank_one_control(const SpaceDescriptor& space, int D, double scale = 1.0);

}  // namespace locomp
