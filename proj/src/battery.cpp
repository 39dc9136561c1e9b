#include "locomp/battery.hpp"

#include <algorithm>

#include "locomp/errors.hpp"

namespace locomp {

QuadratureRule toeplitz_rule(const SpaceDescriptor& space, int D) {
  space.validate();
  if (D < 0) throw ValidationError("degree must be nonnegative");
  const int angular = 2 * D + 8;
  if (space.is_bergman()) {
    const int radial = std::max(96, D / 2 + 64);
    return build_ball_rule(space.n, radial, space.n == 1 ? angular : std::max(16, D + 4), 1.0);
  }
  // Gaussian mass beyond |z| = R is about (alpha R^2)^D e^{-alpha R^2} / D!; R^2 = (2D + 60) / alpha covers it.
  const double range = std::sqrt((2.0 * D + 60.0) / space.alpha);
  const int radial = std::max(128, D + 64);
  return build_plane_rule(space.n, space.alpha, range, radial, space.n == 1 ? angular : std::max(16, D + 4));
}

TruncatedOperator build_toeplitz(const SpaceDescriptor& space, const Symbol& u, int D) {
  return toeplitz(space, u, D, toeplitz_rule(space, D));
}

std::vector<BatteryMember> default_battery() {
  const SpaceDescriptor B = SpaceDescriptor::bergman(1), F = SpaceDescriptor::fock(1);
  return {
      {"bergman_constant", B, "constant", {{"value", 1.0}}, false, 400},
      {"bergman_radial_step", B, "radial_step", {{"radius", 0.5}}, false, 400},
      {"bergman_radial_bump", B, "radial_bump", {{"radius", 0.7}}, true, 400},
      {"bergman_angular", B, "angular", {{"power", 2.0}}, true, 400},
      {"fock_radial_step", F, "radial_step", {{"radius", 2.0}}, false, 60},
      {"fock_gaussian_decay", F, "gaussian_decay", {{"scale", 0.5}}, true, 60},
  };
}

TruncatedOperator build_member(const BatteryMember& m) {
  return build_toeplitz(m.space, builtin_symbol(m.symbol, m.params), m.degree);
}

CompactnessConfig battery_config(const SpaceDescriptor& space) {
  CompactnessConfig c = CompactnessConfig::defaults(space);
  if (space.is_bergman()) std::erase_if(c.shells, [](double s) { return s > 0.95; });
  return c;
}

TruncatedOperator rank_one_control(const SpaceDescriptor& space, int D, double scale) {
  if (D < 1) throw ValidationError("rank-one control needs degree >= 1");
  const auto m = static_cast<Eigen::Index>(basis_size(space.n, D));
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  M(m - 1, 0) = scale;
  return TruncatedOperator(space, D, M, "rank_one");
}

}  // namespace locomp
