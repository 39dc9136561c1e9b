#pragma once

#include <string>

#include "locomp/point.hpp"

namespace locomp {

enum class Family { bergman, fock };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Which function space an object lives on: the Bergman space A^p of the unit
/// ball of C^n, or the Fock space with Gaussian weight phi(z) = alpha |z|^2 / 2.
struct SpaceDescriptor {
  Family family = Family::bergman;
  int n = 1;
  double p = 2.0;
  double alpha = 1.0;  // Fock only

  static SpaceDescriptor bergman(int n = 1, double p = 2.0);
  static SpaceDescriptor fock(int n = 1, double p = 2.0, double alpha = 1.0);

  /// Throws ValidationError unless n in {1, 2}, 1 < p < inf and alpha > 0.
  void validate() const;
  double conjugate_exponent() const { return p / (p - 1.0); }
  bool is_bergman() const { return family == Family::bergman; }

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

/// Throws DomainError if z is not a point of the space's domain.
void require_domain(const SpaceDescriptor& space, const Point& z);

}  // namespace locomp
