#pragma once

#include <functional>
#include <span>

#include "locomp/point.hpp"
#include "locomp/space.hpp"

namespace locomp {

/// A function on the domain of a space.
using Function = std::function<cplx(const Point&)>;

// Kernel conventions.
//   Bergman: <f, g> = int f conj(g) dv with v(B_n) = 1,  K_z(w) = (1 - <w, z>)^{-(n+1)}.
//   Fock:    <f, g> = (alpha/pi)^n int f conj(g) e^{-alpha |w|^2} dv,  K_z(w) = e^{alpha <w, z>}.
// In both cases ||K_z||^2 = K_z(z).

cplx kernel_eval(const SpaceDescriptor& space, const Point& z, const Point& w);
double kernel_norm(const SpaceDescriptor& space, const Point& z);

/// log K_z(w), principal branch for Bergman (Re(1 - <w, z>) > 0 on the ball).
cplx log_kernel(const SpaceDescriptor& space, const Point& z, const Point& w);
/// log ||K_z||, finite for every on-shell node (uses the stored gap).
double log_kernel_norm(const SpaceDescriptor& space, const Point& z);

/// <k_z, k_w> = K_z(w) / (||K_z|| ||K_w||).
cplx correlation_closed_form(const SpaceDescriptor& space, const Point& z, const Point& w);
/// |<k_z, k_w>| evaluated in log form.
double correlation_modulus(const SpaceDescriptor& space, const Point& z, const Point& w);

enum class Normalization { unnormalized, normalized, p_normalized };

/// K_z, k_z = K_z / ||K_z|| or k_z^(p) = K_z / ||K_z||^{2/p'}.
class KernelVector {
 public:
  KernelVector(const SpaceDescriptor& space, const Point& base, Normalization normalization);

  cplx operator()(const Point& w) const;
  cplx log_value(const Point& w) const;

  const SpaceDescriptor& space() const { return space_; }
  const Point& base() const { return base_; }
  Normalization normalization() const { return normalization_; }
  /// ||.||_{2}; equals 1 for the normalized kernel.
  double l2_norm() const;

 private:
  SpaceDescriptor space_;
  Point base_;
  Normalization normalization_;
  double log_scale_;  // log of the divisor applied to K_z
};

KernelVector reproducing_kernel(const SpaceDescriptor& space, const Point& z);
KernelVector normalized_kernel(const SpaceDescriptor& space, const Point& z);
/// Uses space.p.
KernelVector p_normalized_kernel(const SpaceDescriptor& space, const Point& z);

/// U_z^(p) f(w) = f(phi_z(w)) k_z(w)^{2/p} (Bergman) or U_z f(w) = f(z - w) k_z(w) (Fock).
///
/// The fractional power uses exp((2/p) log k_z(w)) with the principal logarithm
/// of 1 - <w, z>, which stays in the right half-plane, so no branch jumps occur.
/// The Fock translation does not depend on p.
Function translate(const SpaceDescriptor& space, const Point& z, double p, Function f);

/// Weight interface for generalized Fock spaces F_phi.  Only the Gaussian
/// phi(z) = alpha |z|^2 / 2 is provided.
class FockWeight {
 public:
  virtual ~FockWeight() = default;
  virtual double phi(const Point& z) const = 0;
  virtual cplx kernel(const Point& z, const Point& w) const = 0;
  /// ||z^m||^2 for the multi-index m.
  virtual double monomial_norm2(std::span<const int> m) const = 0;
};

class GaussianWeight final : public FockWeight {
 public:
  explicit GaussianWeight(double alpha = 1.0);
  double phi(const Point& z) const override;
  cplx kernel(const Point& z, const Point& w) const override;
  double monomial_norm2(std::span<const int> m) const override;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

}  // namespace locomp
