#include "locomp/kernels.hpp"

#include <cmath>
#include <utility>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"

namespace locomp {

std::string to_string(Family f) { return f == Family::bergman ? "bergman" : "fock"; }

Family family_from_string(const std::string& s) {
  if (s == "bergman") return Family::bergman;
  if (s == "fock") return Family::fock;
  throw ValidationError("unknown space family '" + s + "' (expected bergman or fock)");
}

SpaceDescriptor SpaceDescriptor::bergman(int n, double p) {
  SpaceDescriptor s{Family::bergman, n, p, 1.0};
  s.validate();
  return s;
}

SpaceDescriptor SpaceDescriptor::fock(int n, double p, double alpha) {
  SpaceDescriptor s{Family::fock, n, p, alpha};
  s.validate();
  return s;
}

void SpaceDescriptor::validate() const {
  if (n < 1 || n > kMaxDim) throw ValidationError("dimension n must be 1 or 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("exponent p must satisfy 1 < p < inf");
  if (family == Family::fock && !(alpha > 0.0 && std::isfinite(alpha))) {
    throw ValidationError("Fock weight parameter alpha must be positive");
  }
}

void require_domain(const SpaceDescriptor& space, const Point& z) {
  if (z.dim() != space.n) {
    throw DomainError("point of dimension " + std::to_string(z.dim()) + " used in a space of dimension " +
                      std::to_string(space.n));
  }
  if (space.is_bergman()) {
    BallPoint check(z);
    (void)check;
  } else {
    PlanePoint check(z);
    (void)check;
  }
}

namespace {

void require_pair(const SpaceDescriptor& space, const Point& z, const Point& w) {
  require_domain(space, z);
  require_domain(space, w);
}

double bergman_power(const SpaceDescriptor& s) { return static_cast<double>(s.n + 1); }

cplx checked_exp(cplx l) {
  if (l.real() > 709.0) throw NumericalError("kernel value overflows double precision");
  return std::exp(l);
}

}  // namespace

cplx log_kernel(const SpaceDescriptor& space, const Point& z, const Point& w) {
  const cplx zw = inner(w, z);
  if (space.is_bergman()) {
    const cplx d = 1.0 - zw;
    if (std::abs(d) == 0.0) throw NumericalError("Bergman kernel singular: 1 - <w, z> = 0");
    return -bergman_power(space) * std::log(d);
  }
  return space.alpha * zw;
}

double log_kernel_norm(const SpaceDescriptor& space, const Point& z) {
  if (space.is_bergman()) return -0.5 * bergman_power(space) * std::log(z.gap());
  return 0.5 * space.alpha * z.norm2();
}

cplx kernel_eval(const SpaceDescriptor& space, const Point& z, const Point& w) {
  require_pair(space, z, w);
  return checked_exp(log_kernel(space, z, w));
}

double kernel_norm(const SpaceDescriptor& space, const Point& z) {
  require_domain(space, z);
  const double l = log_kernel_norm(space, z);
  if (l > 709.0) throw NumericalError("kernel norm overflows double precision");
  return std::exp(l);
}

cplx correlation_closed_form(const SpaceDescriptor& space, const Point& z, const Point& w) {
  require_pair(space, z, w);
  return std::exp(log_kernel(space, z, w) - log_kernel_norm(space, z) - log_kernel_norm(space, w));
}

double correlation_modulus(const SpaceDescriptor& space, const Point& z, const Point& w) {
  return std::exp(log_kernel(space, z, w).real() - log_kernel_norm(space, z) - log_kernel_norm(space, w));
}

KernelVector::KernelVector(const SpaceDescriptor& space, const Point& base, Normalization normalization)
    : space_(space), base_(base), normalization_(normalization) {
  space_.validate();
  require_domain(space_, base_);
  const double ln = log_kernel_norm(space_, base_);
  switch (normalization_) {
    case Normalization::unnormalized: log_scale_ = 0.0; break;
    case Normalization::normalized: log_scale_ = ln; break;
    case Normalization::p_normalized: log_scale_ = 2.0 / space_.conjugate_exponent() * ln; break;
  }
}

cplx KernelVector::log_value(const Point& w) const {
  require_domain(space_, w);
  return log_kernel(space_, base_, w) - log_scale_;
}

cplx KernelVector::operator()(const Point& w) const { return checked_exp(log_value(w)); }

double KernelVector::l2_norm() const { return std::exp(log_kernel_norm(space_, base_) - log_scale_); }

KernelVector reproducing_kernel(const SpaceDescriptor& space, const Point& z) {
  return KernelVector(space, z, Normalization::unnormalized);
}

KernelVector normalized_kernel(const SpaceDescriptor& space, const Point& z) {
  return KernelVector(space, z, Normalization::normalized);
}

KernelVector p_normalized_kernel(const SpaceDescriptor& space, const Point& z) {
  return KernelVector(space, z, Normalization::p_normalized);
}

Function translate(const SpaceDescriptor& space, const Point& z, double p, Function f) {
  space.validate();
  require_domain(space, z);
  if (!(p > 1.0)) throw ValidationError("translate: exponent must exceed 1");
  const double lz = log_kernel_norm(space, z);
  if (space.is_bergman()) {
    return [space, z, p, lz, f = std::move(f)](const Point& w) {
      const cplx log_k = log_kernel(space, z, w) - lz;
      return f(mobius_map(z, w)) * checked_exp(2.0 / p * log_k);
    };
  }
  return [space, z, lz, f = std::move(f)](const Point& w) {
    return f(z - w) * checked_exp(log_kernel(space, z, w) - lz);
  };
}

GaussianWeight::GaussianWeight(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0)) throw ValidationError("Gaussian weight needs alpha > 0");
}

double GaussianWeight::phi(const Point& z) const { return 0.5 * alpha_ * z.norm2(); }

cplx GaussianWeight::kernel(const Point& z, const Point& w) const { return std::exp(alpha_ * inner(w, z)); }

double GaussianWeight::monomial_norm2(std::span<const int> m) const {
  double l = 0.0;
  for (int k : m) l += std::lgamma(k + 1.0) - k * std::log(alpha_);
  return std::exp(l);
}

}  // namespace locomp
