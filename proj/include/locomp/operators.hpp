#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "locomp/point.hpp"
#include "locomp/quadrature.hpp"
#include "locomp/space.hpp"
#include "locomp/symbols.hpp"

namespace locomp {

/// Orthonormal monomial basis e_m = c_m z^m of A^2 or F^2 up to total degree D.
///
/// Bergman: c_m^2 = (n + |m|)! / (n! m!).  Fock: c_m^2 = alpha^|m| / m!.
/// Indices are ordered by total degree, so the basis of degree <= d is a prefix.
class MonomialBasis {
 public:
  MonomialBasis(const SpaceDescriptor& space, int D);

  const SpaceDescriptor& space() const { return space_; }
  int degree() const { return D_; }
  std::size_t size() const { return index_.size(); }
  const std::array<int, kMaxDim>& multi_index(std::size_t j) const { return index_[j]; }
  int total_degree(std::size_t j) const { return total_[j]; }
  double norm_constant(std::size_t j) const;
  /// Number of basis elements of total degree <= d.
  std::size_t prefix(int d) const;

  /// e_j(w) for all j, written to out (size() entries).  Uses recurrences that
  /// avoid forming the (possibly huge or tiny) constants c_m separately.
  void values(const Point& w, cplx* out) const;
  Eigen::VectorXcd values(const Point& w) const;

 private:
  SpaceDescriptor space_;
  int D_;
  std::vector<std::array<int, kMaxDim>> index_;
  std::vector<int> total_;
  std::vector<double> log_c_;
  std::vector<double> step_;  // recurrence factors e_k = e_{k-1} * z * step_[k] (n = 1) or A/B factors (n = 2)
  std::vector<double> growth_;  // n = 2: G(d)
};

std::size_t basis_size(int n, int D);

/// <k_z, e_j> = conj(e_j(z)) / ||K_z||, in closed form.
Eigen::VectorXcd kernel_coefficients(const SpaceDescriptor& space, const Point& z, int D);
/// ||Q_D k_z||, the norm of the part of k_z above degree D (closed-form series).
double kernel_coefficient_tail(const SpaceDescriptor& space, const Point& z, int D);

/// Compression P_D T P_D stored as M[k][j] = <T e_j, e_k>.
class TruncatedOperator {
 public:
  TruncatedOperator(const SpaceDescriptor& space, int D, Eigen::MatrixXcd matrix, std::string provenance);

  static TruncatedOperator identity(const SpaceDescriptor& space, int D);
  static TruncatedOperator zero(const SpaceDescriptor& space, int D);

  const SpaceDescriptor& space() const { return space_; }
  int degree() const { return D_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::string& provenance() const { return provenance_; }
  /// Largest singular value, computed once.
  double norm() const;

 private:
  struct Cache;
  SpaceDescriptor space_;
  int D_;
  Eigen::MatrixXcd matrix_;
  std::string provenance_;
  std::shared_ptr<Cache> cache_;
};

MonomialBasis monomial_basis(const SpaceDescriptor& space, int D);

/// Toeplitz compression <u e_j, e_k>.
///
/// Radial symbols: diagonal entries from one-dimensional composite Gauss-Legendre
/// integrals (the rule is not used).  Other symbols: n = 1 uses a per-ring angular
/// DFT of u on the rule's rings (trapezoid angular rule with more than 2D nodes);
/// n = 2 accumulates the full product rule.  The rule must be an uncentered
/// ball-lebesgue (Bergman) or plane-gaussian (Fock) rule.  Every symbol value used
/// is checked against the declared bound.
TruncatedOperator toeplitz(const SpaceDescriptor& space, const Symbol& u, int D, const QuadratureRule& rule);

struct Correlation {
  cplx value;
  double error_bar = 0.0;  // ||M|| (||Q_D k_z|| + ||Q_D k_w||)
};

/// <T k_z, k_w> = b(w)^* M a(z) with a, b the kernel coefficients.
Correlation correlation(const TruncatedOperator& T, const Point& z, const Point& w);
Correlation berezin(const TruncatedOperator& T, const Point& z);

/// Evaluates w -> <T k_z, k_w> (or <T^* k_z, k_w>) for a fixed z at many points.
class CorrelationEvaluator {
 public:
  CorrelationEvaluator(const TruncatedOperator& T, const Point& z, bool adjoint = false);
  cplx operator()(const Point& w) const;
  /// |<T k_z, k_w>| without forming the complex value twice.
  double modulus(const Point& w) const { return std::abs((*this)(w)); }

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  Eigen::VectorXcd v_;  // M a(z)
  SpaceDescriptor space_;
};

TruncatedOperator compose(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator adjoint(const TruncatedOperator& A);
TruncatedOperator combine(cplx c1, const TruncatedOperator& A, cplx c2, const TruncatedOperator& B);
/// Restriction to the basis elements of total degree <= d (an exact lower-degree compression).
TruncatedOperator leading_block(const TruncatedOperator& A, int d);

double operator_norm(const TruncatedOperator& T);
Eigen::VectorXd singular_values(const TruncatedOperator& T);

}  // namespace locomp
