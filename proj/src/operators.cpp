#include "locomp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "locomp/errors.hpp"
#include "locomp/kernels.hpp"
#include "parallel.hpp"

namespace locomp {

namespace {

constexpr double kPi = std::numbers::pi;
// n = 2 values use sqrt((n + d)! / n!), which overflows past d ~ 168.
constexpr int kMaxDegreeN2 = 120;

void require_same(const TruncatedOperator& A, const TruncatedOperator& B, const char* what) {
  if (!(A.space() == B.space()) || A.degree() != B.degree()) {
    throw ValidationError(std::string(what) + ": operators differ in space or degree");
  }
}

}  // namespace

std::size_t basis_size(int n, int D) {
  if (D < 0) throw ValidationError("degree must be nonnegative");
  if (n == 1) return static_cast<std::size_t>(D + 1);
  return static_cast<std::size_t>(D + 1) * static_cast<std::size_t>(D + 2) / 2;
}

MonomialBasis::MonomialBasis(const SpaceDescriptor& space, int D) : space_(space), D_(D) {
  space_.validate();
  if (D < 0) throw ValidationError("degree must be nonnegative");
  if (space_.n == 2 && D > kMaxDegreeN2) throw ValidationError("degree above 120 is not supported for n = 2");
  const int n = space_.n;
  for (int d = 0; d <= D; ++d) {
    if (n == 1) {
      index_.push_back({d, 0});
    } else {
      for (int m1 = d; m1 >= 0; --m1) index_.push_back({m1, d - m1});
    }
    const std::size_t count = n == 1 ? 1 : static_cast<std::size_t>(d + 1);
    for (std::size_t k = 0; k < count; ++k) total_.push_back(d);
  }
  for (std::size_t j = 0; j < index_.size(); ++j) {
    double lf = 0.0;
    for (int i = 0; i < n; ++i) lf += std::lgamma(index_[j][static_cast<std::size_t>(i)] + 1.0);
    const int d = total_[j];
    const double l2 = space_.is_bergman() ? std::lgamma(n + d + 1.0) - std::lgamma(n + 1.0) - lf
                                          : d * std::log(space_.alpha) - lf;
    log_c_.push_back(0.5 * l2);
  }
  const bool berg = space_.is_bergman();
  step_.assign(static_cast<std::size_t>(D + 1), 1.0);
  growth_.assign(static_cast<std::size_t>(D + 1), 1.0);
  for (int k = 1; k <= D; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (n == 1) {
      step_[i] = berg ? std::sqrt((k + 1.0) / k) : std::sqrt(space_.alpha / k);
    } else {
      // e_m = G(|m|) A(m1) B(m2) with A(k) = (s w1)^k / sqrt(k!), G(d)^2 = (2 + d)! / 2! (Bergman).
      step_[i] = (berg ? 1.0 : std::sqrt(space_.alpha)) / std::sqrt(static_cast<double>(k));
      growth_[i] = berg ? growth_[i - 1] * std::sqrt(2.0 + k) : 1.0;
    }
  }
}

double MonomialBasis::norm_constant(std::size_t j) const { return std::exp(log_c_[j]); }

std::size_t MonomialBasis::prefix(int d) const {
  if (d < 0) return 0;
  return basis_size(space_.n, std::min(d, D_));
}

void MonomialBasis::values(const Point& w, cplx* out) const {
  if (space_.n == 1) {
    const cplx z = w[0];
    out[0] = 1.0;
    for (int k = 1; k <= D_; ++k) out[k] = out[k - 1] * z * step_[static_cast<std::size_t>(k)];
    return;
  }
  std::vector<cplx> A(static_cast<std::size_t>(D_ + 1)), B(static_cast<std::size_t>(D_ + 1));
  A[0] = B[0] = 1.0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(D_); ++k) {
    A[k] = A[k - 1] * w[0] * step_[k];
    B[k] = B[k - 1] * w[1] * step_[k];
  }
  for (std::size_t j = 0; j < index_.size(); ++j) {
    const auto& m = index_[j];
    out[j] = growth_[static_cast<std::size_t>(total_[j])] * A[static_cast<std::size_t>(m[0])] *
             B[static_cast<std::size_t>(m[1])];
  }
}

Eigen::VectorXcd MonomialBasis::values(const Point& w) const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(size()));
  values(w, v.data());
  return v;
}

MonomialBasis monomial_basis(const SpaceDescriptor& space, int D) { return MonomialBasis(space, D); }

Eigen::VectorXcd kernel_coefficients(const SpaceDescriptor& space, const Point& z, int D) {
  require_domain(space, z);
  const MonomialBasis basis(space, D);
  Eigen::VectorXcd v = basis.values(z).conjugate();
  return v * std::exp(-log_kernel_norm(space, z));
}

double kernel_coefficient_tail(const SpaceDescriptor& space, const Point& z, int D) {
  require_domain(space, z);
  if (D < 0) throw ValidationError("degree must be nonnegative");
  const double x = z.norm2();
  if (x == 0.0) return 0.0;
  const int n = space.n;
  // Mass of k_z in total degree d: Bergman gap^{n+1} C(n+d, d) x^d, Fock Poisson(alpha x).
  auto log_term = [&](int d) {
    if (space.is_bergman()) {
      return (n + 1) * std::log(z.gap()) + std::lgamma(n + d + 1.0) - std::lgamma(n + 1.0) - std::lgamma(d + 1.0) +
             d * std::log(x);
    }
    const double m = space.alpha * x;
    return -m + d * std::log(m) - std::lgamma(d + 1.0);
  };
  double head = 0.0;
  for (int d = 0; d <= D; ++d) head += std::exp(log_term(d));
  double tail2 = 1.0 - head;
  if (tail2 < 1e-3) {
    // Sum the tail directly; terms decay geometrically once past the mode.
    double s = 0.0;
    for (int d = D + 1; d < D + 10000000; ++d) {
      const double t = std::exp(log_term(d));
      s += t;
      const bool past_mode = space.is_bergman() ? x * (n + d + 1.0) / (d + 1.0) < 1.0 : d > space.alpha * x;
      // Written so that underflow of t or of 1e-20 * s also ends the sum.
      if (past_mode && !(t > 1e-20 * s)) break;
    }
    tail2 = s;
  }
  return std::sqrt(std::max(0.0, tail2));
}

struct TruncatedOperator::Cache {
  std::once_flag once;
  double norm = 0.0;
};

TruncatedOperator::TruncatedOperator(const SpaceDescriptor& space, int D, Eigen::MatrixXcd matrix,
                                     std::string provenance)
    : space_(space), D_(D), matrix_(std::move(matrix)), provenance_(std::move(provenance)),
      cache_(std::make_shared<Cache>()) {
  space_.validate();
  const auto m = static_cast<Eigen::Index>(basis_size(space_.n, D));
  if (matrix_.rows() != m || matrix_.cols() != m) {
    throw ValidationError("operator matrix must be " + std::to_string(m) + " x " + std::to_string(m));
  }
  if (!matrix_.allFinite()) throw NumericalError("operator matrix has non-finite entries");
}

TruncatedOperator TruncatedOperator::identity(const SpaceDescriptor& space, int D) {
  const auto m = static_cast<Eigen::Index>(basis_size(space.n, D));
  return TruncatedOperator(space, D, Eigen::MatrixXcd::Identity(m, m), "identity");
}

TruncatedOperator TruncatedOperator::zero(const SpaceDescriptor& space, int D) {
  const auto m = static_cast<Eigen::Index>(basis_size(space.n, D));
  return TruncatedOperator(space, D, Eigen::MatrixXcd::Zero(m, m), "zero");
}

double TruncatedOperator::norm() const {
  std::call_once(cache_->once, [this] { cache_->norm = operator_norm(*this); });
  return cache_->norm;
}

namespace {

Eigen::MatrixXcd radial_toeplitz(const SpaceDescriptor& space, const Symbol& u, const MonomialBasis& basis) {
  const int D = basis.degree();
  const int n = space.n;
  std::vector<double> entry(static_cast<std::size_t>(D + 1), 0.0);
  if (space.is_bergman()) {
    // <u e_m, e_m> = (n + |m|) int_0^1 u(sqrt t) t^{|m| + n - 1} dt.
    std::vector<double> breaks;
    for (double b : u.breakpoints()) breaks.push_back(b * b);
    const Rule1D q = composite_gauss_legendre(0.0, 1.0, breaks, std::max(8, D / 4 + 8), 24);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double t = q.x[i];
      const double wu = q.w[i] * u.checked_radial(std::sqrt(t));
      double pw = std::pow(t, n - 1);
      for (int d = 0; d <= D; ++d) {
        entry[static_cast<std::size_t>(d)] += wu * pw;
        pw *= t;
      }
    }
    for (int d = 0; d <= D; ++d) entry[static_cast<std::size_t>(d)] *= (n + d);
  } else {
    // <u e_m, e_m> = int_0^inf u(sqrt(tau / alpha)) tau^{|m| + n - 1} e^{-tau} / (|m| + n - 1)! d tau.
    const double tau_max = 2.0 * (D + n) + 80.0;
    std::vector<double> breaks;
    for (double b : u.breakpoints()) breaks.push_back(space.alpha * b * b);
    const Rule1D q = composite_gauss_legendre(0.0, tau_max, breaks, static_cast<int>(std::ceil(tau_max / 2.0)), 16);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double tau = q.x[i];
      const double wu = q.w[i] * u.checked_radial(std::sqrt(tau / space.alpha));
      const double lt = std::log(tau);
      for (int d = 0; d <= D; ++d) {
        const int k = d + n - 1;
        entry[static_cast<std::size_t>(d)] += wu * std::exp(k * lt - tau - std::lgamma(k + 1.0));
      }
    }
  }
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) M(j, j) = entry[static_cast<std::size_t>(basis.total_degree(static_cast<std::size_t>(j)))];
  return M;
}

void check_rule(const SpaceDescriptor& space, const QuadratureRule& rule) {
  if (rule.centered()) throw ValidationError("toeplitz needs an uncentered rule");
  if (rule.spec.n != space.n) throw ValidationError("toeplitz: rule dimension does not match the space");
  const Measure want = space.is_bergman() ? Measure::ball_lebesgue : Measure::plane_gaussian;
  if (rule.spec.measure != want) {
    throw ValidationError("toeplitz: rule measure must be " + to_string(want) + ", got " + to_string(rule.spec.measure));
  }
  if (!space.is_bergman() && rule.spec.alpha != space.alpha) throw ValidationError("toeplitz: rule alpha differs from the space");
}

Eigen::MatrixXcd ring_toeplitz(const SpaceDescriptor& space, const Symbol& u, const MonomialBasis& basis,
                               const QuadratureRule& rule) {
  const int D = basis.degree();
  const int M = rule.per_ring;
  if (rule.spec.angular != AngularScheme::trapezoid || M <= 2 * D) {
    throw ValidationError("toeplitz: general symbols need a trapezoid angular rule with more than 2D = " +
                          std::to_string(2 * D) + " nodes");
  }
  const std::size_t rings = static_cast<std::size_t>(rule.rings);
  const std::size_t m = basis.size();
  const std::size_t nq = static_cast<std::size_t>(2 * D + 1);
  std::vector<double> W(rings), E(rings * m);
  std::vector<cplx> uhat(rings * nq);
  detail::parallel_for(rings, [&](std::size_t i) {
    const std::size_t base = i * static_cast<std::size_t>(M);
    double wsum = 0.0;
    std::vector<cplx> vals(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
      const std::size_t idx = base + static_cast<std::size_t>(j);
      wsum += rule.weights[idx];
      vals[static_cast<std::size_t>(j)] = u.checked(rule.nodes[idx]);
    }
    W[i] = wsum;
    // uhat_q = (1/M) sum_j u_j e^{-i q theta_j}, q = -D..D.
    for (int q = -D; q <= D; ++q) {
      const cplx step = std::polar(1.0, -2.0 * kPi * q / M);
      cplx rot = 1.0, acc = 0.0;
      for (int j = 0; j < M; ++j) {
        acc += vals[static_cast<std::size_t>(j)] * rot;
        rot *= step;
        if ((j & 63) == 63) rot = std::polar(1.0, -2.0 * kPi * q * (j + 1.0) / M);
      }
      uhat[i * nq + static_cast<std::size_t>(q + D)] = acc / static_cast<double>(M);
    }
    const double r = space.is_bergman() ? std::sqrt(std::max(0.0, 1.0 - rule.ring_radial[i]))
                                        : std::sqrt(rule.ring_radial[i]);
    std::vector<cplx> e(m);
    basis.values(Point(cplx(r)), e.data());
    for (std::size_t k = 0; k < m; ++k) E[i * m + k] = e[k].real();
  });
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  detail::parallel_for(m, [&](std::size_t k) {
    for (std::size_t j = 0; j < m; ++j) {
      cplx acc = 0.0;
      const std::size_t q = static_cast<std::size_t>(static_cast<int>(k) - static_cast<int>(j) + D);
      for (std::size_t i = 0; i < rings; ++i) acc += W[i] * E[i * m + j] * E[i * m + k] * uhat[i * nq + q];
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = acc;
    }
  });
  return out;
}

Eigen::MatrixXcd product_toeplitz(const Symbol& u, const MonomialBasis& basis, const QuadratureRule& rule) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  constexpr std::size_t kChunk = 2048;
  const std::size_t N = rule.size();
  for (std::size_t start = 0; start < N; start += kChunk) {
    const std::size_t len = std::min(kChunk, N - start);
    Eigen::MatrixXcd E(static_cast<Eigen::Index>(len), m);
    Eigen::VectorXcd wu(static_cast<Eigen::Index>(len));
    detail::parallel_for(len, [&](std::size_t i) {
      const Point& z = rule.nodes[start + i];
      Eigen::VectorXcd v = basis.values(z);
      E.row(static_cast<Eigen::Index>(i)) = v.transpose();
      wu(static_cast<Eigen::Index>(i)) = rule.weights[start + i] * u.checked(z);
    });
    out.noalias() += E.adjoint() * (wu.asDiagonal() * E);
  }
  return out;
}

}  // namespace

TruncatedOperator toeplitz(const SpaceDescriptor& space, const Symbol& u, int D, const QuadratureRule& rule) {
  check_rule(space, rule);
  const MonomialBasis basis(space, D);
  Eigen::MatrixXcd M;
  if (u.is_radial()) {
    M = radial_toeplitz(space, u, basis);
  } else {
    M = space.n == 1 ? ring_toeplitz(space, u, basis, rule) : product_toeplitz(u, basis, rule);
  }
  return TruncatedOperator(space, D, std::move(M), "toeplitz(" + u.label() + ")");
}

Correlation correlation(const TruncatedOperator& T, const Point& z, const Point& w) {
  const Eigen::VectorXcd a = kernel_coefficients(T.space(), z, T.degree());
  const Eigen::VectorXcd b = kernel_coefficients(T.space(), w, T.degree());
  Correlation c;
  c.value = b.dot(T.matrix() * a);
  c.error_bar = T.norm() * (kernel_coefficient_tail(T.space(), z, T.degree()) +
                            kernel_coefficient_tail(T.space(), w, T.degree()));
  return c;
}

Correlation berezin(const TruncatedOperator& T, const Point& z) { return correlation(T, z, z); }

CorrelationEvaluator::CorrelationEvaluator(const TruncatedOperator& T, const Point& z, bool adjoint)
    : basis_(std::make_shared<const MonomialBasis>(T.space(), T.degree())), space_(T.space()) {
  const Eigen::VectorXcd a = kernel_coefficients(T.space(), z, T.degree());
  v_ = adjoint ? Eigen::VectorXcd(T.matrix().adjoint() * a) : Eigen::VectorXcd(T.matrix() * a);
}

cplx CorrelationEvaluator::operator()(const Point& w) const {
  // conj(<k_w, e_k>) = e_k(w) / ||K_w||.
  const std::size_t m = basis_->size();
  thread_local std::vector<cplx> buf;
  if (buf.size() < m) buf.resize(m);
  cplx* e = buf.data();
  basis_->values(w, e);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) acc += e[k] * v_(static_cast<Eigen::Index>(k));
  return acc * std::exp(-log_kernel_norm(space_, w));
}

TruncatedOperator compose(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_same(A, B, "compose");
  return TruncatedOperator(A.space(), A.degree(), A.matrix() * B.matrix(),
                           "compose(" + A.provenance() + ", " + B.provenance() + ")");
}

TruncatedOperator adjoint(const TruncatedOperator& A) {
  return TruncatedOperator(A.space(), A.degree(), A.matrix().adjoint(), "adjoint(" + A.provenance() + ")");
}

TruncatedOperator combine(cplx c1, const TruncatedOperator& A, cplx c2, const TruncatedOperator& B) {
  require_same(A, B, "combine");
  char buf[128];
  std::snprintf(buf, sizeof buf, "combine((%.17g%+.17gi), ", c1.real(), c1.imag());
  std::string prov = buf + A.provenance();
  std::snprintf(buf, sizeof buf, ", (%.17g%+.17gi), ", c2.real(), c2.imag());
  prov += buf + B.provenance() + ")";
  return TruncatedOperator(A.space(), A.degree(), c1 * A.matrix() + c2 * B.matrix(), prov);
}

TruncatedOperator leading_block(const TruncatedOperator& A, int d) {
  if (d < 0 || d > A.degree()) throw ValidationError("leading_block: degree out of range");
  const auto m = static_cast<Eigen::Index>(basis_size(A.space().n, d));
  return TruncatedOperator(A.space(), d, A.matrix().topLeftCorner(m, m), A.provenance());
}

Eigen::VectorXd singular_values(const TruncatedOperator& T) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix());
  if (svd.info() != Eigen::Success) throw NumericalError("singular value decomposition did not converge");
  return svd.singularValues();
}

double operator_norm(const TruncatedOperator& T) {
  const Eigen::VectorXd s = singular_values(T);
  return s.size() ? s(0) : 0.0;
}

}  // namespace locomp
