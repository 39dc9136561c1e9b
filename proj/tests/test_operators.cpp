#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "locomp/errors.hpp"
#include "locomp/kernels.hpp"
#include "locomp/operators.hpp"
#include "locomp/quadrature.hpp"
#include "locomp/symbols.hpp"
#include "test_util.hpp"

using namespace locomp;
using locomp::testing::random_ball_point;
using locomp::testing::random_plane_point;

namespace {

// Non-radial wrapper, forcing the quadrature path.
Symbol as_general(const Symbol& s) {
  return Symbol([s](const Point& z) { return s(z); }, s.sup_bound(), s.label() + "/general");
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

TEST(Basis, MatchesExplicitMonomials) {
  std::mt19937_64 rng(1);
  for (const SpaceDescriptor& s : {SpaceDescriptor::bergman(2), SpaceDescriptor::fock(2, 2.0, 0.7)}) {
    const MonomialBasis b(s, 12);
    ASSERT_EQ(b.size(), basis_size(2, 12));
    EXPECT_EQ(b.size(), 91u);
    const Point w = s.is_bergman() ? random_ball_point(rng, 2) : random_plane_point(rng, 2);
    const Eigen::VectorXcd v = b.values(w);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto m = b.multi_index(j);
      const int k = m[0] + m[1];
      const double c2 = s.is_bergman() ? factorial(2 + k) / (2.0 * factorial(m[0]) * factorial(m[1]))
                                       : std::pow(0.7, k) / (factorial(m[0]) * factorial(m[1]));
      const cplx expect = std::sqrt(c2) * std::pow(w[0], m[0]) * std::pow(w[1], m[1]);
      ASSERT_NEAR(std::abs(v(static_cast<Eigen::Index>(j)) - expect), 0.0, 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(Basis, PrefixAndLimits) {
  const MonomialBasis b(SpaceDescriptor::bergman(2), 5);
  EXPECT_EQ(b.prefix(0), 1u);
  EXPECT_EQ(b.prefix(2), 6u);
  EXPECT_EQ(b.prefix(5), b.size());
  EXPECT_THROW(MonomialBasis(SpaceDescriptor::bergman(2), 121), ValidationError);
  EXPECT_THROW(MonomialBasis(SpaceDescriptor::bergman(1), -1), ValidationError);
}

TEST(KernelCoefficients, HeadPlusTailIsOne) {
  std::mt19937_64 rng(2);
  for (const SpaceDescriptor& s : {SpaceDescriptor::bergman(1), SpaceDescriptor::bergman(2), SpaceDescriptor::fock(1),
                                   SpaceDescriptor::fock(2)}) {
    for (int i = 0; i < 10; ++i) {
      const Point z = s.is_bergman() ? random_ball_point(rng, s.n, 0.9) : random_plane_point(rng, s.n, 1.5);
      const int D = 40;
      const double head = kernel_coefficients(s, z, D).squaredNorm();
      const double tail = kernel_coefficient_tail(s, z, D);
      ASSERT_NEAR(head + tail * tail, 1.0, 1e-12);
    }
  }
  // Bergman n = 1: ||Q_D k_z||^2 = x^{D+1} ((D + 2) - (D + 1) x), x = |z|^2.
  const Point z(cplx(0.6, 0.3));
  const double x = z.norm2();
  EXPECT_NEAR(kernel_coefficient_tail(SpaceDescriptor::bergman(1), z, 30), std::sqrt(std::pow(x, 31) * (32 - 31 * x)),
              1e-15);
}

TEST(Toeplitz, RadialDiagonals) {
  const QuadratureRule ball = build_ball_rule(1, 64, 64, 1.0);
  const auto B = SpaceDescriptor::bergman(1);
  const TruncatedOperator T = toeplitz(B, builtin_symbol("abs2"), 30, ball);
  for (int k = 0; k <= 30; ++k) EXPECT_NEAR(T.matrix()(k, k).real(), (k + 1.0) / (k + 2.0), 1e-13);
  EXPECT_NEAR((T.matrix() - Eigen::MatrixXcd(T.matrix().diagonal().asDiagonal())).norm(), 0.0, 1e-14);
  EXPECT_NEAR(T.norm(), 31.0 / 32.0, 1e-13);

  const auto F = SpaceDescriptor::fock(1);
  const QuadratureRule plane = build_plane_rule(1, 1.0, 8.0, 64, 64);
  const TruncatedOperator S = toeplitz(F, builtin_symbol("abs2", {{"bound", 1e6}}), 30, plane);
  for (int k = 0; k <= 30; ++k) EXPECT_NEAR(S.matrix()(k, k).real(), k + 1.0, 1e-11 * (k + 1));

  const auto F2 = SpaceDescriptor::fock(1, 2.0, 0.5);
  const TruncatedOperator S2 = toeplitz(F2, builtin_symbol("abs2", {{"bound", 1e6}}), 10, build_plane_rule(1, 0.5, 12.0, 64, 64));
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(S2.matrix()(k, k).real(), (k + 1.0) / 0.5, 1e-11 * (k + 1));
}

TEST(Toeplitz, RadialDiagonalsTwoDimensions) {
  const auto B = SpaceDescriptor::bergman(2);
  const QuadratureRule ball = build_ball_rule(2, 32, 32, 1.0);
  const TruncatedOperator T = toeplitz(B, builtin_symbol("abs2"), 10, ball);
  const MonomialBasis b(B, 10);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double k = b.total_degree(j);
    EXPECT_NEAR(T.matrix()(j, j).real(), (2.0 + k) / (3.0 + k), 1e-13);
  }
}

TEST(Toeplitz, ConstantIsIdentity) {
  const QuadratureRule ball = build_ball_rule(1, 64, 64, 1.0);
  const QuadratureRule plane = build_plane_rule(1, 1.0, 8.0, 64, 64);
  for (const auto& [s, rule] : {std::pair{SpaceDescriptor::bergman(1), ball}, std::pair{SpaceDescriptor::fock(1), plane}}) {
    const TruncatedOperator T = toeplitz(s, builtin_symbol("constant"), 20, rule);
    EXPECT_NEAR((T.matrix() - TruncatedOperator::identity(s, 20).matrix()).norm(), 0.0, 1e-12);
  }
}

TEST(Toeplitz, AngularSymbolOffDiagonal) {
  // u = e^{i theta} (1 - r^2)^2: <u e_j, e_{j+1}> = sqrt((j+1)(j+2)) B(j + 3/2, 3).
  const auto B = SpaceDescriptor::bergman(1);
  // Odd angular modes behave like sqrt(1 - s) at the origin, which limits the radial rule to about 1e-7 here.
  const QuadratureRule ball = build_ball_rule(1, 80, 64, 1.0);
  const int D = 20;
  const TruncatedOperator T = toeplitz(B, builtin_symbol("angular"), D, ball);
  for (int k = 0; k <= D; ++k) {
    for (int j = 0; j <= D; ++j) {
      double expect = 0.0;
      if (k == j + 1) {
        const double beta = std::exp(std::lgamma(j + 1.5) + std::lgamma(3.0) - std::lgamma(j + 4.5));
        expect = std::sqrt((j + 1.0) * (j + 2.0)) * beta;
      }
      ASSERT_NEAR(std::abs(T.matrix()(k, j) - expect), 0.0, 1e-6) << k << "," << j;
    }
  }
}

TEST(Toeplitz, GeneralPathAgreesWithRadialPath) {
  const Symbol step = builtin_symbol("radial_bump");
  {
    const auto B = SpaceDescriptor::bergman(1);
    const QuadratureRule ball = build_ball_rule(1, 400, 64, 1.0);
    const TruncatedOperator a = toeplitz(B, step, 20, ball), b = toeplitz(B, as_general(step), 20, ball);
    EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-6);
  }
  {
    const auto B = SpaceDescriptor::bergman(2);
    const QuadratureRule ball = build_ball_rule(2, 200, 24, 1.0);
    const TruncatedOperator a = toeplitz(B, step, 6, ball), b = toeplitz(B, as_general(step), 6, ball);
    EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-6);
  }
  {
    const auto F = SpaceDescriptor::fock(1);
    const Symbol g = builtin_symbol("gaussian_decay");
    const QuadratureRule plane = build_plane_rule(1, 1.0, 9.0, 200, 64);
    const TruncatedOperator a = toeplitz(F, g, 20, plane), b = toeplitz(F, as_general(g), 20, plane);
    EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-8);
  }
}

TEST(Toeplitz, RejectsBadInputs) {
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule ball = build_ball_rule(1, 64, 16, 1.0);
  EXPECT_THROW(toeplitz(B, builtin_symbol("angular"), 20, ball), ValidationError);  // 16 <= 2D
  EXPECT_THROW(toeplitz(B, builtin_symbol("constant"), 5, centered_rule(ball, Point(cplx(0.5)), 0.0)), ValidationError);
  const Symbol liar = Symbol([](const Point& z) { return cplx(2.0 * z.norm()); }, 1.0, "liar");
  EXPECT_THROW(toeplitz(B, liar, 5, build_ball_rule(1, 64, 64, 1.0)), ValidationError);
  EXPECT_THROW(toeplitz(SpaceDescriptor::fock(1), builtin_symbol("constant"), 5, ball), ValidationError);
}

TEST(Algebra, CompositionAndNorms) {
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule ball = build_ball_rule(1, 64, 64, 1.0);
  const TruncatedOperator T = toeplitz(B, builtin_symbol("abs2"), 30, ball);
  const TruncatedOperator TT = compose(T, T);
  EXPECT_NEAR(TT.matrix()(0, 0).real(), 0.25, 1e-14);
  EXPECT_NEAR(operator_norm(TT), std::pow(31.0 / 32.0, 2), 1e-13);
  const TruncatedOperator diff = combine(1.0, T, -1.0, adjoint(T));
  EXPECT_NEAR(diff.norm(), 0.0, 1e-14);
  const Eigen::VectorXd sv = singular_values(leading_block(T, 3));
  ASSERT_EQ(sv.size(), 4);
  EXPECT_NEAR(sv(0), 4.0 / 5.0, 1e-14);
  EXPECT_NEAR(sv(3), 1.0 / 2.0, 1e-14);
  EXPECT_THROW(compose(T, TruncatedOperator::identity(B, 10)), ValidationError);
  EXPECT_THROW(compose(T, TruncatedOperator::identity(SpaceDescriptor::fock(1), 30)), ValidationError);
  EXPECT_NE(diff.provenance().find("adjoint"), std::string::npos);
}

TEST(Correlation, IdentityMatchesClosedForm) {
  std::mt19937_64 rng(3);
  for (const SpaceDescriptor& s : {SpaceDescriptor::bergman(1), SpaceDescriptor::bergman(2), SpaceDescriptor::fock(1),
                                   SpaceDescriptor::fock(2)}) {
    const int D = s.n == 1 ? 120 : 60;
    const TruncatedOperator I = TruncatedOperator::identity(s, D);
    for (int i = 0; i < 20; ++i) {
      const Point z = s.is_bergman() ? random_ball_point(rng, s.n, 0.8) : random_plane_point(rng, s.n, 1.2);
      const Point w = s.is_bergman() ? random_ball_point(rng, s.n, 0.8) : random_plane_point(rng, s.n, 1.2);
      const Correlation c = correlation(I, z, w);
      const cplx exact = correlation_closed_form(s, z, w);
      ASSERT_LE(std::abs(c.value - exact), c.error_bar + 1e-13);
      ASSERT_LT(c.error_bar, 1e-3);
    }
  }
}

TEST(Correlation, BerezinOfRadialSymbolMatchesQuadrature) {
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule ball = build_ball_rule(1, 200, 128, 1.0);
  const Symbol u = builtin_symbol("radial_bump");
  const TruncatedOperator T = toeplitz(B, u, 120, ball);
  for (double r : {0.0, 0.3, 0.6}) {
    const Point z(cplx(r, 0.1));
    const KernelVector k = normalized_kernel(B, z);
    const double direct = integrate_real([&](const Point& w) { return u(w).real() * std::norm(k(w)); }, ball);
    const Correlation c = berezin(T, z);
    EXPECT_LE(std::abs(c.value.real() - direct), c.error_bar + 1e-9) << r;
  }
}

TEST(Correlation, EvaluatorAgreesWithDirect) {
  std::mt19937_64 rng(4);
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule ball = build_ball_rule(1, 64, 64, 1.0);
  const TruncatedOperator T = toeplitz(B, builtin_symbol("angular"), 25, ball);
  const Point z = random_ball_point(rng, 1, 0.7);
  const CorrelationEvaluator ev(T, z), ev_adj(T, z, true);
  for (int i = 0; i < 20; ++i) {
    const Point w = random_ball_point(rng, 1, 0.7);
    ASSERT_NEAR(std::abs(ev(w) - correlation(T, z, w).value), 0.0, 1e-13);
    ASSERT_NEAR(std::abs(ev_adj(w) - correlation(adjoint(T), z, w).value), 0.0, 1e-13);
    ASSERT_NEAR(ev.modulus(w), std::abs(ev(w)), 1e-15);
  }
}
