#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "locomp/errors.hpp"
#include "locomp/geometry.hpp"
#include "locomp/kernels.hpp"
#include "locomp/quadrature.hpp"
#include "test_util.hpp"

using namespace locomp;
using locomp::testing::random_ball_point;
using locomp::testing::random_plane_point;

namespace {
const double kE = std::numbers::e;
}

TEST(Kernels, BergmanExamples) {
  const auto B = SpaceDescriptor::bergman(1);
  EXPECT_NEAR(std::abs(kernel_eval(B, Point(cplx(0.0)), Point(cplx(0.3, 0.6))) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(kernel_eval(B, Point(cplx(0.5)), Point(cplx(0.5))) - 16.0 / 9.0), 0.0, 1e-14);
  EXPECT_NEAR(kernel_norm(B, Point(cplx(0.0))), 1.0, 1e-15);
  EXPECT_NEAR(kernel_norm(B, Point(cplx(0.5))), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(std::abs(correlation_closed_form(B, Point(cplx(0.0)), Point(cplx(0.5))) - 0.75), 0.0, 1e-15);
}

TEST(Kernels, FockExamples) {
  const auto F = SpaceDescriptor::fock(1);
  EXPECT_NEAR(std::abs(kernel_eval(F, Point(cplx(1.0)), Point(cplx(1.0))) - kE), 0.0, 1e-14);
  EXPECT_NEAR(kernel_norm(F, Point(cplx(2.0))), kE * kE, 1e-13);
  EXPECT_NEAR(std::abs(correlation_closed_form(F, Point(cplx(0.0)), Point(cplx(1.0)))), std::exp(-0.5), 1e-15);
}

TEST(Kernels, UnitDiagonal) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point z = random_ball_point(rng, 2);
    EXPECT_NEAR(std::abs(correlation_closed_form(SpaceDescriptor::bergman(2), z, z) - 1.0), 0.0, 1e-13);
    const Point x = random_plane_point(rng, 1);
    EXPECT_NEAR(std::abs(correlation_closed_form(SpaceDescriptor::fock(1), x, x) - 1.0), 0.0, 1e-13);
  }
}

TEST(Kernels, MobiusCorrelationIdentity) {
  for (int n : {1, 2}) {
    const auto B = SpaceDescriptor::bergman(n);
    std::mt19937_64 rng(100 + n);
    for (int i = 0; i < 1000; ++i) {
      const Point z = random_ball_point(rng, n, 0.99), w = random_ball_point(rng, n, 0.99);
      const double lhs = std::abs(correlation_closed_form(B, z, w)) * kernel_norm(B, mobius_map(z, w));
      ASSERT_NEAR(lhs, 1.0, 1e-10);
    }
  }
}

TEST(Kernels, FockModulusLaw) {
  for (double alpha : {1.0, 0.7}) {
    const auto F = SpaceDescriptor::fock(2, 2.0, alpha);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
      const Point z = random_plane_point(rng, 2), w = random_plane_point(rng, 2);
      const double d = distance(z, w);
      const double c = std::abs(correlation_closed_form(F, z, w));
      ASSERT_NEAR(c, std::exp(-0.5 * alpha * d * d), 1e-12);
      if (d >= 1.0) ASSERT_LE(c, std::exp(-0.25 * alpha * d));
    }
  }
}

TEST(Kernels, HermitianSymmetry) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const Point z = random_ball_point(rng, 2), w = random_ball_point(rng, 2);
    const auto B = SpaceDescriptor::bergman(2);
    const cplx a = kernel_eval(B, z, w), b = std::conj(kernel_eval(B, w, z));
    ASSERT_LE(std::abs(a - b), 1e-14 * std::abs(a));
    const Point x = random_plane_point(rng, 1), y = random_plane_point(rng, 1);
    const auto F = SpaceDescriptor::fock(1);
    const cplx c = kernel_eval(F, x, y), d = std::conj(kernel_eval(F, y, x));
    ASSERT_LE(std::abs(c - d), 1e-14 * std::abs(c));
  }
}

TEST(Kernels, DomainViolations) {
  const auto B = SpaceDescriptor::bergman(1);
  EXPECT_THROW(kernel_eval(B, Point(cplx(1.0)), Point(cplx(0.0))), DomainError);
  EXPECT_THROW(kernel_norm(B, Point(cplx(0.0), cplx(0.1))), DomainError);
  EXPECT_THROW(kernel_eval(SpaceDescriptor::fock(1), Point(cplx(NAN)), Point(cplx(0.0))), DomainError);
  EXPECT_THROW(kernel_norm(SpaceDescriptor::fock(1), Point(cplx(40.0))), NumericalError);
  EXPECT_THROW(SpaceDescriptor::bergman(1, 1.0), ValidationError);
  EXPECT_THROW(SpaceDescriptor::fock(1, 2.0, 0.0), ValidationError);
}

TEST(Kernels, PNormalized) {
  const auto B4 = SpaceDescriptor::bergman(1, 4.0);
  const Point z(cplx(0.5));
  const KernelVector k = p_normalized_kernel(B4, z);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const Point w = random_ball_point(rng, 1);
    const cplx expect = std::pow(0.75, 1.5) * std::pow(1.0 - 0.5 * w[0], -2.0);
    ASSERT_NEAR(std::abs(k(w) - expect), 0.0, 1e-13);
  }
  const auto B2 = SpaceDescriptor::bergman(2, 2.0);
  const Point z2(cplx(0.3, 0.1), cplx(-0.2, 0.4));
  for (int i = 0; i < 20; ++i) {
    const Point w = random_ball_point(rng, 2);
    ASSERT_NEAR(std::abs(p_normalized_kernel(B2, z2)(w) - normalized_kernel(B2, z2)(w)), 0.0, 1e-14);
  }
  EXPECT_NEAR(std::abs(p_normalized_kernel(SpaceDescriptor::bergman(1), Point(cplx(0.0)))(Point(cplx(0.7))) - 1.0),
              0.0, 1e-15);
  EXPECT_NEAR(normalized_kernel(B2, z2).l2_norm(), 1.0, 1e-15);
}

TEST(Kernels, PNormalizedNormIsOrderOne) {
  const QuadratureRule base = build_ball_rule(1, 200, 128, 1.0);
  for (double p : {4.0 / 3.0, 2.0, 4.0}) {
    const auto B = SpaceDescriptor::bergman(1, p);
    for (double r : {0.0, 0.5, 0.8, 0.95}) {
      const Point z{cplx(r)};
      const KernelVector k = p_normalized_kernel(B, z);
      const QuadratureRule rule = centered_rule(base, z, 0.0);
      const double norm_p = integrate_real([&](const Point& w) { return std::pow(std::abs(k(w)), p); }, rule);
      EXPECT_GE(norm_p, 0.2) << "p=" << p << " r=" << r;
      EXPECT_LE(norm_p, 5.0) << "p=" << p << " r=" << r;
      if (p == 2.0) EXPECT_NEAR(norm_p, 1.0, 1e-8);
    }
  }
}

TEST(Translate, Trivial) {
  const auto F = SpaceDescriptor::fock(1);
  const Function f = [](const Point& w) { return w[0] * w[0] + 1.0; };
  const Function U0 = translate(F, Point(cplx(0.0)), 2.0, f);
  const Point w(cplx(0.4, -1.1));
  EXPECT_NEAR(std::abs(U0(w) - f(Point(-w[0]))), 0.0, 1e-14);

  const auto B = SpaceDescriptor::bergman(1);
  const Point z(cplx(0.3, 0.5));
  const Function one = [](const Point&) { return cplx(1.0); };
  const Function Uz = translate(B, z, 2.0, one);
  EXPECT_NEAR(std::abs(Uz(w.norm() < 1 ? w : Point(cplx(0.2))) - normalized_kernel(B, z)(Point(cplx(0.2)))), 0.0,
              1e-14);
}

TEST(Translate, BergmanModulusLaw) {
  for (int n : {1, 2}) {
    const auto B = SpaceDescriptor::bergman(n);
    std::mt19937_64 rng(17 + n);
    for (int i = 0; i < 200; ++i) {
      const Point z = random_ball_point(rng, n, 0.9), w = random_ball_point(rng, n, 0.9), u = random_ball_point(rng, n);
      const KernelVector kw = normalized_kernel(B, w);
      const Function Uz = translate(B, z, 2.0, [&kw](const Point& x) { return kw(x); });
      const double expect = std::abs(normalized_kernel(B, mobius_map(z, w))(u));
      ASSERT_NEAR(std::abs(Uz(u)), expect, 1e-10 * std::max(1.0, expect));
    }
  }
}

TEST(Translate, FockModulusLaw) {
  const auto F = SpaceDescriptor::fock(1);
  std::mt19937_64 rng(19);
  const Point z(cplx(0.7, -0.4)), w(cplx(-1.2, 0.3));
  const KernelVector kw = normalized_kernel(F, w);
  const Function Uz = translate(F, z, 2.0, [&kw](const Point& x) { return kw(x); });
  const KernelVector kzw = normalized_kernel(F, z - w);
  for (int i = 0; i < 50; ++i) {
    const Point u = random_plane_point(rng, 1, 3.0);
    ASSERT_NEAR(std::abs(Uz(u)), std::abs(kzw(u)), 1e-12 * std::abs(kzw(u)) + 1e-15);
  }
}

TEST(Translate, IsometryByQuadrature) {
  const QuadratureRule rule = build_ball_rule(1, 200, 128, 1.0);
  const Function f = [](const Point& w) { return 3.0 + w[0] - 0.5 * w[0] * w[0] * w[0]; };
  for (double p : {4.0 / 3.0, 2.0, 4.0}) {
    const auto B = SpaceDescriptor::bergman(1, p);
    const Point z(cplx(0.4, 0.3));
    const Function Uz = translate(B, z, p, f);
    const double lhs = integrate_real([&](const Point& w) { return std::pow(std::abs(Uz(w)), p); }, rule);
    const double rhs = integrate_real([&](const Point& w) { return std::pow(std::abs(f(w)), p); }, rule);
    EXPECT_NEAR(lhs, rhs, 1e-8 * rhs) << "p=" << p;
  }
  // Fock: |U_z f| e^{-alpha|w|^2/2} is a translate of |f| e^{-alpha|w|^2/2}.
  const auto F = SpaceDescriptor::fock(1);
  const QuadratureRule plane = build_plane_rule(1, 1.0, 12.0, 200, 128, Measure::plane_lebesgue);
  const Point z(cplx(1.0, -0.5));
  const Function Uz = translate(F, z, 2.0, f);
  auto weighted = [](const Function& g) {
    return [g](const Point& w) { return std::pow(std::abs(g(w)) * std::exp(-0.5 * w.norm2()), 3.0); };
  };
  const double lhs = integrate_real(weighted(Uz), plane);
  const double rhs = integrate_real(weighted(f), plane);
  EXPECT_NEAR(lhs, rhs, 1e-8 * rhs);
}

TEST(Translate, PrincipalBranchIsContinuous) {
  // 1 - <w, z> has positive real part on the ball, so k_z(w)^{2/p} varies continuously.
  const auto B = SpaceDescriptor::bergman(1, 3.0);
  const Point z(cplx(-0.95, 0.01));
  const Function one = [](const Point&) { return cplx(1.0); };
  const Function Uz = translate(B, z, 3.0, one);
  cplx prev = Uz(Point(std::polar(0.99, -3.14159)));
  for (int k = -3141; k <= 3141; ++k) {
    const cplx cur = Uz(Point(std::polar(0.99, k * 1e-3)));
    ASSERT_LT(std::abs(cur - prev), 0.05 * (std::abs(cur) + std::abs(prev)));
    prev = cur;
  }
}

TEST(Weights, GaussianInterface) {
  const GaussianWeight g(0.5);
  const Point z(cplx(1.0, 1.0)), w(cplx(0.5, -0.3));
  EXPECT_NEAR(g.phi(z), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(g.kernel(z, w) - kernel_eval(SpaceDescriptor::fock(1, 2.0, 0.5), z, w)), 0.0, 1e-14);
  const int m[] = {3};
  EXPECT_NEAR(g.monomial_norm2(m), 6.0 / 0.125, 1e-12);
}
