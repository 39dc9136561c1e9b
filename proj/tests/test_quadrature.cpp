#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "locomp/errors.hpp"
#include "locomp/kernels.hpp"
#include "locomp/quadrature.hpp"

using namespace locomp;

namespace {
const double kPi = std::numbers::pi;
}

TEST(BallRule, Examples) {
  const QuadratureRule r = build_ball_rule(1, 400, 256, 0.999);
  EXPECT_NEAR(integrate([](const Point&) { return cplx(1.0); }, r).real(), 0.998001, 1e-13);
  EXPECT_NEAR(std::abs(integrate([](const Point& z) { return z[0]; }, r)), 0.0, 1e-15);
  const QuadratureRule full = build_ball_rule(1, 400, 256, 1.0);
  EXPECT_NEAR(integrate([](const Point& z) { return cplx(z.norm2()); }, full).real(), 0.5, 1e-14);
}

TEST(BallRule, MassAndWeights) {
  for (int n : {1, 2}) {
    for (double rho : {0.5, 0.999, 1.0}) {
      const QuadratureRule r = build_ball_rule(n, 40, 16, rho);
      for (double w : r.weights) ASSERT_GT(w, 0.0);
      double sum = 0.0;
      for (double w : r.weights) sum += w;
      EXPECT_NEAR(sum, r.closed_form_mass, 1e-8);
      EXPECT_NEAR(r.closed_form_mass, std::pow(rho, 2 * n), 1e-14);
    }
  }
}

TEST(BallRule, PolynomialExactness) {
  // Radial moments int |z|^{2k} dv = n / (n + k).
  for (int n : {1, 2}) {
    const QuadratureRule r = build_ball_rule(n, 30, 8, 1.0);
    for (int k = 0; k < 2 * 30 - n; ++k) {
      const double got = integrate_real([k](const Point& z) { return std::pow(z.norm2(), k); }, r);
      const double expect = static_cast<double>(n) / (n + k);
      ASSERT_NEAR(got, expect, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(BallRule, SphereMoments) {
  // int |z_1|^2 |z_2|^2 dv over B_2 = 1! 1! 2! / 4! = 1/12.
  const QuadratureRule r = build_ball_rule(2, 20, 8, 1.0);
  EXPECT_NEAR(integrate_real([](const Point& z) { return std::norm(z[0]) * std::norm(z[1]); }, r), 1.0 / 12.0, 1e-14);
  EXPECT_NEAR(std::abs(integrate([](const Point& z) { return z[0] * std::conj(z[1]); }, r)), 0.0, 1e-15);
}

TEST(BallRule, InvariantMeasure) {
  // int (1 - |z|^2)^{n+1+b} d lambda = n! Gamma(b+1) / Gamma(n+b+1) ... for n = 1: 1 / (b + 1).
  RuleSpec s;
  s.measure = Measure::ball_invariant;
  s.radial = RadialScheme::double_exponential;
  s.radial_nodes = 120;
  s.angular_nodes = 8;
  const QuadratureRule r = build_rule(s);
  for (double b : {-0.7, -0.3, 0.0, 1.5}) {
    const double got = integrate_real([b](const Point& z) { return std::pow(z.gap(), 2.0 + b); }, r);
    EXPECT_NEAR(got, 1.0 / (b + 1.0), 1e-10) << b;
  }
}

TEST(BallRule, RefinementConvergence) {
  RuleSpec s;
  s.measure = Measure::ball_invariant;
  s.radial = RadialScheme::double_exponential;
  s.radial_nodes = 60;
  s.angular_nodes = 16;
  s.rho_max = 1.0 - 1e-6;
  auto f = [](const Point& z) { return std::pow(z.gap(), 1.5); };  // a = 0.5 integrand at z = 0
  const double coarse = integrate_real(f, build_rule(s));
  const double fine = integrate_real(f, build_rule(s.refined()));
  EXPECT_LT(std::abs(fine - coarse), 0.005 * std::abs(fine));
  // Truncation at rho_max = 1 - 1e-6 loses (1 - rho_max^2)^{1/2} / a.
  EXPECT_NEAR(fine, 2.0 * (1.0 - std::sqrt(1.0 - std::pow(1.0 - 1e-6, 2))), 1e-9);
}

TEST(PlaneRule, Examples) {
  const QuadratureRule r = build_plane_rule(1, 1.0, 8.0, 200, 128);
  EXPECT_NEAR(integrate([](const Point&) { return cplx(1.0); }, r).real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(integrate([](const Point& z) { return z[0]; }, r)), 0.0, 1e-14);
  EXPECT_NEAR(integrate([](const Point& z) { return cplx(z.norm2()); }, r).real(), 1.0, 1e-12);
  EXPECT_NEAR(r.truncation_bound, std::exp(-64.0), 1e-40);
}

TEST(PlaneRule, AlphaAndDimension) {
  const QuadratureRule r = build_plane_rule(2, 0.5, 10.0, 100, 8);
  EXPECT_NEAR(integrate_real([](const Point&) { return 1.0; }, r), 1.0 - std::exp(-50.0) * 51.0, 1e-12);
  // E|z|^2 = n / alpha.
  EXPECT_NEAR(integrate_real([](const Point& z) { return z.norm2(); }, r), 4.0, 1e-11);
  EXPECT_THROW(build_plane_rule(1, 0.0, 8.0, 10, 10), ValidationError);
  EXPECT_THROW(build_plane_rule(1, -1.0, 8.0, 10, 10), ValidationError);
}

TEST(Integrate, ZeroAndLinearity) {
  const QuadratureRule r = build_ball_rule(1, 40, 32, 1.0);
  EXPECT_EQ(integrate([](const Point&) { return cplx(0.0); }, r), cplx(0.0));
  auto f = [](const Point& z) { return std::exp(z[0]); };
  auto g = [](const Point& z) { return z.norm2() * cplx(0.0, 1.0); };
  const cplx lhs = integrate([&](const Point& z) { return 2.0 * f(z) - 3.0 * g(z); }, r);
  const cplx rhs = 2.0 * integrate(f, r) - 3.0 * integrate(g, r);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
}

TEST(Integrate, NonFiniteValueReportsNode) {
  const QuadratureRule r = build_ball_rule(1, 8, 8, 1.0);
  try {
    integrate([](const Point& z) { return z.norm() > 0.5 ? cplx(NAN) : cplx(1.0); }, r);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(Integrate, ReproducingBergman) {
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule r = build_ball_rule(1, 60, 64, 1.0);
  const Point z(cplx(0.3));
  const cplx v = integrate([&](const Point& w) { return w[0] * w[0] * w[0] * std::conj(kernel_eval(B, z, w)); }, r);
  EXPECT_NEAR(std::abs(v - 0.027), 0.0, 1e-13);
}

TEST(Integrate, ReproducingFock) {
  const auto F = SpaceDescriptor::fock(1);
  const QuadratureRule r = build_plane_rule(1, 1.0, 9.0, 200, 128);
  const Point z(cplx(1.0));
  const cplx v = integrate([&](const Point& w) { return w[0] * w[0] * std::conj(kernel_eval(F, z, w)); }, r);
  EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-10);
}

TEST(TailIntegral, Examples) {
  const auto F = SpaceDescriptor::fock(1);
  const QuadratureRule plane = build_plane_rule(1, 1.0, 12.0, 200, 64, Measure::plane_lebesgue);
  const Point z(cplx(0.7, -1.3));
  const Function corr = [&](const Point& w) { return correlation_closed_form(F, z, w); };
  EXPECT_NEAR(tail_integral(corr, z, 2.0, plane), 2.0 * kPi * std::exp(-2.0), 1e-10);
  EXPECT_NEAR(tail_integral(corr, z, 0.0, plane), 2.0 * kPi, 1e-10);

  RuleSpec s;
  s.measure = Measure::ball_invariant;
  s.radial = RadialScheme::double_exponential;
  s.radial_nodes = 120;
  s.angular_nodes = 16;
  const QuadratureRule inv = build_rule(s);
  const Function rf = [](const Point& w) { return cplx(std::pow(w.gap(), 1.5)); };
  EXPECT_NEAR(tail_integral(rf, Point(cplx(0.0)), 0.0, inv), 2.0, 1e-10);
}

TEST(TailIntegral, MonotoneInRadius) {
  const QuadratureRule r = build_ball_rule(1, 60, 64, 1.0);
  const Function f = [](const Point& w) { return cplx(1.0 + w[0].real()); };
  double prev = INFINITY;
  for (double R : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const double t = tail_integral(f, Point(cplx(0.4, 0.2)), R, r);
    EXPECT_LE(t, prev + 1e-14);
    prev = t;
  }
}

TEST(TailIntegral, LebesgueMassOfComplementDisk) {
  // The complement of a hyperbolic disk of radius R about z has v-measure 1 - |D(z,R)|
  // with |D(z,R)| = s^2 (1 - |z|^2)^2 / (1 - s^2 |z|^2)^2, s = tanh R.
  const QuadratureRule r = build_ball_rule(1, 200, 256, 1.0);
  const Point z(cplx(0.6, 0.2));
  const double R = 1.0, s = std::tanh(R), x = z.norm2();
  const double disk = s * s * (1 - x) * (1 - x) / std::pow(1 - s * s * x, 2);
  EXPECT_NEAR(tail_integral([](const Point&) { return cplx(1.0); }, z, R, r), 1.0 - disk, 1e-10);
}

TEST(RuleSpec, Validation) {
  EXPECT_THROW(build_ball_rule(1, 3, 8, 0.5), ValidationError);
  EXPECT_THROW(build_ball_rule(1, 8, 8, 1.5), ValidationError);
  EXPECT_THROW(build_ball_rule(3, 8, 8, 0.5), ValidationError);
  EXPECT_THROW(build_plane_rule(1, 1.0, 0.0, 8, 8), ValidationError);
}

TEST(GaussLegendre, Exactness) {
  std::vector<double> x, w;
  gauss_legendre(10, -1.0, 2.0, x, w);
  for (int k = 0; k < 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    const double expect = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    ASSERT_NEAR(s, expect, 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST(PairwiseSum, MatchesNaiveOnIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(std::span<const double>(v)), 499500.0);
}
