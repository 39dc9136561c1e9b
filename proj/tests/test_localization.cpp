#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "locomp/errors.hpp"
#include "locomp/localization.hpp"
#include "locomp/operators.hpp"
#include "locomp/symbols.hpp"
#include "test_util.hpp"

using namespace locomp;

namespace {

const double kPi = std::numbers::pi;

QuadratureRule bergman_base(int n = 1) { return build_rule(default_localization_rule(SpaceDescriptor::bergman(n))); }
QuadratureRule fock_base() { return build_rule(default_localization_rule(SpaceDescriptor::fock(1))); }

TruncatedOperator bergman_toeplitz(const std::string& name, int D = 60) {
  const auto B = SpaceDescriptor::bergman(1);
  return toeplitz(B, builtin_symbol(name), D, build_ball_rule(1, 64, 2 * D + 8, 1.0));
}

}  // namespace

TEST(Params, DerivedExponents) {
  const LocalizationParams p = LocalizationParams::for_space(SpaceDescriptor::bergman(1));
  EXPECT_DOUBLE_EQ(p.a_T(), 0.5);
  EXPECT_DOUBLE_EQ(p.a_Tstar(), 0.5);
  EXPECT_DOUBLE_EQ(LocalizationParams::kappa(2), 4.0 / 3.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {1, 2}) {
    for (double pe : {1.25, 1.5, 2.0, 3.0, 6.0}) {
      const double lim = std::min(pe, pe / (pe - 1.0));
      for (int k = 0; k < 20; ++k) {
        const LocalizationParams q{n, pe, lim * (0.001 + 0.998 * u(rng))};
        ASSERT_NO_THROW(q.validate());
        for (double a : {q.a_T(), q.a_Tstar()}) {
          ASSERT_GT(a, LocalizationParams::a_min(n));
          ASSERT_LT(a, 1.0);
        }
      }
    }
  }
  EXPECT_THROW((LocalizationParams{1, 2.0, 2.0}.validate()), ValidationError);
  EXPECT_THROW((LocalizationParams{1, 3.0, 0.0}.validate()), ValidationError);
  EXPECT_THROW((LocalizationParams{1, 3.0, 1.6}.validate()), ValidationError);
}

TEST(BergmanLocalization, IdentityAtOrigin) {
  const auto B = SpaceDescriptor::bergman(1);
  const TruncatedOperator I = TruncatedOperator::identity(B, 60);
  const QuadratureRule base = bergman_base();
  EXPECT_NEAR(bergman_localization_integral(I, Point::origin(1), 0.5, base), 2.0, 1e-8);
  EXPECT_NEAR(bergman_localization_integral(I, Point::origin(1), 0.8, base), 1.25, 1e-8);
  EXPECT_EQ(bergman_localization_integral(TruncatedOperator::zero(B, 60), Point(cplx(0.5)), 0.5, base), 0.0);
  EXPECT_THROW(bergman_localization_integral(I, Point::origin(1), 1.0, base), ValidationError);
  EXPECT_THROW(bergman_localization_integral(I, Point(cplx(1.0)), 0.5, base), DomainError);
}

TEST(BergmanLocalization, IdentityTailClosedForm) {
  // At z = 0 the tail over |w| > R' = tanh r is int_{R'}^1 (1 - t^2)^{a-1} 2t dt = (1 - R'^2)^a / a.
  const TruncatedOperator I = TruncatedOperator::identity(SpaceDescriptor::bergman(1), 60);
  const QuadratureRule base = bergman_base();
  for (double a : {0.3, 0.5, 0.9}) {
    for (double r : {0.0, 0.5, 2.0, 4.0, 6.0}) {
      const double Rp = std::tanh(r);
      // Brute-force oracle: 2-D midpoint rule in (y, theta) with 1 - |w|^2 = s_max y^10, evaluating the
      // integrand |<k_0, k_w>| ||K_w||^{-a} against d lambda = dv / (1 - |w|^2)^2, dv = ds dtheta / (2 pi).
      const auto B = SpaceDescriptor::bergman(1);
      const double s_max = 1.0 - Rp * Rp;
      const int N = 4000, M = 8;
      double brute = 0.0;
      for (int i = 0; i < N; ++i) {
        const double y = (i + 0.5) / N;
        const double sv = s_max * std::pow(y, 10);
        const double ds = 10.0 * s_max * std::pow(y, 9) / N;
        for (int j = 0; j < M; ++j) {
          const cplx dir = std::polar(1.0, 2.0 * kPi * (j + 0.5) / M);
          const Point w = Point::on_shell({&dir, 1}, sv);
          const double f = correlation_modulus(B, Point::origin(1), w) * std::exp(-a * log_kernel_norm(B, w));
          brute += f / (sv * sv) * ds / M;
        }
      }
      const double got = bergman_localization_tail(I, Point::origin(1), r, a, base);
      EXPECT_NEAR(got, brute, 1e-6 * std::max(1.0, brute)) << "a=" << a << " r=" << r;
      EXPECT_NEAR(got, std::pow(1.0 - Rp * Rp, a) / a, 1e-8 * std::max(1.0, brute));
    }
  }
}

TEST(BergmanLocalization, TailIsMonotone) {
  const TruncatedOperator T = bergman_toeplitz("one_minus_abs2");
  const QuadratureRule base = bergman_base();
  for (double r : {0.0, 0.6, 0.9}) {
    const Point z(cplx(r, 0.05));
    const std::vector<double> t = localization_tails(T, z, {0.0, 1.0, 2.0, 4.0, 6.0}, 0.5, base);
    for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LE(t[k], t[k - 1] + 1e-14);
    EXPECT_GE(bergman_localization_tail(T, z, 2.0, 0.5, base), bergman_localization_tail(T, z, 4.0, 0.5, base));
  }
}

TEST(BergmanLocalization, AdjointOfSelfAdjointMatches) {
  const TruncatedOperator T = bergman_toeplitz("radial_step");
  const QuadratureRule base = bergman_base();
  const Point z(cplx(0.4, -0.5));
  EXPECT_NEAR(bergman_localization_integral(T, z, 0.5, base), bergman_localization_integral(T, z, 0.5, base, true),
              1e-12);
}

TEST(FockLocalization, IdentityClosedForms) {
  const auto F = SpaceDescriptor::fock(1);
  const TruncatedOperator I = TruncatedOperator::identity(F, 60);
  const QuadratureRule base = fock_base();
  for (const Point& z : {Point::origin(1), Point(cplx(1.3, -0.4))}) {
    EXPECT_NEAR(fock_localization_integral(I, z, base), 2.0 * kPi, 1e-8);
    EXPECT_NEAR(fock_localization_tail(I, z, 2.0, base), 2.0 * kPi * std::exp(-2.0), 1e-8);
  }
  EXPECT_EQ(fock_localization_integral(TruncatedOperator::zero(F, 60), Point(cplx(1.0)), base), 0.0);
  EXPECT_THROW(fock_localization_integral(I, Point(cplx(1.0)), bergman_base()), ValidationError);
}

TEST(RudinForelli, OriginMatchesClosedForm) {
  const RuleSpec spec = default_localization_rule(SpaceDescriptor::bergman(1));
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    const RudinForelliCheck c = rudin_forelli_check(1, a, {Point::origin(1)}, spec);
    EXPECT_NEAR(c.values[0], 1.0 / a, 1e-8) << a;
    EXPECT_TRUE(c.stable);
    EXPECT_FALSE(c.divergent) << a;
  }
  EXPECT_NEAR(1.0 / 0.9, 1.1111, 1e-4);
}

TEST(RudinForelli, TwoDimensionalOrigin) {
  // int (1 - |w|^2)^t dv over B_2 = 2 Gamma(t + 1) / Gamma(t + 3) with t = -3 (1 - a) / 2.
  const QuadratureRule base = bergman_base(2);
  for (double a : {0.4, 0.6, 0.9}) {
    const double t = -1.5 * (1.0 - a);
    const double expect = 2.0 * std::tgamma(t + 1.0) / std::tgamma(t + 3.0);
    EXPECT_NEAR(rudin_forelli_integral(2, a, Point::origin(2), 0.0, base), expect, 1e-8 * expect) << a;
  }
}

TEST(RudinForelli, GridSupIsStableAndBounded) {
  const auto B = SpaceDescriptor::bergman(1);
  const RudinForelliCheck c = rudin_forelli_check(1, 0.5, default_z_grid(B), default_localization_rule(B));
  EXPECT_TRUE(c.stable) << c.sup << " vs " << c.refined_sup;
  EXPECT_FALSE(c.divergent);
  EXPECT_LT(c.sup, 10.0);
  // The integral grows toward the boundary but converges.
  EXPECT_GE(c.sweep_value.back(), c.sweep_value.front());
}

TEST(RudinForelli, OutOfRangeExponentDiverges) {
  const auto B = SpaceDescriptor::bergman(1);
  const RudinForelliCheck c = rudin_forelli_check(1, 1.05, {Point::origin(1)}, default_localization_rule(B));
  EXPECT_TRUE(c.divergent);
  for (std::size_t i = 1; i < c.sweep_value.size(); ++i) EXPECT_GT(c.sweep_value[i], c.sweep_value[i - 1]);
}

TEST(RudinForelli, TailProfiles) {
  const auto B = SpaceDescriptor::bergman(1);
  const QuadratureRule base = bergman_base();
  const double r96 = std::atanh(0.96);
  const TailProfile at0 = rudin_forelli_tail(1, 0.5, {0.0, r96}, {Point::origin(1)}, base);
  EXPECT_NEAR(at0.value[0], 2.0, 1e-8);
  EXPECT_NEAR(at0.value[1], 2.0 * std::sqrt(1.0 - 0.96 * 0.96), 1e-8);
  EXPECT_NEAR(at0.value[1], 0.56, 1e-12);

  const std::vector<Point> grid = default_z_grid(B);
  const TailProfile prof = rudin_forelli_tail(1, 0.5, default_r_list(), grid, base);
  EXPECT_TRUE(prof.non_increasing());
  const RudinForelliCheck chk = rudin_forelli_check(1, 0.5, grid, default_localization_rule(B));
  EXPECT_NEAR(prof.value[0], chk.sup, 1e-12 * chk.sup);
  EXPECT_LT(prof.value.back(), 0.05 * prof.value[0]);

  const auto F = SpaceDescriptor::fock(1);
  const TailProfile fp = fock_rudin_forelli_tail(F, {0.0, 2.0, 4.0}, default_z_grid(F), fock_base());
  EXPECT_NEAR(fp.value[0], 2.0 * kPi, 1e-8);
  EXPECT_NEAR(fp.value[2], 2.0 * kPi * std::exp(-8.0), 1e-6);
  EXPECT_NEAR(2.0 * kPi * std::exp(-8.0), 2.11e-3, 1e-5);
}

TEST(Schur, ZeroAndGaussian) {
  const QuadratureRule rule = build_plane_rule(1, 1.0, 10.0, 40, 32, Measure::plane_lebesgue);
  const auto one = [](const Point&) { return 1.0; };
  EXPECT_EQ(schur_bound([](const Point&, const Point&) { return 0.0; }, one, 2.0, rule).value, 0.0);
  const auto F = SpaceDescriptor::fock(1);
  const SchurBound b = schur_bound(
      [&F](const Point& z, const Point& w) { return correlation_modulus(F, z, w); }, one, 2.0, rule);
  EXPECT_NEAR(b.c1, 2.0 * kPi, 1e-6);
  EXPECT_NEAR(b.c2, 2.0 * kPi, 1e-6);
  EXPECT_NEAR(b.norm_bound, 2.0 * kPi, 1e-6);
  EXPECT_THROW(schur_bound([](const Point&, const Point&) { return 1.0; }, [](const Point&) { return 0.0; }, 2.0, rule),
               ValidationError);
}

TEST(Schur, DominatesDiscretizedNorm) {
  const QuadratureRule rule = build_ball_rule(1, 12, 12, 1.0);
  const std::size_t N = rule.size();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double c1 = u(rng), c2 = u(rng), c3 = 1.0 + u(rng);
    const KernelFunction K = [=](const Point& z, const Point& w) {
      return std::exp(c1 * (z[0] * std::conj(w[0])).real() + c2 * std::norm(z[0] - w[0])) * c3;
    };
    const WeightFunction h = [=](const Point& z) { return 1.0 + 0.3 * (trial % 2) * z.norm2(); };
    const SchurBound b = schur_bound(K, h, 2.0, rule);
    Eigen::MatrixXd A(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::sqrt(rule.weights[i]) * K(rule.nodes[i], rule.nodes[j]) * std::sqrt(rule.weights[j]);
      }
    }
    const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
    EXPECT_GE(b.norm_bound, norm * (1.0 - 1e-12)) << trial;
  }
}

TEST(Certificate, IdentityAndZeroPass) {
  for (const SpaceDescriptor& s : {SpaceDescriptor::bergman(1), SpaceDescriptor::fock(1)}) {
    const LocalizationParams p = LocalizationParams::for_space(s);
    const LocalizationCertificate c = certify(TruncatedOperator::identity(s, 60), p);
    EXPECT_TRUE(c.pass) << to_string(s.family) << " full " << c.sup_full;
    EXPECT_TRUE(c.tail.non_increasing());
    EXPECT_EQ(c.tail.value.size(), default_r_list().size());
    if (s.is_bergman()) {
      EXPECT_LT(c.sup_full, 10.0);
    } else {
      EXPECT_NEAR(c.sup_full, 2.0 * kPi, 1e-6);
    }
    const LocalizationCertificate z = certify(TruncatedOperator::zero(s, 60), p);
    EXPECT_TRUE(z.pass);
    EXPECT_EQ(z.sup_full, 0.0);
    for (double v : z.tail.value) EXPECT_EQ(v, 0.0);
  }
}

TEST(Certificate, ToeplitzPassesAndCompositionAtDoubleThresholds) {
  const LocalizationParams p = LocalizationParams::for_space(SpaceDescriptor::bergman(1));
  const TruncatedOperator A = bergman_toeplitz("radial_step"), B = bergman_toeplitz("angular");
  const LocalizationCertificate ca = certify(A, p), cb = certify(B, p);
  EXPECT_TRUE(ca.pass);
  EXPECT_TRUE(cb.pass);
  const Thresholds twice{2.0 * 50.0, 2.0 * 0.05};
  EXPECT_TRUE(certify(compose(A, B), p, twice).pass);
}

TEST(Certificate, RankOneControlFails) {
  const auto B = SpaceDescriptor::bergman(1);
  const int D = 60;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(D + 1, D + 1);
  M(D, 0) = 1.0;
  const LocalizationParams p = LocalizationParams::for_space(B);
  const LocalizationCertificate unit = certify(TruncatedOperator(B, D, M, "rank-one"), p);
  const double scale = 2.0 * 50.0 / unit.sup_full;
  const LocalizationCertificate c = certify(TruncatedOperator(B, D, scale * M, "rank-one"), p);
  EXPECT_FALSE(c.pass);
  EXPECT_FALSE(c.full_ok);
  EXPECT_GT(c.tail.value.back(), 0.0);
}
