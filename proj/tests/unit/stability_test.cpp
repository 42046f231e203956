#include "rigidmem/stability.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rigidmem/integrators.hpp"
#include "test_oracles.hpp"

namespace rigidmem {
namespace {

const RigidBodyParams kP{3.0, 2.0, 1.0};
const InertiaSetup kS{3.0, 2.0, 1.0, 1.0, 1.0};

TEST(CharFracEquilibrium, Examples) {
  const auto m1 = char_frac_equilibrium(kP, Equilibrium::kM1, 1.0, false);
  EXPECT_EQ(m1.c1, 0.0);
  EXPECT_EQ(m1.c0, 2.0);
  const auto m2 = char_frac_equilibrium(kP, Equilibrium::kM2, 1.0, false);
  EXPECT_EQ(m2.c0, -1.0);
  const auto r1 = char_frac_equilibrium(kP, Equilibrium::kM1, 1.0, true);
  EXPECT_EQ(r1.c1, 9.0);
  EXPECT_EQ(r1.c0, 20.0);
  EXPECT_THROW(char_frac_equilibrium(kP, Equilibrium::kM1, 0.0, false), DomainError);
}

// The quadratic must be the nontrivial factor of det(w - J) at the equilibrium,
// where J is the Jacobian of the (classical or revised) vector field.
TEST(CharFracEquilibrium, MatchesJacobianSpectrum) {
  for (bool revised : {false, true})
    for (double m : {1.0, 0.7, -1.3})
      for (int i = 0; i < 3; ++i) {
        const auto which = static_cast<Equilibrium>(i);
        const State3 e = find_equilibria(SystemKind::kClassical, m)[static_cast<std::size_t>(i)];
        const Matrix3 J = testing::jacobian_fd(
            [&](const State3& x) { return revised ? rhs_revised(kP, x) : rhs_classical(kP, x); }, e);
        const double trace = J.trace();
        double minors = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) minors += J(a, a) * J(b, b) - J(a, b) * J(b, a);
        const auto q = char_frac_equilibrium(kP, which, m, revised);
        const double scale = 1.0 + std::abs(q.c0);
        EXPECT_NEAR(q.c1, -trace, 1e-6 * scale) << revised << ' ' << m << ' ' << i;
        EXPECT_NEAR(q.c0, minors, 1e-6 * scale) << revised << ' ' << m << ' ' << i;
        EXPECT_NEAR(J.determinant(), 0.0, 1e-6 * scale);
      }
}

TEST(CharQuadratic, Roots) {
  const auto [a, b] = CharQuadratic{1, 9, 20}.roots();
  EXPECT_NEAR(std::min(a.real(), b.real()), -5.0, 1e-14);
  EXPECT_NEAR(std::max(a.real(), b.real()), -4.0, 1e-14);
  const auto [c, d] = CharQuadratic{1, 0, 2}.roots();
  EXPECT_NEAR(std::abs(c.imag()), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(c.real(), 0.0, 1e-15);
  EXPECT_NEAR(d.real(), 0.0, 1e-15);
}

TEST(Matignon, Examples) {
  EXPECT_EQ(matignon_classify({1, 9, 20}, 0.3).verdict, Verdict::kAsymptoticallyStable);
  EXPECT_EQ(matignon_classify({1, 9, 20}, 1.0).verdict, Verdict::kAsymptoticallyStable);
  EXPECT_EQ(matignon_classify({1, 0, 2}, 1.0).verdict, Verdict::kMarginal);
  EXPECT_EQ(matignon_classify({1, 0, 2}, 0.82).verdict, Verdict::kAsymptoticallyStable);
  EXPECT_EQ(matignon_classify({1, 0, -1}, 0.5).verdict, Verdict::kUnstable);
  const auto r = matignon_classify({1, 0, 2}, 0.82);
  EXPECT_NEAR(r.dominant_root()->margin, M_PI / 2 - 0.41 * M_PI, 1e-12);
  EXPECT_TRUE(r.structural_zero_root);
  EXPECT_THROW(matignon_classify({1, 0, 2}, 0.0), DomainError);
}

TEST(Matignon, ClassicalOrderAgreesWithRealPartTest) {
  for (int i = 0; i < 1000; ++i) {
    const double c1 = testing::uniform(-5, 5), c0 = testing::uniform(-5, 5);
    const auto [a, b] = CharQuadratic{1, c1, c0}.roots();
    const bool stable = a.real() < -1e-9 && b.real() < -1e-9;
    const bool unstable = a.real() > 1e-9 || b.real() > 1e-9;
    const Verdict v = matignon_classify({1, c1, c0}, 1.0).verdict;
    if (stable) EXPECT_EQ(v, Verdict::kAsymptoticallyStable);
    if (unstable) EXPECT_EQ(v, Verdict::kUnstable);
  }
}

TEST(Matignon, SmallerOrderNeverLessStable) {
  for (int i = 0; i < 300; ++i) {
    const CharQuadratic q{1, testing::uniform(-5, 5), testing::uniform(-5, 5)};
    const double a = testing::uniform(0.05, 1.0), b = testing::uniform(0.05, a);
    const double ma = matignon_classify(q, a).dominant_root()->margin;
    const double mb = matignon_classify(q, b).dominant_root()->margin;
    EXPECT_GE(mb, ma);
  }
}

TEST(CharEpEval, Examples) {
  const auto k = DelayKernel::dirac(0.5);
  for (int i = 0; i < 20; ++i) {
    const Complex lam(testing::uniform(-1, 1), testing::uniform(-3, 3));
    EXPECT_LT(std::abs(char_ep_eval(kS.with_coupling(0.0), k, lam) - (lam * lam + 1.0 / 9.0)), 1e-14);
    EXPECT_LT(std::abs(char_ep_eval(InertiaSetup::unchecked(3, 2, 1, 1, 0), k, lam) - lam * lam), 1e-14);
  }
}

TEST(CharEpEval, MatchesBlockDeterminant) {
  for (const auto& s : {kS, InertiaSetup(5, 3, 2, -0.4, 1.7), InertiaSetup(2, 1.5, 0.5, 2.0, -0.8)})
    for (const auto& k : {DelayKernel::dirac(0.7), DelayKernel::exponential(2.0), DelayKernel::uniform(0.1, 1.0)})
      for (int i = 0; i < 100; ++i) {
        const Complex lam(testing::uniform(0.0, 2.0), testing::uniform(-5, 5));
        const auto lin = linearize_ep_delayed(s);
        const Complex K = laplace(k, lam) * s.coupling();
        Eigen::Matrix2cd M;
        M << lam - K * lin.B(1, 1), -lin.A(1, 2) - K * lin.B(1, 2), -lin.A(2, 1) - K * lin.B(2, 1),
            lam - K * lin.B(2, 2);
        const Complex det = M.determinant();
        EXPECT_LT(std::abs(char_ep_eval(s, k, lam) - det), 1e-12 * (1.0 + std::abs(det)));
      }
}

TEST(TauC, ExamplesAndScaling) {
  EXPECT_DOUBLE_EQ(tau_c_formula(kS), 2.5);
  EXPECT_DOUBLE_EQ(tau_c_formula(kS.with_coupling(2.0)), 1.25);
  EXPECT_DOUBLE_EQ(tau_c_formula(kS.with_m(2.0)), 0.625);
  EXPECT_DOUBLE_EQ(tau_c_formula(kS.with_coupling(-1.0)), 2.5);
  EXPECT_THROW(tau_c_formula(kS.with_coupling(0.0)), DomainError);
}

TEST(CriticalDelayScan, UncoupledHasNoCrossing) {
  EXPECT_FALSE(critical_delay_scan(kS.with_coupling(0.0), 50.0, 20000));
}

TEST(CriticalDelayScan, CrossingIsARoot) {
  const auto c = critical_delay_scan(kS, 50.0, 20000);
  ASSERT_TRUE(c);
  EXPECT_GT(c->tau, 0.0);
  EXPECT_LT(c->residual, 1e-10);
  EXPECT_LT(std::abs(char_ep_eval(kS, DelayKernel::dirac(c->tau), Complex(0.0, c->omega))), 1e-10);
  EXPECT_NEAR(c->tau, 1.885, 5e-3);
}

TEST(CriticalDelayScan, SimulationBracketsCrossing) {
  const double tau = critical_delay_scan(kS, 50.0, 20000)->tau;
  const auto lin = linearize_ep_delayed(kS);
  const auto rhs = [&](const State3& x, const State3& xd) { return State3(lin.A * x + kS.coupling() * lin.B * xd); };
  const State3 x0(0, 0.01, 0.01);
  auto growth = [&](double t) {
    const auto tr = integrate_dde(rhs, DelayKernel::dirac(t), HistorySpec::constant(x0), 120.0, 1e-2);
    double early = 0, late = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double n = tr.states[k].norm();
      if (tr.time(k) >= 40 && tr.time(k) < 80) early = std::max(early, n);
      if (tr.time(k) >= 80) late = std::max(late, n);
    }
    return late / early;
  };
  EXPECT_LT(growth(0.5 * tau), 1.0);
  EXPECT_GT(growth(1.2 * tau), 1.0);
}

TEST(FracDelayCharEval, Reductions) {
  Eigen::MatrixXd A(2, 2);
  A << -1, 2, 0.5, -3;
  const Eigen::MatrixXd B0 = Eigen::MatrixXd::Zero(2, 2);
  const Complex lam(0.4, 1.1);
  const Complex want = (lam - A(0, 0)) * (lam - A(1, 1)) - A(0, 1) * A(1, 0);
  EXPECT_LT(std::abs(frac_delay_char_eval(A, B0, 1.0, DelayKernel::dirac(1.0), lam) - want), 1e-14);

  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1), Bs = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const Complex got = frac_delay_char_eval(Z, Bs, 0.7, DelayKernel::dirac(0.5), lam);
  EXPECT_LT(std::abs(got - (std::pow(lam, 0.7) + std::exp(-0.5 * lam))), 1e-14);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = -2.0;
  D(1, 1) = -0.5;
  const Eigen::MatrixXd Bd = Eigen::MatrixXd::Identity(2, 2) * 0.25;
  // Decoupled: det = (w + 1.75)(w + 0.25) with w = lam^0.6.
  const Complex l3(0.1, 0.3);
  const Complex w = std::pow(l3, 0.6);
  EXPECT_LT(std::abs(frac_delay_char_eval(D, Bd, 0.6, DelayKernel::dirac(0.0), l3) - (w + 1.75) * (w + 0.25)), 1e-14);
}

TEST(NearBranchCut, Basics) {
  EXPECT_TRUE(near_branch_cut(Complex(-1.0, 0.0)));
  EXPECT_TRUE(near_branch_cut(Complex(0.0, 0.0)));
  EXPECT_FALSE(near_branch_cut(Complex(1.0, 0.0)));
  EXPECT_FALSE(near_branch_cut(Complex(-1.0, 1e-3)));
}

TEST(CountRhpZeros, Polynomials) {
  EXPECT_EQ(count_rhp_zeros([](Complex z) { return (z - 1.0) * (z - Complex(2, 3)) * (z - Complex(2, -3)) * (z + 4.0); }).zeros, 3);
  EXPECT_EQ(count_rhp_zeros([](Complex z) { return z * z + 4.0 * z + 2.0; }).zeros, 0);
  EXPECT_TRUE(count_rhp_zeros([](Complex z) { return z * z + 1.0; }).boundary_zero);
}

TEST(NewtonRoots, FindsPolynomialRoots) {
  const auto p = [](Complex z) { return (z - 0.5) * (z * z + 2.0 * z + 5.0); };
  const auto roots = newton_roots(p, -3, 2, 4);
  ASSERT_EQ(roots.size(), 3u);
  for (const Complex r : roots) EXPECT_LT(std::abs(p(r)), 1e-10);
  EXPECT_NEAR(roots.front().real(), 0.5, 1e-12);
  // A zero on the negative real axis sits on the branch cut and is skipped.
  EXPECT_EQ(newton_roots([](Complex z) { return z + 1.0; }, -3, 2, 4).size(), 0u);
}

TEST(EpDelayCheck, SmallDelayStableReportsBounds) {
  const auto r = ep_delay_check(kS, DelayKernel::dirac(0.1));
  EXPECT_EQ(r.verdict, Verdict::kAsymptoticallyStable);
  EXPECT_EQ(r.rhp_root_count, 0);
  ASSERT_TRUE(r.critical_delay_bound);
  EXPECT_DOUBLE_EQ(*r.critical_delay_bound, 2.5);
  ASSERT_TRUE(r.critical_delay);
  EXPECT_LT(*r.critical_delay, *r.critical_delay_bound);
  EXPECT_NE(r.to_text().find("tau_c = 2.5"), std::string::npos);
  EXPECT_EQ(ep_delay_check(kS, DelayKernel::dirac(2.2)).verdict, Verdict::kUnstable);
}

TEST(ScalarFracDelay, Examples) {
  EXPECT_EQ(scalar_frac_delay_check(-1.0, 0.5, 0.0).verdict, Verdict::kAsymptoticallyStable);
  for (double a : {0.5, 1.0})
    for (double tau : {0.1, 1.0}) EXPECT_EQ(scalar_frac_delay_check(a, 0.6, tau).verdict, Verdict::kUnstable);
  EXPECT_EQ(scalar_frac_delay_check(-1.0, 0.7, 0.5).verdict, Verdict::kAsymptoticallyStable);
  EXPECT_EQ(scalar_frac_delay_check(-1.0, 0.7, 3.0).verdict, Verdict::kUnstable);
}

TEST(PlanarFracDelay, Examples) {
  const auto r = planar_frac_delay_check(1.0, 2.0, 0.5, 0.1);
  EXPECT_EQ(r.rhp_root_count, 0);
  EXPECT_EQ(r.verdict, Verdict::kAsymptoticallyStable);
  EXPECT_NE(planar_frac_delay_check(0.0, 1.0, 0.5, 0.05).verdict, Verdict::kAsymptoticallyStable);
}

TEST(PlanarFracDelay, ClassicalLimitMatchesEigenvalues) {
  for (const auto& [k1, k2] : std::vector<std::pair<double, double>>{{1, 2}, {0.5, 0.5}, {2, 0.1}, {0.2, 3}}) {
    const auto [A, B] = planar_benchmark_matrices(k1, k2);
    const Eigen::Matrix2d M = A + B;
    const bool stable = M.eigenvalues().real().maxCoeff() < 0.0;
    const auto r = planar_frac_delay_check(k1, k2, 1.0, 1e-6);
    EXPECT_EQ(r.verdict == Verdict::kAsymptoticallyStable, stable) << k1 << ' ' << k2;
  }
}

}  // namespace
}  // namespace rigidmem
