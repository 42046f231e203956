#include "rigidmem/fraccalc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rigidmem/integrators.hpp"
#include "test_oracles.hpp"

namespace rigidmem {
namespace {

SampledFunction sample(const std::function<double(double)>& f, double h, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(h * static_cast<double>(k));
  return {h, v};
}

TEST(GammaFn, MatchesStdTgamma) {
  for (int i = 0; i < 500; ++i) {
    const double x = testing::uniform(0.01, 50.0);
    EXPECT_NEAR(gamma_fn(x) / std::tgamma(x), 1.0, 1e-13) << x;
  }
  for (double x : {-0.5, -1.5, -2.3}) EXPECT_NEAR(gamma_fn(x) / std::tgamma(x), 1.0, 1e-13);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(M_PI), 1e-15);
  EXPECT_DOUBLE_EQ(gamma_fn(5.0), 24.0);
}

TEST(SampledFunction, Validates) {
  EXPECT_THROW(SampledFunction(0.1, {1.0}), DomainError);
  EXPECT_THROW(SampledFunction(0.0, {1.0, 2.0}), DomainError);
}

TEST(CaputoMonomial, Examples) {
  EXPECT_NEAR(caputo_partial_monomial(1.0, 1.0, 3.7), 1.0, 1e-14);
  EXPECT_NEAR(caputo_partial_monomial(1.0, 1.0 - 1e-9, 0.8), 1.0, 1e-6);
  EXPECT_NEAR(caputo_partial_monomial(2.0, 0.5, 1.0), 1.5045055, 1e-7);
  for (double a : {0.3, 0.5, 0.82}) {
    const double x = 1.7;
    EXPECT_NEAR(caputo_partial_monomial(a + 1.0, a, x) / gamma_fn(a + 1.0), (a + 1.0) * x, 1e-12);
  }
  EXPECT_THROW(caputo_partial_monomial(-1.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(caputo_partial_monomial(1.0, 0.5, -1.0), DomainError);
  EXPECT_THROW(caputo_partial_monomial(1.0, 1.5, 1.0), DomainError);
}

TEST(RlIntegral, Constants) {
  const auto one = sample([](double) { return 1.0; }, 1e-3, 1001);
  const auto i1 = rl_integral(one, 1.0);
  for (std::size_t k = 0; k < i1.size(); ++k) EXPECT_NEAR(i1.values[k], i1.time(k), 1e-10);
  const auto ih = rl_integral(one, 0.5);
  for (std::size_t k = 0; k < ih.size(); k += 50)
    EXPECT_NEAR(ih.values[k], std::sqrt(ih.time(k)) / gamma_fn(1.5), 1e-3);
}

TEST(RlIntegral, OrderOneIsTrapezoid) {
  const auto f = sample([](double t) { return std::cos(3 * t) + t * t; }, 1e-2, 300);
  const auto i1 = rl_integral(f, 1.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k > 0) acc += 0.5 * f.step * (f.values[k - 1] + f.values[k]);
    EXPECT_NEAR(i1.values[k], acc, 1e-12);
  }
}

TEST(CaputoL1, Monomials) {
  const auto x = sample([](double t) { return t; }, 1e-3, 1001);
  const auto d = caputo_l1(x, 0.5);
  EXPECT_EQ(d.values[0], 0.0);
  for (std::size_t k = 1; k < d.size(); k += 50)
    EXPECT_NEAR(d.values[k], std::sqrt(d.time(k)) / gamma_fn(1.5), 1e-3);
  const auto c = caputo_l1(sample([](double) { return 4.2; }, 1e-2, 100), 0.3);
  for (double v : c.values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(caputo_l1(x, 1.0), DomainError);
}

TEST(CaputoL1, ResidualOfAbmSolution) {
  const double alpha = 0.6, h = 1e-3;
  FracConfig cfg;
  cfg.order = alpha;
  cfg.step = h;
  const auto tr = integrate_frac_abm([](const State3& x) { return State3(-x); }, cfg, State3::Ones(), 2.0);
  std::vector<double> v;
  for (const auto& s : tr.states) v.push_back(s[0]);
  const auto d = caputo_l1({h, v}, alpha);
  for (std::size_t k = 10; k < d.size(); ++k) EXPECT_NEAR(d.values[k], -v[k], 5e-3) << k;
}

TEST(FundamentalTheorem, CaputoOfRlIntegralRecoversFunction) {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const auto f = sample([](double t) { return 1.0 + std::sin(2.0 * t); }, 1e-3, 2001);
    const auto g = caputo_l1(rl_integral(f, alpha), alpha);
    for (std::size_t k = 20; k < f.size(); k += 20) EXPECT_NEAR(g.values[k], f.values[k], 5e-3);
  }
}

TEST(MittagLeffler, ClosedForms) {
  EXPECT_NEAR(mittag_leffler(1.0, 1.0), std::exp(1.0), 1e-15);
  for (double a : {0.3, 0.5, 0.82, 1.0, 2.0}) EXPECT_EQ(mittag_leffler(a, 0.0), 1.0);
  EXPECT_NEAR(mittag_leffler(2.0, 1.0), std::cosh(1.0), 1e-14);
  EXPECT_NEAR(mittag_leffler(2.0, -4.0), std::cos(2.0), 1e-13);
  for (double z : {-0.5, -1.0, -3.0, 0.7, 2.0}) EXPECT_NEAR(mittag_leffler(0.5, z) / testing::mittag_leffler_half(z), 1.0, 1e-10);
  EXPECT_NEAR(mittag_leffler(0.5, -1.0), 0.4275836, 1e-7);
  EXPECT_NEAR(mittag_leffler(0.82, -1.0), 0.3846026, 1e-7);
}

TEST(MittagLeffler, LargeNegativeArgument) {
  for (double z : {-6.0, -10.0, -20.0, -26.0})
    EXPECT_NEAR(mittag_leffler(0.5, z), testing::mittag_leffler_half(z), 1e-6 * testing::mittag_leffler_half(z)) << z;
  // exp(z^2) erfc(-z) overflows in double here; compare with its expansion.
  for (double z : {-30.0, -40.0, -50.0}) {
    double want = 0.0;
    for (int k = 1; k <= 9; k += 2) want -= std::pow(z, -k) / std::tgamma(1.0 - 0.5 * k);
    EXPECT_NEAR(mittag_leffler(0.5, z), want, 1e-7 * std::abs(want)) << z;
  }
  double prev = 1.0;
  for (int i = 1; i <= 50; ++i) {
    const double v = mittag_leffler(0.7, -0.5 * i);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
}

TEST(MittagLeffler, Domain) {
  EXPECT_THROW(mittag_leffler(0.5, 51.0), DomainError);
  EXPECT_THROW(mittag_leffler(0.0, 1.0), DomainError);
}

TEST(BracketRhsCheck, ReproducesClassical) {
  const RigidBodyParams p(3, 2, 1);
  EXPECT_LT((bracket_rhs_check(p, 0.5, {1, 1, 1}) - State3(1, -2, 1)).norm(), 1e-12);
  EXPECT_EQ(bracket_rhs_check(p, 0.5, {2, 0, 0}), State3::Zero());
  for (int i = 0; i < 100; ++i) {
    const State3 x = testing::random_state(0.0, 2.0);
    const double a = testing::uniform(0.1, 1.0);
    EXPECT_LT((bracket_rhs_check(p, a, x) - rhs_classical(p, x)).norm(), 1e-11);
  }
  EXPECT_LT((bracket_rhs_check(p, 1.0, {0.3, 1.2, 0.7}) - rhs_classical(p, {0.3, 1.2, 0.7})).norm(), 1e-15);
  EXPECT_THROW(bracket_rhs_check(p, 0.5, {-1, 1, 1}), DomainError);
}

}  // namespace
}  // namespace rigidmem
