#pragma once

#include <cstddef>
#include <vector>

#include "rigidmem/models.hpp"
#include "rigidmem/types.hpp"

namespace rigidmem {

/// Gamma function by the Lanczos approximation (g = 7, 9 terms) with reflection
/// below 1/2. Relative error below 1e-13 on (0, 50).
double gamma_fn(double x);

/// Uniform samples f(k h), k = 0..n-1, on [0, (n-1) h].
struct SampledFunction {
  double step = 0.0;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(double step, std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t k) const noexcept { return step * static_cast<double>(k); }
};

/// Caputo partial of a monomial: D^order (x^gamma) = Gamma(1+gamma)/Gamma(1+gamma-order) x^(gamma-order).
/// Throws DomainError for gamma <= 0, x < 0, order outside (0, 1], or gamma - order <= -1.
double caputo_partial_monomial(double gamma, double order, double x);

/// Riemann-Liouville integral of order beta by product-trapezoid quadrature at every node.
SampledFunction rl_integral(const SampledFunction& f, double beta);

/// L1 approximation of the Caputo derivative; node 0 is set to 0.
SampledFunction caputo_l1(const SampledFunction& x, double order);

/// E_order(z) = sum z^k / Gamma(order k + 1) for |z| <= 50.
///
/// The power series is used while its cancellation stays below ~1e-10; for
/// large negative z and order < 1 the asymptotic expansion
/// -sum_{k>=1} z^-k / Gamma(1 - order k) takes over, which is accurate only to
/// a few digits near z = -5. order = 1 routes through exp. Throws DomainError
/// outside the domain and std::overflow_error when the value is not representable.
double mittag_leffler(double order, double z);

/// P(x) D^order h1 / (order + 1), where h1 = sum a_i (x^i)^(order+1) / Gamma(order+1)
/// and the fractional partials are taken coordinate-wise. Reproduces rhs_classical
/// on the closed positive octant; throws DomainError for negative coordinates.
State3 bracket_rhs_check(const RigidBodyParams& p, double order, const State3& x);

}  // namespace rigidmem
