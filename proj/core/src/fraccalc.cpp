#include "rigidmem/fraccalc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rigidmem {

double gamma_fn(double x) {
  static constexpr double kG = 7.0;
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
  };
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) sum += kCoef[i] / (z + static_cast<double>(i));
  const double t = z + kG + 0.5;
  // Split the power so that t^(z+0.5) does not overflow before exp(-t) applies.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * sum;
}

SampledFunction::SampledFunction(double step_, std::vector<double> values_)
    : step(step_), values(std::move(values_)) {
  if (!(step > 0.0)) throw DomainError("sample spacing must be positive");
  if (values.size() < 2) throw DomainError("a sampled function needs at least two samples");
}

double caputo_partial_monomial(double gamma, double order, double x) {
  if (!(gamma > 0.0)) throw DomainError("monomial exponent must be positive");
  if (!(order > 0.0 && order <= 1.0)) throw DomainError("order must lie in (0, 1]");
  if (!(x >= 0.0)) throw DomainError("fractional monomial partials need x >= 0");
  if (gamma - order <= -1.0) throw DomainError("gamma - order must exceed -1");
  return gamma_fn(1.0 + gamma) / gamma_fn(1.0 + gamma - order) * std::pow(x, gamma - order);
}

SampledFunction rl_integral(const SampledFunction& f, double beta) {
  if (!(beta > 0.0)) throw DomainError("integral order must be positive");
  const std::size_t n_nodes = f.size();
  const double scale = std::pow(f.step, beta) / gamma_fn(beta + 2.0);
  // w[k] = (k+1)^(b+1) - 2 k^(b+1) + (k-1)^(b+1) for interior lags k = n - j.
  std::vector<double> pw(n_nodes + 1);
  for (std::size_t k = 0; k <= n_nodes; ++k) pw[k] = std::pow(static_cast<double>(k), beta + 1.0);

  SampledFunction out(f.step, std::vector<double>(n_nodes, 0.0));
  for (std::size_t n = 1; n < n_nodes; ++n) {
    const auto nd = static_cast<double>(n);
    double acc = (pw[n - 1] - (nd - 1.0 - beta) * std::pow(nd, beta)) * f.values[0];
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t k = n - j;
      acc += (pw[k + 1] - 2.0 * pw[k] + pw[k - 1]) * f.values[j];
    }
    acc += f.values[n];
    out.values[n] = scale * acc;
  }
  return out;
}

SampledFunction caputo_l1(const SampledFunction& x, double order) {
  if (!(order > 0.0 && order < 1.0)) throw DomainError("L1 scheme needs order in (0, 1)");
  const std::size_t n_nodes = x.size();
  std::vector<double> b(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const auto kd = static_cast<double>(k);
    b[k] = std::pow(kd + 1.0, 1.0 - order) - std::pow(kd, 1.0 - order);
  }
  const double scale = std::pow(x.step, -order) / gamma_fn(2.0 - order);
  SampledFunction out(x.step, std::vector<double>(n_nodes, 0.0));
  for (std::size_t n = 1; n < n_nodes; ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += b[k] * (x.values[n - k] - x.values[n - k - 1]);
    out.values[n] = scale * acc;
  }
  return out;
}

namespace {

// Kahan-compensated power series; reports the largest term magnitude seen.
double ml_series(double order, double z, double* max_term) {
  double sum = 0.0, comp = 0.0;
  double peak = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double lg = std::lgamma(order * k + 1.0);
    const double mag = (z == 0.0) ? (k == 0 ? 1.0 : 0.0) : std::exp(k * std::log(std::abs(z)) - lg);
    const double term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
    peak = std::max(peak, mag);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (k > 2 && mag <= 1e-16 * std::abs(sum) && mag < peak) break;
    if (z == 0.0) break;
  }
  if (max_term) *max_term = peak;
  return sum;
}

double ml_asymptotic(double order, double z) {
  double sum = 0.0;
  double zpow = 1.0;
  for (int k = 1; k <= 12; ++k) {
    zpow /= z;
    const double arg = 1.0 - order * k;
    // 1/Gamma vanishes at the poles.
    if (arg <= 0.0 && arg == std::floor(arg)) continue;
    sum -= zpow / gamma_fn(arg);
  }
  return sum;
}

}  // namespace

double mittag_leffler(double order, double z) {
  if (!(order > 0.0)) throw DomainError("Mittag-Leffler order must be positive");
  if (!(std::abs(z) <= 50.0)) throw DomainError("Mittag-Leffler oracle is limited to |z| <= 50");
  if (order == 1.0) return std::exp(z);

  double peak = 0.0;
  const double series = ml_series(order, z, &peak);
  double value = series;
  if (z < -5.0 && order < 1.0 &&
      (!std::isfinite(series) || peak * 1e-16 > 1e-10 * std::max(std::abs(series), 1e-300))) {
    value = ml_asymptotic(order, z);
  }
  if (!std::isfinite(value)) throw std::overflow_error("Mittag-Leffler value overflows");
  return value;
}

State3 bracket_rhs_check(const RigidBodyParams& p, double order, const State3& x) {
  if ((x.array() < 0.0).any())
    throw DomainError("fractional bracket check is defined on the positive octant");
  // D^order_{x^j} h1 = a_j Gamma(order+2)/Gamma(2) x^j / Gamma(order+1).
  State3 dh;
  for (int j = 0; j < 3; ++j) {
    dh[j] = p.coefficients()[j] * caputo_partial_monomial(order + 1.0, order, x[j]) /
            gamma_fn(order + 1.0);
  }
  return poisson_tensor(x) * dh / (order + 1.0);
}

}  // namespace rigidmem
