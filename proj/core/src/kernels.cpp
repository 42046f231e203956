#include "rigidmem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rigidmem {
namespace {

constexpr double kTailMass = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

// Smallest S with (1 + r S) e^{-r S} <= kTailMass.
double erlang_cutoff(double rate) {
  double u = -std::log(kTailMass);  // u = r S
  for (int i = 0; i < 50; ++i) {
    const double g = std::log1p(u) - u - std::log(kTailMass);
    const double dg = 1.0 / (1.0 + u) - 1.0;
    const double next = u - g / dg;
    if (std::abs(next - u) < 1e-14 * u) {
      u = next;
      break;
    }
    u = next;
  }
  return u / rate;
}

// Composite Simpson of k(s) x(t - s) over [lo, hi], rescaled so the rule
// integrates the kernel itself to its exact mass on the interval.
State3 weighted_simpson(const DelayKernel& k, const std::function<State3(double)>& x, double lo,
                        double hi, double quad_step) {
  if (!(hi > lo)) return State3::Zero();
  auto n = static_cast<long>(std::ceil((hi - lo) / quad_step - 1e-9));
  n = std::max(n, 2L);
  if (n % 2 != 0) ++n;
  const double step = (hi - lo) / static_cast<double>(n);
  State3 sum = State3::Zero();
  double mass = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double s = (i == n) ? hi : lo + step * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double kw = w * density(k, s);
    sum += kw * x(s);
    mass += kw;
  }
  const double exact = tail_mass(k, lo) - tail_mass(k, hi);
  if (mass <= 0.0) return sum * (step / 3.0);
  return sum * (exact / mass);
}

}  // namespace

DelayKernel DelayKernel::uniform(double offset, double width) {
  if (!(offset >= 0.0) || !std::isfinite(offset))
    throw DomainError("uniform kernel offset must be >= 0");
  require_positive(width, "uniform kernel width");
  return DelayKernel(UniformKernel{offset, width});
}

DelayKernel DelayKernel::exponential(double rate) {
  require_positive(rate, "exponential kernel rate");
  return DelayKernel(ExponentialKernel{rate});
}

DelayKernel DelayKernel::erlang(double rate) {
  require_positive(rate, "Erlang kernel rate");
  return DelayKernel(ErlangKernel{rate});
}

DelayKernel DelayKernel::dirac(double lag) {
  if (!(lag >= 0.0) || !std::isfinite(lag)) throw DomainError("Dirac kernel lag must be >= 0");
  return DelayKernel(DiracKernel{lag});
}

std::string_view DelayKernel::name() const noexcept {
  return std::visit(Overloaded{
                        [](const UniformKernel&) { return std::string_view("uniform"); },
                        [](const ExponentialKernel&) { return std::string_view("exponential"); },
                        [](const ErlangKernel&) { return std::string_view("erlang"); },
                        [](const DiracKernel&) { return std::string_view("dirac"); },
                    },
                    v_);
}

double density(const DelayKernel& k, double s) {
  if (!(s >= 0.0)) throw DomainError("density is defined for s >= 0");
  return std::visit(
      Overloaded{
          [s](const UniformKernel& u) {
            return (s >= u.offset && s <= u.offset + u.width) ? 1.0 / u.width : 0.0;
          },
          [s](const ExponentialKernel& e) { return e.rate * std::exp(-e.rate * s); },
          [s](const ErlangKernel& e) { return e.rate * e.rate * s * std::exp(-e.rate * s); },
          [](const DiracKernel&) -> double {
            throw DomainError("Dirac kernel has no pointwise density");
          },
      },
      k.variant());
}

double tail_mass(const DelayKernel& k, double s) {
  if (s <= 0.0) return 1.0;
  return std::visit(Overloaded{
                        [s](const UniformKernel& u) {
                          return std::clamp((u.offset + u.width - s) / u.width, 0.0, 1.0);
                        },
                        [s](const ExponentialKernel& e) { return std::exp(-e.rate * s); },
                        [s](const ErlangKernel& e) {
                          return (1.0 + e.rate * s) * std::exp(-e.rate * s);
                        },
                        [s](const DiracKernel& d) { return s <= d.lag ? 1.0 : 0.0; },
                    },
                    k.variant());
}

double effective_support_end(const DelayKernel& k) {
  return std::visit(Overloaded{
                        [](const UniformKernel& u) { return u.offset + u.width; },
                        [](const ExponentialKernel& e) { return -std::log(kTailMass) / e.rate; },
                        [](const ErlangKernel& e) { return erlang_cutoff(e.rate); },
                        [](const DiracKernel& d) { return d.lag; },
                    },
                    k.variant());
}

Complex laplace(const DelayKernel& k, Complex lam) {
  auto check_domain = [&](double rate) {
    if (!(lam.real() > -rate))
      throw DomainError("Laplace transform diverges for Re(lambda) <= -rate");
  };
  return std::visit(
      Overloaded{
          [&](const UniformKernel& u) {
            const Complex z = u.width * lam;
            const Complex shift = std::exp(-u.offset * lam);
            if (std::abs(z) < 1e-4) {
              return shift * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
            }
            return shift * (1.0 - std::exp(-z)) / z;
          },
          [&](const ExponentialKernel& e) {
            check_domain(e.rate);
            return e.rate / (e.rate + lam);
          },
          [&](const ErlangKernel& e) {
            check_domain(e.rate);
            const Complex q = e.rate / (e.rate + lam);
            return q * q;
          },
          [&](const DiracKernel& d) { return std::exp(-d.lag * lam); },
      },
      k.variant());
}

std::optional<ChainSpec> chain_reduce(const DelayKernel& k) {
  if (const auto* e = std::get_if<ExponentialKernel>(&k.variant())) return ChainSpec{1, e->rate};
  if (const auto* e = std::get_if<ErlangKernel>(&k.variant())) return ChainSpec{2, e->rate};
  return std::nullopt;
}

State3 convolve_history(const DelayKernel& k, const HistoryView& history, double t,
                        double quad_step) {
  if (const auto* d = std::get_if<DiracKernel>(&k.variant())) return history.eval(t - d->lag);
  if (!(quad_step > 0.0)) throw DomainError("quad_step must be positive");

  double lo = 0.0;
  double hi = effective_support_end(k);
  std::vector<double> cuts;
  if (const auto* u = std::get_if<UniformKernel>(&k.variant())) {
    lo = u->offset;
    hi = u->offset + u->width;
  }

  // s beyond s_break reaches back before the breakpoint.
  const double s_break = t - history.breakpoint;
  State3 result = State3::Zero();
  if (history.constant_before && s_break < hi) {
    const double from = std::max(lo, s_break);
    // The full analytic tail keeps the kernel exactly normalized.
    result += tail_mass(k, from) * *history.constant_before;
    hi = std::max(lo, s_break);
  } else if (s_break > lo && s_break < hi) {
    cuts.push_back(s_break);
  }

  auto past = [&](double s) { return history.eval(t - s); };
  double a = lo;
  for (double c : cuts) {
    result += weighted_simpson(k, past, a, c, quad_step);
    a = c;
  }
  result += weighted_simpson(k, past, a, hi, quad_step);
  return result;
}

}  // namespace rigidmem
