#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>

#include "rigidmem/types.hpp"

namespace rigidmem {

struct UniformKernel {
  double offset;  ///< a >= 0; the density is 1/width on [offset, offset + width].
  double width;   ///< tau > 0
};
struct ExponentialKernel {
  double rate;  ///< k(s) = rate e^{-rate s}
};
struct ErlangKernel {
  double rate;  ///< k(s) = rate^2 s e^{-rate s}
};
struct DiracKernel {
  double lag;  ///< k(s) = delta(s - lag)
};

/// A repartition density k(s) on [0, inf) weighting past states.
class DelayKernel {
 public:
  using Variant = std::variant<UniformKernel, ExponentialKernel, ErlangKernel, DiracKernel>;

  static DelayKernel uniform(double offset, double width);
  static DelayKernel exponential(double rate);
  static DelayKernel erlang(double rate);
  static DelayKernel dirac(double lag);

  const Variant& variant() const noexcept { return v_; }
  std::string_view name() const noexcept;
  bool is_dirac() const noexcept { return std::holds_alternative<DiracKernel>(v_); }

 private:
  explicit DelayKernel(Variant v) : v_(v) {}
  Variant v_;
};

/// Exact linear-chain representation of exponential (1 stage) and Erlang (2 stages) kernels.
struct ChainSpec {
  int stages;
  double rate;
};

/// Pointwise density. Throws DomainError for s < 0 and for Dirac kernels.
double density(const DelayKernel& k, double s);

/// Kernel mass on [s, inf).
double tail_mass(const DelayKernel& k, double s);

/// End of the support used for quadrature; exponential/Erlang tails are cut
/// where the remaining mass drops below 1e-12.
double effective_support_end(const DelayKernel& k);

/// k^(1)(lam) = int_0^inf k(s) e^{-lam s} ds. Throws DomainError where the
/// integral diverges (Re lam <= -rate for exponential/Erlang).
Complex laplace(const DelayKernel& k, Complex lam);

std::optional<ChainSpec> chain_reduce(const DelayKernel& k);

/// A dense-evaluable past. `eval` must accept any time the convolution asks for.
/// Before `breakpoint` the history is the initial function; if that function is
/// a known constant, pass it as `constant_before` and the corresponding part of
/// the convolution is taken in closed form.
struct HistoryView {
  std::function<State3(double)> eval;
  double breakpoint = -std::numeric_limits<double>::infinity();
  std::optional<State3> constant_before;
};

/// xd(t) = int k(s) x(t - s) ds by composite Simpson with panels of at most
/// `quad_step`, split at `breakpoint` and at the kernel's kinks. Dirac kernels
/// sample the history exactly at t - lag.
State3 convolve_history(const DelayKernel& k, const HistoryView& history, double t,
                        double quad_step);

}  // namespace rigidmem
