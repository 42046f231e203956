#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>

#include "rigidmem/kernels.hpp"
#include "rigidmem/trajectory.hpp"
#include "rigidmem/types.hpp"

namespace rigidmem {

using OdeRhs = std::function<State3(const State3& x)>;
/// Right-hand side of a delayed system: f(x(t), xd(t)) with xd the kernel average of the past.
using DelayedRhs = std::function<State3(const State3& x, const State3& xd)>;

/// Integrations abort once ||x|| exceeds this.
inline constexpr double kDivergenceThreshold = 1e8;

/// The initial function phi on (-inf, 0].
class HistorySpec {
 public:
  static HistorySpec constant(const State3& value);
  static HistorySpec function(std::function<State3(double)> phi);

  State3 operator()(double s) const;
  bool is_constant() const noexcept { return constant_.has_value(); }
  const std::optional<State3>& constant_value() const noexcept { return constant_; }

 private:
  std::optional<State3> constant_;
  std::function<State3(double)> phi_;
};

struct FracConfig {
  double order = 1.0;  ///< Caputo order in (0, 1]; 1 is the classical limit.
  double step = 1e-3;
  int corrector_iterations = 1;
  /// Fixed memory window in steps; nullopt keeps the full history.
  std::optional<std::size_t> memory_window;

  /// Throws DomainError on an invalid configuration.
  void validate() const;
};

/// Number of uniform steps covering [0, t_end] with spacing at most h.
std::size_t step_count(double t_end, double h);

/// Classical fourth-order Runge-Kutta on [0, t_end].
Trajectory integrate_rk4(const OdeRhs& rhs, const State3& x0, double t_end, double h,
                         const Observables& obs = Observables::plain());

/// Method of steps with RK4 stages. The delayed average at each stage comes from
/// convolve_history over the Hermite-interpolated solution and phi. quad_step <= 0
/// selects the integration step.
Trajectory integrate_dde(const DelayedRhs& rhs, const DelayKernel& kernel, const HistorySpec& phi,
                         double t_end, double h, const Observables& obs = Observables::plain(),
                         double quad_step = 0.0);

/// RK4 on the system augmented with chain stages
/// eta1' = rate (x - eta1), eta2' = rate (eta1 - eta2); xd is the last stage.
Trajectory integrate_chain(const DelayedRhs& rhs, const ChainSpec& chain, const HistorySpec& phi,
                           double t_end, double h, const Observables& obs = Observables::plain());

/// Fractional Adams-Bashforth-Moulton predictor-corrector for D^order x = f(x).
Trajectory integrate_frac_abm(const OdeRhs& rhs, const FracConfig& cfg, const State3& x0,
                              double t_end, const Observables& obs = Observables::plain());

/// Fractional ABM for D^order x = f(x, xd) with a distributed delay.
Trajectory integrate_frac_dde(const DelayedRhs& rhs, const FracConfig& cfg,
                              const DelayKernel& kernel, const HistorySpec& phi, double t_end,
                              const Observables& obs = Observables::plain(),
                              double quad_step = 0.0);

}  // namespace rigidmem
