#include "rigidmem/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rigidmem/fraccalc.hpp"

namespace rigidmem {
namespace {

void check_state(const State3& x, double t_last_valid) {
  if (!x.allFinite() || x.norm() > kDivergenceThreshold) {
    std::ostringstream os;
    os << "integration diverged after t = " << t_last_valid;
    throw DivergenceError(os.str(), t_last_valid);
  }
}

void check_horizon(double t_end, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
}

// The solution under construction plus phi, evaluable a little past the last node
// so RK stages and fractional correctors can see the step in progress.
class SolutionHistory {
 public:
  SolutionHistory(const HistorySpec& phi, const Trajectory& traj) : phi_(phi), traj_(traj) {}

  State3 eval(double t) const {
    if (t <= traj_.t0) return phi_(t);
    const std::size_t n = traj_.size();
    const double h = traj_.step;
    const double t_last = traj_.t_end();
    if (t <= t_last) return dense_eval(traj_, t);
    if (t > t_last + h * (1.0 + 1e-9))
      throw HistoryCoverageError("delayed value requested beyond the integrated history");
    if (n == 1) return traj_.states[0] + (t - t_last) * traj_.derivatives[0];
    const double theta = (t - traj_.time(n - 2)) / h;
    return hermite(traj_.states[n - 2], traj_.derivatives[n - 2], traj_.states[n - 1],
                   traj_.derivatives[n - 1], h, theta);
  }

  HistoryView view() const {
    return HistoryView{[this](double t) { return eval(t); }, traj_.t0, phi_.constant_value()};
  }

 private:
  const HistorySpec& phi_;
  const Trajectory& traj_;
};

bool is_zero_lag(const DelayKernel& k) {
  const auto* d = std::get_if<DiracKernel>(&k.variant());
  return d != nullptr && d->lag == 0.0;
}

}  // namespace

HistorySpec HistorySpec::constant(const State3& value) {
  HistorySpec h;
  h.constant_ = value;
  return h;
}

HistorySpec HistorySpec::function(std::function<State3(double)> phi) {
  if (!phi) throw DomainError("history function is empty");
  HistorySpec h;
  h.phi_ = std::move(phi);
  return h;
}

State3 HistorySpec::operator()(double s) const {
  if (constant_) return *constant_;
  if (s > 0.0) throw HistoryCoverageError("initial function evaluated at s > 0");
  return phi_(s);
}

void FracConfig::validate() const {
  if (!(order > 0.0 && order <= 1.0)) throw DomainError("fractional order must lie in (0, 1]");
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("fractional step must be positive");
  if (corrector_iterations < 1 || corrector_iterations > 5)
    throw DomainError("corrector iterations must be between 1 and 5");
  if (memory_window) {
    if (*memory_window == 0) throw DomainError("memory window must be positive");
    if (static_cast<double>(*memory_window) * step < 1.0)
      throw DomainError("memory window must span at least one time unit (L * step >= 1)");
  }
}

std::size_t step_count(double t_end, double h) {
  check_horizon(t_end, h);
  const double n = std::ceil(t_end / h - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

Trajectory integrate_rk4(const OdeRhs& rhs, const State3& x0, double t_end, double h,
                         const Observables& obs) {
  const std::size_t steps = step_count(t_end, h);
  Trajectory traj;
  traj.step = t_end / static_cast<double>(steps);
  const double dt = traj.step;
  traj.states.reserve(steps + 1);
  traj.derivatives.reserve(steps + 1);

  check_state(x0, 0.0);
  traj.states.push_back(x0);
  traj.derivatives.push_back(rhs(x0));
  for (std::size_t n = 0; n < steps; ++n) {
    const State3& x = traj.states[n];
    const State3 k1 = traj.derivatives[n];
    const State3 k2 = rhs(x + 0.5 * dt * k1);
    const State3 k3 = rhs(x + 0.5 * dt * k2);
    const State3 k4 = rhs(x + dt * k3);
    const State3 next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_state(next, traj.time(n));
    traj.states.push_back(next);
    traj.derivatives.push_back(rhs(next));
  }
  traj.fill_diagnostics(obs);
  return traj;
}

Trajectory integrate_dde(const DelayedRhs& rhs, const DelayKernel& kernel, const HistorySpec& phi,
                         double t_end, double h, const Observables& obs, double quad_step) {
  const std::size_t steps = step_count(t_end, h);
  Trajectory traj;
  traj.step = t_end / static_cast<double>(steps);
  const double dt = traj.step;
  if (quad_step <= 0.0) quad_step = dt;
  traj.states.reserve(steps + 1);
  traj.derivatives.reserve(steps + 1);

  const SolutionHistory history(phi, traj);
  const HistoryView view = history.view();
  const bool zero_lag = is_zero_lag(kernel);
  auto delayed = [&](double t, const State3& x_stage) -> State3 {
    if (zero_lag) return x_stage;
    return convolve_history(kernel, view, t, quad_step);
  };

  const State3 x0 = phi(0.0);
  check_state(x0, 0.0);
  traj.states.push_back(x0);
  traj.derivatives.push_back(rhs(x0, delayed(0.0, x0)));

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = traj.time(n);
    const State3 x = traj.states[n];
    const State3 k1 = traj.derivatives[n];
    const State3 x2 = x + 0.5 * dt * k1;
    const State3 k2 = rhs(x2, delayed(t + 0.5 * dt, x2));
    const State3 x3 = x + 0.5 * dt * k2;
    const State3 k3 = rhs(x3, delayed(t + 0.5 * dt, x3));
    const State3 x4 = x + dt * k3;
    const State3 k4 = rhs(x4, delayed(t + dt, x4));
    const State3 next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_state(next, t);

    // k4 stands in for the node derivative until the delayed value at t + dt
    // can be formed from the completed step.
    traj.states.push_back(next);
    traj.derivatives.push_back(k4);
    traj.derivatives.back() = rhs(next, delayed(t + dt, next));
  }
  traj.fill_diagnostics(obs);
  return traj;
}

Trajectory integrate_chain(const DelayedRhs& rhs, const ChainSpec& chain, const HistorySpec& phi,
                           double t_end, double h, const Observables& obs) {
  if (chain.stages < 1 || chain.stages > 2) throw DomainError("chain must have 1 or 2 stages");
  if (!(chain.rate > 0.0)) throw DomainError("chain rate must be positive");
  const std::size_t steps = step_count(t_end, h);
  const double dt = t_end / static_cast<double>(steps);
  const int stages = chain.stages;
  const double rate = chain.rate;
  const Eigen::Index dim = 3 + 3 * stages;

  auto field = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(dim);
    const State3 x = y.head<3>();
    const State3 xd = y.segment<3>(3 * stages);
    dy.head<3>() = rhs(x, xd);
    dy.segment<3>(3) = rate * (x - y.segment<3>(3));
    if (stages == 2) dy.segment<3>(6) = rate * (y.segment<3>(3) - y.segment<3>(6));
    return dy;
  };

  // Chain stages start at the exponential / Erlang averages of phi.
  const HistoryView phi_view{[&phi](double t) { return phi(t); }, 0.0, phi.constant_value()};
  Eigen::VectorXd y(dim);
  y.head<3>() = phi(0.0);
  y.segment<3>(3) = convolve_history(DelayKernel::exponential(rate), phi_view, 0.0, dt);
  if (stages == 2) y.segment<3>(6) = convolve_history(DelayKernel::erlang(rate), phi_view, 0.0, dt);

  Trajectory traj;
  traj.step = dt;
  for (int s = 1; s <= stages; ++s)
    for (int c = 1; c <= 3; ++c)
      traj.aux_names.push_back("eta" + std::to_string(s) + "_" + std::to_string(c));
  traj.aux.assign(traj.aux_names.size(), {});

  auto record = [&](const Eigen::VectorXd& state, const Eigen::VectorXd& deriv) {
    traj.states.push_back(state.head<3>());
    traj.derivatives.push_back(deriv.head<3>());
    for (std::size_t i = 0; i < traj.aux.size(); ++i)
      traj.aux[i].push_back(state[3 + static_cast<Eigen::Index>(i)]);
  };

  check_state(y.head<3>(), 0.0);
  Eigen::VectorXd k1 = field(y);
  record(y, k1);
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::VectorXd k2 = field(y + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = field(y + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = field(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite() || y.norm() > kDivergenceThreshold)
      check_state(State3::Constant(std::numeric_limits<double>::infinity()), traj.time(n));
    k1 = field(y);
    record(y, k1);
  }
  traj.fill_diagnostics(obs);
  return traj;
}

Trajectory integrate_frac_dde(const DelayedRhs& rhs, const FracConfig& cfg,
                              const DelayKernel& kernel, const HistorySpec& phi, double t_end,
                              const Observables& obs, double quad_step) {
  cfg.validate();
  const std::size_t steps = step_count(t_end, cfg.step);
  const double h = t_end / static_cast<double>(steps);
  const double alpha = cfg.order;
  if (quad_step <= 0.0) quad_step = h;

  // Product-rectangle (predictor) and product-trapezoid (corrector) weights by lag k = n - j.
  std::vector<double> b(steps + 1), a(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const auto kd = static_cast<double>(k);
    b[k] = std::pow(kd + 1.0, alpha) - std::pow(kd, alpha);
    a[k] = std::pow(kd + 2.0, alpha + 1.0) + std::pow(kd, alpha + 1.0) -
           2.0 * std::pow(kd + 1.0, alpha + 1.0);
  }
  auto a_first = [alpha](std::size_t n) {
    const auto nd = static_cast<double>(n);
    return std::pow(nd, alpha + 1.0) - (nd - alpha) * std::pow(nd + 1.0, alpha);
  };
  const double pred_scale = std::pow(h, alpha) / gamma_fn(alpha + 1.0);
  const double corr_scale = std::pow(h, alpha) / gamma_fn(alpha + 2.0);

  Trajectory traj;
  traj.step = h;
  traj.states.reserve(steps + 1);
  traj.derivatives.reserve(steps + 1);

  // dx/dt samples for dense output: second-order one-sided at the newest node,
  // centred once its right neighbour exists.
  auto set_node_derivatives = [&](std::size_t k) {
    auto& x = traj.states;
    auto& d = traj.derivatives;
    if (k == 0) {
      d[0].setZero();
      return;
    }
    d[k] = (k == 1) ? State3((x[1] - x[0]) / h)
                    : State3((3.0 * x[k] - 4.0 * x[k - 1] + x[k - 2]) / (2.0 * h));
    if (k == 1) {
      d[0] = (x[1] - x[0]) / h;
    } else {
      d[k - 1] = (x[k] - x[k - 2]) / (2.0 * h);
      if (k == 2) d[0] = (x[1] - x[0]) / h;
    }
  };

  const SolutionHistory history(phi, traj);
  const HistoryView view = history.view();
  const bool zero_lag = is_zero_lag(kernel);
  auto delayed = [&](double t, const State3& x_node) -> State3 {
    if (zero_lag) return x_node;
    return convolve_history(kernel, view, t, quad_step);
  };

  const State3 x0 = phi(0.0);
  check_state(x0, 0.0);
  traj.states.push_back(x0);
  traj.derivatives.push_back(State3::Zero());
  std::vector<State3> f;
  f.reserve(steps + 1);
  f.push_back(rhs(x0, delayed(0.0, x0)));

  double max_f = f[0].lpNorm<Eigen::Infinity>();
  double truncation_bound = 0.0;

  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t jmin =
        cfg.memory_window && n + 1 > *cfg.memory_window ? n + 1 - *cfg.memory_window : 0;

    State3 pred_sum = State3::Zero();
    State3 corr_sum = State3::Zero();
    for (std::size_t j = jmin; j <= n; ++j) {
      pred_sum += b[n - j] * f[j];
      if (j > 0) corr_sum += a[n - j] * f[j];
    }
    if (jmin == 0) corr_sum += a_first(n) * f[0];
    if (jmin > 0) {
      const double dropped = std::pow(static_cast<double>(n + 1), alpha) -
                             std::pow(static_cast<double>(n + 1 - jmin), alpha);
      truncation_bound = std::max(truncation_bound, pred_scale * dropped * max_f);
    }

    const double t_next = traj.time(n + 1);
    State3 x = x0 + pred_scale * pred_sum;
    check_state(x, traj.time(n));
    traj.states.push_back(x);
    traj.derivatives.push_back(State3::Zero());
    set_node_derivatives(n + 1);

    for (int it = 0; it < cfg.corrector_iterations; ++it) {
      const State3 fx = rhs(x, delayed(t_next, x));
      x = x0 + corr_scale * (fx + corr_sum);
      check_state(x, traj.time(n));
      traj.states.back() = x;
      set_node_derivatives(n + 1);
    }
    f.push_back(rhs(x, delayed(t_next, x)));
    max_f = std::max(max_f, f.back().lpNorm<Eigen::Infinity>());
  }

  if (cfg.memory_window) traj.memory_truncation_bound = truncation_bound;
  traj.fill_diagnostics(obs);
  return traj;
}

Trajectory integrate_frac_abm(const OdeRhs& rhs, const FracConfig& cfg, const State3& x0,
                              double t_end, const Observables& obs) {
  return integrate_frac_dde([&rhs](const State3& x, const State3&) { return rhs(x); }, cfg,
                            DelayKernel::dirac(0.0), HistorySpec::constant(x0), t_end, obs);
}

}  // namespace rigidmem
