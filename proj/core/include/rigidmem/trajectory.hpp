#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rigidmem/models.hpp"
#include "rigidmem/types.hpp"

namespace rigidmem {

/// Scalar functionals recorded per sample as the `h` and `c` diagnostics.
struct Observables {
  std::function<double(const State3&)> energy;
  std::function<double(const State3&)> casimir;

  /// h and c of the rigid body with coefficients p.
  static Observables rigid_body(const RigidBodyParams& p);
  /// Kinetic energy Omega.I.Omega / 2 and |I Omega|^2 / 2 for the Euler-Poincare body.
  static Observables euler_poincare(const InertiaSetup& s);
  /// |x|^2 / 2 for both columns; used when no physical energy applies.
  static Observables plain();
};

/// Uniformly sampled solution with derivative samples for cubic Hermite output.
struct Trajectory {
  double t0 = 0.0;
  double step = 0.0;
  std::vector<State3> states;
  std::vector<State3> derivatives;
  std::vector<double> energy;
  std::vector<double> casimir;

  /// Extra per-sample columns (linear-chain stages), written after `c` in CSV.
  std::vector<std::string> aux_names;
  std::vector<std::vector<double>> aux;

  /// Upper bound on the history dropped by a windowed fractional memory, if any.
  std::optional<double> memory_truncation_bound;

  std::size_t size() const noexcept { return states.size(); }
  double time(std::size_t k) const noexcept { return t0 + step * static_cast<double>(k); }
  double t_end() const noexcept { return states.empty() ? t0 : time(states.size() - 1); }

  /// Recomputes energy/casimir from the stored states.
  void fill_diagnostics(const Observables& obs);
};

/// Cubic Hermite interpolation between the bracketing samples; exact at nodes.
/// Throws HistoryCoverageError outside [t0, t_end].
State3 dense_eval(const Trajectory& traj, double t);

/// Hermite cubic through (x0, d0) at theta = 0 and (x1, d1) at theta = 1 on an
/// interval of length h. theta outside [0, 1] extrapolates.
State3 hermite(const State3& x0, const State3& d0, const State3& x1, const State3& d1, double h,
               double theta);

/// Header `t,x1,x2,x3,h,c[,aux...]`, one row per sample, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv_header(std::ostream& os, const std::vector<std::string>& aux_names = {});

/// Round-trip (%.17g) decimal form used in every CSV this library writes.
std::string format_double(double v);

}  // namespace rigidmem
