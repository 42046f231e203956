#include "rigidmem/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rigidmem {

Observables Observables::rigid_body(const RigidBodyParams& p) {
  return {[p](const State3& x) { return hamiltonian(p, x); },
          [](const State3& x) { return rigidmem::casimir(x); }};
}

Observables Observables::euler_poincare(const InertiaSetup& s) {
  const State3 I = s.moments();
  return {[I](const State3& w) { return 0.5 * w.dot(I.cwiseProduct(w)); },
          [I](const State3& w) { return 0.5 * I.cwiseProduct(w).squaredNorm(); }};
}

Observables Observables::plain() {
  return {[](const State3& x) { return rigidmem::casimir(x); },
          [](const State3& x) { return rigidmem::casimir(x); }};
}

void Trajectory::fill_diagnostics(const Observables& obs) {
  energy.resize(states.size());
  casimir.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    energy[k] = obs.energy(states[k]);
    casimir[k] = obs.casimir(states[k]);
  }
}

State3 hermite(const State3& x0, const State3& d0, const State3& x1, const State3& d1, double h,
               double theta) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + theta;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * x0 + (h10 * h) * d0 + h01 * x1 + (h11 * h) * d1;
}

State3 dense_eval(const Trajectory& traj, double t) {
  if (traj.states.empty()) throw HistoryCoverageError("dense_eval on an empty trajectory");
  const double tol = 1e-12 * std::max(1.0, std::abs(traj.t_end()));
  if (t < traj.t0 - tol || t > traj.t_end() + tol)
    throw HistoryCoverageError("dense_eval: t outside the trajectory's time range");
  if (traj.states.size() == 1) return traj.states.front();

  const double u = (t - traj.t0) / traj.step;
  const auto last = traj.states.size() - 1;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9 && nearest >= 0.0 && nearest <= static_cast<double>(last))
    return traj.states[static_cast<std::size_t>(nearest)];
  auto k = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(last)));
  if (k == last) --k;
  const double theta = u - static_cast<double>(k);
  return hermite(traj.states[k], traj.derivatives[k], traj.states[k + 1], traj.derivatives[k + 1],
                 traj.step, theta);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv_header(std::ostream& os, const std::vector<std::string>& aux_names) {
  os << "t,x1,x2,x3,h,c";
  for (const auto& name : aux_names) os << ',' << name;
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  write_trajectory_csv_header(os, traj.aux_names);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State3& x = traj.states[k];
    os << format_double(traj.time(k)) << ',' << format_double(x[0]) << ',' << format_double(x[1])
       << ',' << format_double(x[2]) << ',' << format_double(traj.energy.at(k)) << ','
       << format_double(traj.casimir.at(k));
    for (const auto& col : traj.aux) os << ',' << format_double(col.at(k));
    os << '\n';
  }
}

}  // namespace rigidmem
