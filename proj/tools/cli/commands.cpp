#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "rigidmem/integrators.hpp"

namespace rigidmem::cli {
namespace {

State3 initial_state(const RunConfig& cfg) {
  if (!cfg.x0) throw ConfigError({"config: initial.x0: missing (required by simulate)"});
  State3 x = State3::Zero();
  for (std::size_t i = 0; i < cfg.x0->size(); ++i) x[static_cast<Eigen::Index>(i)] = (*cfg.x0)[i];
  return x;
}

Observables observables(const RunConfig& cfg) {
  if (cfg.params) return Observables::rigid_body(*cfg.params);
  if (cfg.body) return Observables::euler_poincare(*cfg.body);
  return Observables::plain();
}

DelayedRhs delayed_rhs(const RunConfig& cfg) {
  switch (cfg.kind) {
    case Kind::kDelayed: {
      const RigidBodyParams p = *cfg.params;
      return [p](const State3& x, const State3& xd) { return rhs_delayed(p, x, xd); };
    }
    case Kind::kRevisedDelayed: {
      const RigidBodyParams p = *cfg.params;
      return [p](const State3& x, const State3& xd) { return rhs_revised_delayed(p, x, xd); };
    }
    case Kind::kEpDelayed: {
      const InertiaSetup s = *cfg.body;
      return [s](const State3& x, const State3& xd) { return rhs_ep_delayed(s, x, xd); };
    }
    case Kind::kScalar18: {
      const double a = cfg.a;
      return [a](const State3&, const State3& xd) { return State3(a * xd[0], 0.0, 0.0); };
    }
    case Kind::kPlanar19: {
      const double k1 = cfg.k1, k2 = cfg.k2;
      return [k1, k2](const State3& x, const State3& xd) {
        return State3(x[1] - k1 * x[0], -(k1 + k2) * x[1] + xd[0], 0.0);
      };
    }
    default:
      throw DomainError("kind has no delayed right-hand side");
  }
}

double max_rel_drift(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double scale = std::max(std::abs(v.front()), 1e-300);
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()) / scale);
  return d;
}

void print_state(std::ostream& os, const char* key, const State3& x) {
  os << key << " = " << format_double(x[0]) << ", " << format_double(x[1]) << ", "
     << format_double(x[2]) << '\n';
}

RootInfo single_root_for(const StabilityReport& r) {
  if (auto d = r.dominant_root()) return *d;
  return RootInfo{Complex(std::nan(""), std::nan("")), std::nan("")};
}

RunConfig with_param(RunConfig cfg, ScanAxis axis, double v) {
  switch (axis) {
    case ScanAxis::kTau:
      cfg.kernel->kernel = DelayKernel::dirac(v);
      break;
    case ScanAxis::kAlpha:
      cfg.fractional->order = v;
      break;
    case ScanAxis::kM:
      if (cfg.body) cfg.body = cfg.body->with_m(v);
      cfg.m = v;
      break;
  }
  return cfg;
}

}  // namespace

Trajectory run_simulation(const RunConfig& cfg) {
  const State3 x0 = initial_state(cfg);
  const Observables obs = observables(cfg);
  if (cfg.t_end == 0.0) {
    Trajectory empty;
    if (cfg.kernel && cfg.kernel->method == DelayMethod::kChain) {
      const int stages = chain_reduce(cfg.kernel->kernel)->stages;
      for (int s = 1; s <= stages; ++s)
        for (int c = 1; c <= 3; ++c)
          empty.aux_names.push_back("eta" + std::to_string(s) + "_" + std::to_string(c));
    }
    return empty;
  }

  switch (cfg.kind) {
    case Kind::kClassical: {
      const RigidBodyParams p = *cfg.params;
      return integrate_rk4([p](const State3& x) { return rhs_classical(p, x); }, x0, cfg.t_end,
                           cfg.step, obs);
    }
    case Kind::kRevised: {
      const RigidBodyParams p = *cfg.params;
      return integrate_rk4([p](const State3& x) { return rhs_revised(p, x); }, x0, cfg.t_end,
                           cfg.step, obs);
    }
    case Kind::kFractional:
    case Kind::kFractionalRevised: {
      const RigidBodyParams p = *cfg.params;
      const bool revised = cfg.kind == Kind::kFractionalRevised;
      OdeRhs f = revised ? OdeRhs([p](const State3& x) { return rhs_revised(p, x); })
                         : OdeRhs([p](const State3& x) { return rhs_classical(p, x); });
      return integrate_frac_abm(f, *cfg.fractional, x0, cfg.t_end, obs);
    }
    default:
      break;
  }

  const DelayedRhs rhs = delayed_rhs(cfg);
  const HistorySpec phi = HistorySpec::constant(x0);
  const KernelConfig& kc = *cfg.kernel;
  if (is_fractional(cfg.kind))
    return integrate_frac_dde(rhs, *cfg.fractional, kc.kernel, phi, cfg.t_end, obs, kc.quad_step);
  if (kc.method == DelayMethod::kChain)
    return integrate_chain(rhs, *chain_reduce(kc.kernel), phi, cfg.t_end, cfg.step, obs);
  return integrate_dde(rhs, kc.kernel, phi, cfg.t_end, cfg.step, obs, kc.quad_step);
}

void cmd_simulate(const RunConfig& cfg, std::ostream& csv, std::ostream& summary) {
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = run_simulation(cfg);
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_trajectory_csv(csv, traj);

  summary << "command = simulate\n";
  summary << "kind = " << to_string(cfg.kind) << '\n';
  summary << "samples = " << traj.size() << '\n';
  if (traj.size() > 0) {
    summary << "t_end = " << format_double(traj.t_end()) << '\n';
    summary << "step = " << format_double(traj.step) << '\n';
    print_state(summary, "x_end", traj.states.back());
    summary << "h_drift = " << format_double(max_rel_drift(traj.energy)) << '\n';
    summary << "c_drift = " << format_double(max_rel_drift(traj.casimir)) << '\n';
    summary << "c_start = " << format_double(traj.casimir.front()) << '\n';
    summary << "c_end = " << format_double(traj.casimir.back()) << '\n';
  }
  if (traj.memory_truncation_bound)
    summary << "memory_truncation_bound = " << format_double(*traj.memory_truncation_bound) << '\n';
  summary << "runtime_s = " << format_double(runtime) << '\n';
}

StabilityReport run_stability(const RunConfig& cfg) {
  switch (cfg.kind) {
    case Kind::kClassical:
    case Kind::kRevised:
      return matignon_classify(
          char_frac_equilibrium(*cfg.params, cfg.equilibrium, cfg.m, cfg.kind == Kind::kRevised), 1.0);
    case Kind::kFractional:
    case Kind::kFractionalRevised: {
      const bool revised = cfg.kind == Kind::kFractionalRevised;
      StabilityReport r = matignon_classify(
          char_frac_equilibrium(*cfg.params, cfg.equilibrium, cfg.m, revised), cfg.fractional->order);
      r.metadata.emplace_back("equilibrium", to_string(cfg.equilibrium));
      return r;
    }
    case Kind::kEpDelayed:
      return ep_delay_check(*cfg.body, cfg.kernel->kernel, cfg.contour);
    case Kind::kScalar18:
      return scalar_frac_delay_check(cfg.a, cfg.fractional->order,
                                     std::get<DiracKernel>(cfg.kernel->kernel.variant()).lag,
                                     cfg.contour);
    case Kind::kPlanar19:
      return planar_frac_delay_check(cfg.k1, cfg.k2, cfg.fractional->order,
                                     std::get<DiracKernel>(cfg.kernel->kernel.variant()).lag,
                                     cfg.contour);
    case Kind::kDelayed:
    case Kind::kRevisedDelayed:
      break;
  }
  throw ConfigError({"config: system.kind: no equilibrium analysis for kind " +
                     std::string(to_string(cfg.kind))});
}

void cmd_stability(const RunConfig& cfg, std::ostream* csv, std::ostream& summary) {
  const StabilityReport r = run_stability(cfg);
  summary << "command = stability\n";
  summary << "kind = " << to_string(cfg.kind) << '\n';
  summary << r.to_text();
  if (csv) {
    *csv << "root_re,root_im,margin,verdict\n";
    for (const auto& root : r.roots)
      *csv << format_double(root.root.real()) << ',' << format_double(root.root.imag()) << ','
           << format_double(root.margin) << ',' << to_string(r.verdict) << '\n';
  }
}

std::vector<double> scan_grid(const ScanConfig& scan) {
  std::vector<double> grid;
  if (scan.steps == 0) return grid;
  if (scan.steps == 1) return {scan.lo};
  const double n = static_cast<double>(scan.steps - 1);
  for (std::size_t i = 0; i < scan.steps; ++i)
    grid.push_back(i + 1 == scan.steps ? scan.hi
                                       : scan.lo + (scan.hi - scan.lo) * static_cast<double>(i) / n);
  return grid;
}

std::vector<ScanRow> run_scan(const RunConfig& cfg) {
  if (!cfg.scan) throw ConfigError({"config: [scan] section is required by scan"});
  std::vector<ScanRow> rows;
  for (double v : scan_grid(*cfg.scan)) {
    ScanRow row;
    row.param = v;
    try {
      const StabilityReport r = run_stability(with_param(cfg, cfg.scan->axis, v));
      row.root = single_root_for(r);
      row.verdict = to_string(r.verdict);
    } catch (const std::exception& e) {
      row.verdict = std::string("error: ") + e.what();
      std::replace(row.verdict.begin(), row.verdict.end(), ',', ';');
      std::replace(row.verdict.begin(), row.verdict.end(), '\n', ' ');
    }
    rows.push_back(row);
  }
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "param,root_re,root_im,margin,verdict\n";
  for (const auto& row : rows) {
    os << format_double(row.param) << ',';
    if (row.root)
      os << format_double(row.root->root.real()) << ',' << format_double(row.root->root.imag())
         << ',' << format_double(row.root->margin);
    else
      os << "nan,nan,nan";
    os << ',' << row.verdict << '\n';
  }
}

void cmd_scan(const RunConfig& cfg, std::ostream& csv, std::ostream& summary) {
  const auto rows = run_scan(cfg);
  write_scan_csv(csv, rows);
  std::size_t failed = 0, flips = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].verdict.rfind("error", 0) == 0) ++failed;
    if (i > 0 && rows[i].verdict != rows[i - 1].verdict) ++flips;
  }
  summary << "command = scan\n";
  summary << "kind = " << to_string(cfg.kind) << '\n';
  summary << "axis = " << to_string(cfg.scan->axis) << '\n';
  summary << "points = " << rows.size() << '\n';
  summary << "failed_points = " << failed << '\n';
  summary << "verdict_changes = " << flips << '\n';
}

}  // namespace rigidmem::cli
