#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rigidmem/stability.hpp"
#include "rigidmem/trajectory.hpp"

namespace rigidmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDivergence = 3;

/// Integrates the configured system. t_end = 0 yields an empty trajectory.
Trajectory run_simulation(const RunConfig& cfg);

/// Writes the trajectory CSV to `csv` and a summary block to `summary`.
void cmd_simulate(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);

StabilityReport run_stability(const RunConfig& cfg);

/// Writes the report text to `summary` and, if given, the roots as CSV.
void cmd_stability(const RunConfig& cfg, std::ostream* csv, std::ostream& summary);

struct ScanRow {
  double param = 0.0;
  std::optional<RootInfo> root;
  std::string verdict;  ///< verdict name, or `error: ...` when the point failed
};

/// Grid points lo + (hi - lo) i / (steps - 1); the last point is exactly hi.
std::vector<double> scan_grid(const ScanConfig& scan);

std::vector<ScanRow> run_scan(const RunConfig& cfg);
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void cmd_scan(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rigidmem::cli
