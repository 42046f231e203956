#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rigidmem/integrators.hpp"
#include "rigidmem/kernels.hpp"
#include "rigidmem/models.hpp"
#include "rigidmem/stability.hpp"

namespace rigidmem::cli {

/// Invalid configuration; the message lists every violation with its key and line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Kind {
  kClassical,
  kRevised,
  kDelayed,
  kRevisedDelayed,
  kEpDelayed,
  kFractional,
  kFractionalRevised,
  kScalar18,
  kPlanar19,
};

std::string_view to_string(Kind k);
bool is_delayed(Kind k);
bool is_fractional(Kind k);
bool is_rigid_body(Kind k);

enum class DelayMethod { kQuadrature, kChain };

struct KernelConfig {
  DelayKernel kernel = DelayKernel::dirac(0.0);
  DelayMethod method = DelayMethod::kQuadrature;
  double quad_step = 0.0;  ///< 0 selects the integration step.
};

enum class ScanAxis { kTau, kAlpha, kM };

std::string_view to_string(ScanAxis a);

struct ScanConfig {
  ScanAxis axis = ScanAxis::kTau;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;
};

struct RunConfig {
  Kind kind = Kind::kClassical;

  std::optional<RigidBodyParams> params;  ///< rigid-body kinds
  std::optional<InertiaSetup> body;       ///< ep-delayed
  double m = 1.0;                         ///< equilibrium magnitude
  double a = 0.0;                         ///< scalar-18
  double k1 = 0.0, k2 = 0.0;              ///< planar-19

  std::optional<KernelConfig> kernel;
  std::optional<FracConfig> fractional;

  std::optional<std::vector<double>> x0;

  double t_end = 10.0;
  double step = 1e-3;
  std::string output;

  Equilibrium equilibrium = Equilibrium::kM1;
  ContourOptions contour;

  std::optional<ScanConfig> scan;
};

/// `section.key=value`, applied after the file as if it were an extra line.
struct Override {
  std::string section;
  std::string key;
  std::string value;
};

/// Parses `section.key=value`; throws ConfigError when malformed.
Override parse_override(std::string_view text);

/// Line-oriented format: `[section]` headers, `key = value` lines, `#` comments.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

RunConfig load_config(const std::string& path, const std::vector<Override>& overrides = {});

}  // namespace rigidmem::cli
