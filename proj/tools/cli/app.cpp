#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace rigidmem::cli {
namespace {

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Configuration file")->required();
  sub->add_option("--out", o.out, "Output CSV path (simulate defaults to run.output)");
  sub->add_option("--set", o.sets, "Override a config value: section.key=value");
}

std::vector<Override> overrides(const Options& o) {
  std::vector<Override> v;
  for (const auto& s : o.sets) v.push_back(parse_override(s));
  return v;
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw ConfigError({"--out: cannot open '" + path + "' for writing"});
  return f;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigid body dynamics with memory: simulations and stability analysis", "rigidmem"};
  app.require_subcommand(1);
  Options opt;
  auto* simulate = app.add_subcommand("simulate", "Integrate a system and write its trajectory CSV");
  auto* stability = app.add_subcommand("stability", "Analyse an equilibrium and print a report");
  auto* scan = app.add_subcommand("scan", "Sweep tau, alpha or m and write one verdict per point");
  for (auto* sub : {simulate, stability, scan}) add_common(sub, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const RunConfig cfg = load_config(opt.config, overrides(opt));
    // run.output names the trajectory file; other commands write only where --out says.
    const std::string path = simulate->parsed() && opt.out.empty() ? cfg.output : opt.out;
    if (simulate->parsed()) {
      if (path.empty()) throw ConfigError({"--out: no output path (set --out or run.output)"});
      // Buffered so a divergent run leaves no partial file behind.
      std::ostringstream csv, summary;
      cmd_simulate(cfg, csv, summary);
      *open_output(path) << csv.str();
      out << summary.str();
      out << "output = " << path << '\n';
    } else if (stability->parsed()) {
      std::unique_ptr<std::ofstream> f;
      if (!path.empty()) f = open_output(path);
      cmd_stability(cfg, f.get(), out);
      if (f) out << "output = " << path << '\n';
    } else {
      if (path.empty()) throw ConfigError({"--out: required by scan"});
      auto f = open_output(path);
      cmd_scan(cfg, *f, out);
      out << "output = " << path << '\n';
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << " (last valid t = " << format_double(e.last_valid_time())
        << ")\n";
    return kExitDivergence;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace rigidmem::cli
