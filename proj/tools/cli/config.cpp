#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace rigidmem::cli {
namespace {

struct Entry {
  std::string value;
  std::string where;  // "line N" or "--set"
};

struct Section {
  std::string where;
  std::map<std::string, Entry> entries;
};

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"system", {"kind", "p", "inertia", "coupling", "m", "a", "k1", "k2"}},
      {"kernel", {"type", "lag", "offset", "width", "rate", "method", "quad_step"}},
      {"fractional", {"order", "corrector_iterations", "memory_window"}},
      {"initial", {"x0"}},
      {"run", {"t_end", "step", "output"}},
      {"stability", {"equilibrium", "sigma_max", "omega_max", "segments"}},
      {"scan", {"axis", "lo", "hi", "steps"}},
  };
  return s;
}

bool known_key(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  if (it == schema().end()) return false;
  for (const auto& k : it->second)
    if (k == key) return true;
  return false;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

class Builder {
 public:
  std::map<std::string, Section> sections;
  std::vector<std::string> problems;

  void fail(const Entry& e, const std::string& section, const std::string& key,
            const std::string& what) {
    problems.push_back(e.where + ": " + section + "." + key + ": " + what);
  }

  bool has_section(const std::string& s) const { return sections.count(s) != 0; }

  const Entry* find(const std::string& s, const std::string& k) const {
    const auto it = sections.find(s);
    if (it == sections.end()) return nullptr;
    const auto e = it->second.entries.find(k);
    return e == it->second.entries.end() ? nullptr : &e->second;
  }

  void missing(const std::string& s, const std::string& k, const std::string& why) {
    const auto it = sections.find(s);
    const std::string where = it == sections.end() ? "config" : it->second.where;
    problems.push_back(where + ": " + s + "." + k + ": missing (" + why + ")");
  }

  std::optional<double> number(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    const auto v = to_double(trim(e->value));
    if (!v) fail(*e, s, k, "expected a finite number, got '" + e->value + "'");
    return v;
  }

  double number_or(const std::string& s, const std::string& k, double fallback) {
    return number(s, k).value_or(fallback);
  }

  std::optional<double> required_number(const std::string& s, const std::string& k,
                                        const std::string& why) {
    if (!find(s, k)) {
      missing(s, k, why);
      return std::nullopt;
    }
    return number(s, k);
  }

  std::optional<long> integer(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    const auto v = to_double(trim(e->value));
    if (!v || *v != std::floor(*v) || std::abs(*v) > 1e15) {
      fail(*e, s, k, "expected an integer, got '" + e->value + "'");
      return std::nullopt;
    }
    return static_cast<long>(*v);
  }

  std::optional<std::vector<double>> list(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = to_double(trim(item));
      if (!v) {
        fail(*e, s, k, "expected comma-separated numbers, got '" + e->value + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<double>> fixed_list(const std::string& s, const std::string& k,
                                                std::size_t n) {
    auto v = list(s, k);
    if (v && v->size() != n) {
      fail(*find(s, k), s, k, "expected " + std::to_string(n) + " numbers, got " +
                                  std::to_string(v->size()));
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> word(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    return trim(e->value);
  }
};

void parse_text(std::string_view text, Builder& b) {
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        b.problems.push_back(where + ": malformed section header '" + line + "'");
        continue;
      }
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().count(current)) {
        b.problems.push_back(where + ": unknown section [" + current + "]");
      } else if (b.sections.count(current)) {
        b.problems.push_back(where + ": duplicate section [" + current + "]");
      } else {
        b.sections[current].where = where;
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      b.problems.push_back(where + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (current.empty()) {
      b.problems.push_back(where + ": key '" + key + "' appears before any [section]");
      continue;
    }
    if (!schema().count(current)) continue;  // already reported
    if (!known_key(current, key)) {
      b.problems.push_back(where + ": " + current + "." + key + ": unknown key");
      continue;
    }
    auto& entries = b.sections[current].entries;
    if (entries.count(key)) {
      b.problems.push_back(where + ": " + current + "." + key + ": duplicate key (first at " +
                           entries[key].where + ")");
      continue;
    }
    entries[key] = Entry{value, where};
  }
}

std::optional<Kind> kind_from(const std::string& s) {
  static const std::map<std::string, Kind> m{
      {"classical", Kind::kClassical},
      {"revised", Kind::kRevised},
      {"delayed", Kind::kDelayed},
      {"revised-delayed", Kind::kRevisedDelayed},
      {"ep-delayed", Kind::kEpDelayed},
      {"fractional", Kind::kFractional},
      {"fractional-revised", Kind::kFractionalRevised},
      {"scalar-18", Kind::kScalar18},
      {"planar-19", Kind::kPlanar19},
  };
  const auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

void build_system(Builder& b, RunConfig& cfg) {
  if (!b.has_section("system")) {
    b.problems.push_back("config: [system] section is required");
    return;
  }
  const auto kind_word = b.word("system", "kind");
  if (!kind_word) {
    b.missing("system", "kind", "required");
    return;
  }
  const auto kind = kind_from(*kind_word);
  if (!kind) {
    b.fail(*b.find("system", "kind"), "system", "kind",
           "unknown kind '" + *kind_word +
               "' (classical | revised | delayed | revised-delayed | ep-delayed | fractional | "
               "fractional-revised | scalar-18 | planar-19)");
    return;
  }
  cfg.kind = *kind;

  if (const auto m = b.number("system", "m")) {
    if (*m == 0.0) b.fail(*b.find("system", "m"), "system", "m", "must be nonzero");
    cfg.m = *m;
  }

  const std::string k = std::string(to_string(cfg.kind));
  if (is_rigid_body(cfg.kind)) {
    if (!b.find("system", "p")) {
      b.missing("system", "p", "required for kind " + k);
    } else if (const auto p = b.fixed_list("system", "p", 3)) {
      try {
        cfg.params = RigidBodyParams((*p)[0], (*p)[1], (*p)[2]);
      } catch (const DomainError& e) {
        b.fail(*b.find("system", "p"), "system", "p", e.what());
      }
    }
  }
  if (cfg.kind == Kind::kEpDelayed) {
    std::optional<std::vector<double>> inertia;
    if (!b.find("system", "inertia"))
      b.missing("system", "inertia", "required for kind ep-delayed");
    else
      inertia = b.fixed_list("system", "inertia", 3);
    const auto coupling = b.required_number("system", "coupling", "required for kind ep-delayed");
    if (inertia && coupling) {
      try {
        cfg.body = InertiaSetup((*inertia)[0], (*inertia)[1], (*inertia)[2], *coupling, cfg.m);
      } catch (const DomainError& e) {
        b.fail(*b.find("system", "inertia"), "system", "inertia", e.what());
      }
    }
  }
  if (cfg.kind == Kind::kScalar18) {
    if (const auto a = b.required_number("system", "a", "required for kind scalar-18")) cfg.a = *a;
  }
  if (cfg.kind == Kind::kPlanar19) {
    const auto k1 = b.required_number("system", "k1", "required for kind planar-19");
    const auto k2 = b.required_number("system", "k2", "required for kind planar-19");
    if (k1) {
      if (*k1 < 0.0) b.fail(*b.find("system", "k1"), "system", "k1", "must be >= 0");
      cfg.k1 = *k1;
    }
    if (k2) {
      if (!(*k2 > 0.0)) b.fail(*b.find("system", "k2"), "system", "k2", "must be > 0");
      cfg.k2 = *k2;
    }
  }

  // Keys that the kind does not use are almost always mistakes.
  auto unused = [&](const char* key, bool used) {
    if (!used && b.find("system", key))
      b.fail(*b.find("system", key), "system", key, "not used by kind " + k);
  };
  unused("p", is_rigid_body(cfg.kind));
  unused("inertia", cfg.kind == Kind::kEpDelayed);
  unused("coupling", cfg.kind == Kind::kEpDelayed);
  unused("a", cfg.kind == Kind::kScalar18);
  unused("k1", cfg.kind == Kind::kPlanar19);
  unused("k2", cfg.kind == Kind::kPlanar19);
}

void build_kernel(Builder& b, RunConfig& cfg) {
  const std::string k = std::string(to_string(cfg.kind));
  if (!is_delayed(cfg.kind)) {
    if (b.has_section("kernel"))
      b.problems.push_back(b.sections["kernel"].where + ": [kernel] section not used by kind " + k);
    return;
  }
  if (!b.has_section("kernel")) {
    b.problems.push_back("config: [kernel] section is required for kind " + k);
    return;
  }
  const auto type = b.word("kernel", "type");
  if (!type) {
    b.missing("kernel", "type", "dirac | uniform | exponential | erlang");
    return;
  }
  KernelConfig kc;
  try {
    if (*type == "dirac") {
      const auto lag = b.required_number("kernel", "lag", "required for a dirac kernel");
      if (!lag) return;
      kc.kernel = DelayKernel::dirac(*lag);
    } else if (*type == "uniform") {
      const double offset = b.number_or("kernel", "offset", 0.0);
      const auto width = b.required_number("kernel", "width", "required for a uniform kernel");
      if (!width) return;
      kc.kernel = DelayKernel::uniform(offset, *width);
    } else if (*type == "exponential" || *type == "erlang") {
      const auto rate = b.required_number("kernel", "rate", "required for an " + *type + " kernel");
      if (!rate) return;
      kc.kernel = *type == "erlang" ? DelayKernel::erlang(*rate) : DelayKernel::exponential(*rate);
    } else {
      b.fail(*b.find("kernel", "type"), "kernel", "type",
             "unknown kernel '" + *type + "' (dirac | uniform | exponential | erlang)");
      return;
    }
  } catch (const DomainError& e) {
    b.fail(*b.find("kernel", "type"), "kernel", "type", e.what());
    return;
  }
  if ((cfg.kind == Kind::kScalar18 || cfg.kind == Kind::kPlanar19) && !kc.kernel.is_dirac())
    b.fail(*b.find("kernel", "type"), "kernel", "type", "kind " + k + " needs a dirac kernel");

  if (const auto method = b.word("kernel", "method")) {
    if (*method == "chain") {
      kc.method = DelayMethod::kChain;
      if (!chain_reduce(kc.kernel))
        b.fail(*b.find("kernel", "method"), "kernel", "method",
               "chain needs an exponential or erlang kernel");
      if (is_fractional(cfg.kind))
        b.fail(*b.find("kernel", "method"), "kernel", "method",
               "chain is only available for integer-order kinds");
    } else if (*method != "quadrature") {
      b.fail(*b.find("kernel", "method"), "kernel", "method",
             "expected quadrature | chain, got '" + *method + "'");
    }
  }
  if (const auto q = b.number("kernel", "quad_step")) {
    if (*q < 0.0) b.fail(*b.find("kernel", "quad_step"), "kernel", "quad_step", "must be >= 0");
    kc.quad_step = *q;
  }
  cfg.kernel = kc;
}

void build_fractional(Builder& b, RunConfig& cfg) {
  const std::string k = std::string(to_string(cfg.kind));
  if (!is_fractional(cfg.kind)) {
    if (b.has_section("fractional"))
      b.problems.push_back(b.sections["fractional"].where +
                           ": [fractional] section not used by kind " + k);
    return;
  }
  if (!b.has_section("fractional")) {
    b.problems.push_back("config: [fractional] section is required for kind " + k);
    return;
  }
  FracConfig fc;
  const auto order = b.required_number("fractional", "order", "required for kind " + k);
  if (!order) return;
  fc.order = *order;
  if (!(fc.order > 0.0 && fc.order <= 1.0))
    b.fail(*b.find("fractional", "order"), "fractional", "order", "must lie in (0, 1]");
  if (const auto it = b.integer("fractional", "corrector_iterations")) {
    if (*it < 1 || *it > 5)
      b.fail(*b.find("fractional", "corrector_iterations"), "fractional", "corrector_iterations",
             "must be between 1 and 5");
    fc.corrector_iterations = static_cast<int>(*it);
  }
  if (const auto w = b.integer("fractional", "memory_window")) {
    if (*w < 0)
      b.fail(*b.find("fractional", "memory_window"), "fractional", "memory_window",
             "must be >= 0 (0 keeps the full memory)");
    else if (*w > 0)
      fc.memory_window = static_cast<std::size_t>(*w);
  }
  cfg.fractional = fc;
}

void build_run(Builder& b, RunConfig& cfg) {
  if (const auto t = b.number("run", "t_end")) {
    if (*t < 0.0) b.fail(*b.find("run", "t_end"), "run", "t_end", "must be >= 0");
    cfg.t_end = *t;
  }
  if (const auto h = b.number("run", "step")) {
    if (!(*h > 0.0)) b.fail(*b.find("run", "step"), "run", "step", "must be > 0");
    cfg.step = *h;
  }
  if (const auto o = b.word("run", "output")) cfg.output = *o;
  if (cfg.fractional) cfg.fractional->step = cfg.step;
  if (cfg.fractional && cfg.fractional->memory_window &&
      static_cast<double>(*cfg.fractional->memory_window) * cfg.step < 1.0)
    b.fail(*b.find("fractional", "memory_window"), "fractional", "memory_window",
           "window must span at least one time unit (memory_window * run.step >= 1)");

  if (b.find("initial", "x0")) {
    const std::size_t dim = cfg.kind == Kind::kScalar18 ? 1 : cfg.kind == Kind::kPlanar19 ? 2 : 3;
    if (auto x = b.fixed_list("initial", "x0", dim)) cfg.x0 = *x;
  }
}

void build_stability(Builder& b, RunConfig& cfg) {
  if (const auto e = b.word("stability", "equilibrium")) {
    if (*e == "M1") cfg.equilibrium = Equilibrium::kM1;
    else if (*e == "M2") cfg.equilibrium = Equilibrium::kM2;
    else if (*e == "M3") cfg.equilibrium = Equilibrium::kM3;
    else b.fail(*b.find("stability", "equilibrium"), "stability", "equilibrium", "expected M1 | M2 | M3");
  }
  if (const auto s = b.number("stability", "sigma_max")) {
    if (!(*s > 0.0)) b.fail(*b.find("stability", "sigma_max"), "stability", "sigma_max", "must be > 0");
    cfg.contour.sigma_max = *s;
  }
  if (const auto w = b.number("stability", "omega_max")) {
    if (!(*w > 0.0)) b.fail(*b.find("stability", "omega_max"), "stability", "omega_max", "must be > 0");
    cfg.contour.omega_max = *w;
  }
  if (const auto n = b.integer("stability", "segments")) {
    if (*n < 32) b.fail(*b.find("stability", "segments"), "stability", "segments", "must be >= 32");
    else cfg.contour.base_segments = static_cast<std::size_t>(*n);
  }
}

void build_scan(Builder& b, RunConfig& cfg) {
  if (!b.has_section("scan")) return;
  ScanConfig sc;
  const auto axis = b.word("scan", "axis");
  if (!axis) {
    b.missing("scan", "axis", "tau | alpha | m");
    return;
  }
  if (*axis == "tau") sc.axis = ScanAxis::kTau;
  else if (*axis == "alpha") sc.axis = ScanAxis::kAlpha;
  else if (*axis == "m") sc.axis = ScanAxis::kM;
  else {
    b.fail(*b.find("scan", "axis"), "scan", "axis", "expected tau | alpha | m, got '" + *axis + "'");
    return;
  }
  const auto lo = b.required_number("scan", "lo", "scan range start");
  const auto hi = b.required_number("scan", "hi", "scan range end");
  const auto steps = b.integer("scan", "steps");
  if (!b.find("scan", "steps")) b.missing("scan", "steps", "number of grid points");
  if (!lo || !hi || !steps) return;
  if (*steps < 0) b.fail(*b.find("scan", "steps"), "scan", "steps", "must be >= 0");
  if (*hi < *lo) b.fail(*b.find("scan", "hi"), "scan", "hi", "must be >= scan.lo");
  sc.lo = *lo;
  sc.hi = *hi;
  sc.steps = static_cast<std::size_t>(std::max(0L, *steps));

  const std::string k = std::string(to_string(cfg.kind));
  const Entry& where = *b.find("scan", "axis");
  switch (sc.axis) {
    case ScanAxis::kTau:
      if (!(cfg.kind == Kind::kEpDelayed || cfg.kind == Kind::kScalar18 || cfg.kind == Kind::kPlanar19))
        b.fail(where, "scan", "axis", "tau scans need kind ep-delayed, scalar-18 or planar-19");
      else if (cfg.kernel && !cfg.kernel->kernel.is_dirac())
        b.fail(where, "scan", "axis", "tau scans vary the lag of a dirac kernel");
      if (sc.lo < 0.0) b.fail(*b.find("scan", "lo"), "scan", "lo", "delays must be >= 0");
      break;
    case ScanAxis::kAlpha:
      if (!is_fractional(cfg.kind))
        b.fail(where, "scan", "axis", "alpha scans need a fractional kind, not " + k);
      break;
    case ScanAxis::kM:
      if (!(is_rigid_body(cfg.kind) && !is_delayed(cfg.kind)) && cfg.kind != Kind::kEpDelayed)
        b.fail(where, "scan", "axis", "m scans need an equilibrium analysis, not kind " + k);
      break;
  }
  cfg.scan = sc;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::runtime_error([&] {
        std::string s = "invalid configuration:";
        for (const auto& p : problems) s += "\n  " + p;
        return s;
      }()),
      problems_(problems) {}

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::kClassical: return "classical";
    case Kind::kRevised: return "revised";
    case Kind::kDelayed: return "delayed";
    case Kind::kRevisedDelayed: return "revised-delayed";
    case Kind::kEpDelayed: return "ep-delayed";
    case Kind::kFractional: return "fractional";
    case Kind::kFractionalRevised: return "fractional-revised";
    case Kind::kScalar18: return "scalar-18";
    case Kind::kPlanar19: return "planar-19";
  }
  return "unknown";
}

std::string_view to_string(ScanAxis a) {
  switch (a) {
    case ScanAxis::kTau: return "tau";
    case ScanAxis::kAlpha: return "alpha";
    case ScanAxis::kM: return "m";
  }
  return "unknown";
}

bool is_delayed(Kind k) {
  return k == Kind::kDelayed || k == Kind::kRevisedDelayed || k == Kind::kEpDelayed ||
         k == Kind::kScalar18 || k == Kind::kPlanar19;
}

bool is_fractional(Kind k) {
  return k == Kind::kFractional || k == Kind::kFractionalRevised || k == Kind::kScalar18 ||
         k == Kind::kPlanar19;
}

bool is_rigid_body(Kind k) {
  return k == Kind::kClassical || k == Kind::kRevised || k == Kind::kDelayed ||
         k == Kind::kRevisedDelayed || k == Kind::kFractional || k == Kind::kFractionalRevised;
}

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  const auto dot = text.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ConfigError({"--set: expected section.key=value, got '" + std::string(text) + "'"});
  Override o{trim(text.substr(0, dot)), trim(text.substr(dot + 1, eq - dot - 1)),
             trim(text.substr(eq + 1))};
  if (!known_key(o.section, o.key))
    throw ConfigError({"--set: " + o.section + "." + o.key + ": unknown key"});
  return o;
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  Builder b;
  parse_text(text, b);
  for (const auto& o : overrides) {
    if (!known_key(o.section, o.key)) {
      b.problems.push_back("--set: " + o.section + "." + o.key + ": unknown key");
      continue;
    }
    auto& sec = b.sections[o.section];
    if (sec.where.empty()) sec.where = "--set";
    sec.entries[o.key] = Entry{o.value, "--set"};
  }

  RunConfig cfg;
  build_system(b, cfg);
  if (b.problems.empty() || b.find("system", "kind")) {
    build_kernel(b, cfg);
    build_fractional(b, cfg);
    build_run(b, cfg);
    build_stability(b, cfg);
    build_scan(b, cfg);
  }
  if (!b.problems.empty()) throw ConfigError(b.problems);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open config file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

}  // namespace rigidmem::cli
