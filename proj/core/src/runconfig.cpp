#include "optomech/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace optomech {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Ordered key-value pairs, keys qualified as "section.key" ("" section for
// top-level keys).
using KvList = std::vector<std::pair<std::string, std::string>>;

void parse_stream(std::istream& in, const std::string& origin, KvList& out) {
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    out.emplace_back(section.empty() ? key : section + "." + key, value);
  }
}

double parse_double(const std::string& field, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': expected a finite number, got '" + v + "'");
  }
}

int parse_int(const std::string& field, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("field '" + field + "': expected true/false, got '" + v + "'");
}

template <typename Enum>
Enum parse_enum(const std::string& field, const std::string& v,
                std::initializer_list<std::pair<const char*, Enum>> table) {
  for (const auto& [name, val] : table) {
    if (v == name) return val;
  }
  std::string allowed;
  for (const auto& [name, val] : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw ConfigError("field '" + field + "': got '" + v + "', expected one of: " + allowed);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::point: return "point";
    case RunMode::sweep: return "sweep";
    case RunMode::optimize: return "optimize";
    case RunMode::figure: return "figure";
  }
  return "unknown";
}

const char* to_string(PointDelay d) {
  switch (d) {
    case PointDelay::fixed: return "fixed";
    case PointDelay::analytic: return "analytic";
    case PointDelay::numeric: return "numeric";
  }
  return "unknown";
}

SystemParams RunConfig::params() const {
  SystemParams p;
  p.gamma = 1.0;
  p.kappa1 = kappa * kappa1_ratio;
  p.kappa2 = kappa * kappa2_ratio;
  p.g1 = kappa * g1_ratio;
  p.g2 = kappa * g2_ratio;
  p.n_m = n_m;
  p.n_cav1 = n_cav1;
  p.n_cav2 = n_cav2;
  return p;
}

FilterSpec RunConfig::filter() const {
  FilterSpec f;
  f.center = omega_ratio * kappa;
  f.bandwidth = sigma_ratio * kappa;
  f.delay = tau_kappa / kappa;
  return f;
}

SweepSpec RunConfig::sweep() const {
  SweepSpec s;
  s.variable = variable;
  s.lo = lo;
  s.hi = hi;
  if (variable == SweepVariable::tau) {
    s.lo = lo / kappa;
    s.hi = hi / kappa;
  }
  s.points = points;
  s.log_spacing = log_spacing;
  s.params = params();
  s.filter = filter();
  s.delay_mode = delay_mode;
  s.coupling_rule = coupling_rule;
  s.workers = workers;
  return s;
}

RunConfig RunConfig::load(const std::string& path,
                          const std::vector<std::string>& overrides) {
  KvList kv;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    parse_stream(in, path, kv);
  }
  for (const std::string& ov : overrides) {
    const size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + ov + "': expected key=value");
    }
    kv.emplace_back(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }

  // Mode first: it gates which sections are legal.
  RunConfig c;
  bool mode_set = false;
  for (const auto& [k, v] : kv) {
    if (k == "mode") {
      c.mode = parse_enum<RunMode>(k, v,
                                   {{"point", RunMode::point},
                                    {"sweep", RunMode::sweep},
                                    {"optimize", RunMode::optimize},
                                    {"figure", RunMode::figure}});
      mode_set = true;
    }
  }
  if (!mode_set) c.mode = RunMode::point;

  const auto section_of = [](const std::string& k) {
    const size_t dot = k.find('.');
    return dot == std::string::npos ? std::string{} : k.substr(0, dot);
  };
  const auto section_allowed = [&](const std::string& sec) {
    if (sec.empty() || sec == "params" || sec == "filter") return true;
    if (sec == "sweep") return c.mode == RunMode::sweep;
    if (sec == "optimize") return c.mode == RunMode::optimize;
    return false;
  };

  for (const auto& [k, v] : kv) {
    const std::string sec = section_of(k);
    if (!section_allowed(sec)) {
      throw ConfigError("field '" + k + "' is not valid in mode '" +
                        std::string(to_string(c.mode)) + "'");
    }
    if (k == "mode") {
      // handled above
    } else if (k == "output") {
      c.output_dir = v;
    } else if (k == "emit_svg") {
      c.emit_svg = parse_bool(k, v);
    } else if (k == "json") {
      c.json = parse_bool(k, v);
    } else if (k == "workers") {
      c.workers = parse_int(k, v);
      if (c.workers < 0) throw ConfigError("field 'workers': must be >= 0");
    } else if (k == "figure_id") {
      if (c.mode != RunMode::figure) {
        throw ConfigError("field 'figure_id' is only valid in mode 'figure'");
      }
      static const char* known[] = {"2a", "2b", "2c", "3a", "3b", "3c"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* s) {
            return v == s;
          }) == std::end(known)) {
        throw ConfigError("field 'figure_id': got '" + v +
                          "', expected one of: 2a, 2b, 2c, 3a, 3b, 3c");
      }
      c.figure_id = v;
    } else if (k == "params.kappa") {
      c.kappa = parse_double(k, v);
    } else if (k == "params.kappa1") {
      c.kappa1_ratio = parse_double(k, v);
    } else if (k == "params.kappa2") {
      c.kappa2_ratio = parse_double(k, v);
    } else if (k == "params.g1") {
      c.g1_ratio = parse_double(k, v);
    } else if (k == "params.g2") {
      c.g2_ratio = parse_double(k, v);
    } else if (k == "params.n_m") {
      c.n_m = parse_double(k, v);
    } else if (k == "params.n_cav1") {
      c.n_cav1 = parse_double(k, v);
    } else if (k == "params.n_cav2") {
      c.n_cav2 = parse_double(k, v);
    } else if (k == "filter.omega") {
      c.omega_ratio = parse_double(k, v);
    } else if (k == "filter.sigma") {
      c.sigma_ratio = parse_double(k, v);
    } else if (k == "filter.tau") {
      c.tau_kappa = parse_double(k, v);
    } else if (k == "filter.delay_mode") {
      if (c.mode == RunMode::sweep || c.mode == RunMode::optimize) {
        c.delay_mode = parse_enum<DelayMode>(k, v,
                                             {{"zero", DelayMode::zero},
                                              {"analytic", DelayMode::analytic},
                                              {"numeric", DelayMode::numeric}});
      } else {
        c.point_delay = parse_enum<PointDelay>(k, v,
                                               {{"fixed", PointDelay::fixed},
                                                {"analytic", PointDelay::analytic},
                                                {"numeric", PointDelay::numeric}});
      }
    } else if (k == "sweep.variable") {
      c.variable = parse_enum<SweepVariable>(
          k, v,
          {{"g2_over_g1", SweepVariable::g2_over_g1},
           {"g1_over_kappa", SweepVariable::g1_over_kappa},
           {"omega_over_kappa", SweepVariable::omega_over_kappa},
           {"tau", SweepVariable::tau}});
    } else if (k == "sweep.lo") {
      c.lo = parse_double(k, v);
    } else if (k == "sweep.hi") {
      c.hi = parse_double(k, v);
    } else if (k == "sweep.points") {
      c.points = parse_int(k, v);
    } else if (k == "sweep.spacing") {
      c.log_spacing = parse_enum<bool>(k, v, {{"linear", false}, {"log", true}});
    } else if (k == "sweep.coupling_rule") {
      c.coupling_rule = parse_enum<CouplingRule>(
          k, v,
          {{"fixed", CouplingRule::fixed_g2},
           {"equal", CouplingRule::equal},
           {"large_bw", CouplingRule::large_bw_opt},
           {"small_bw", CouplingRule::small_bw_opt},
           {"delay_opt", CouplingRule::delay_opt}});
    } else if (k == "optimize.target") {
      if (v != "g2" && v != "tau") {
        throw ConfigError("field 'optimize.target': got '" + v + "', expected g2 or tau");
      }
      c.target = v;
    } else {
      throw ConfigError("unknown field '" + k + "'");
    }
  }

  if (c.mode == RunMode::figure && c.figure_id.empty()) {
    throw ConfigError("mode 'figure' requires field 'figure_id'");
  }

  // Physical validation with config-level diagnostics.
  try {
    c.params().validate();
    c.filter().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid parameter: ") + e.what());
  }
  if (c.mode == RunMode::sweep) {
    try {
      c.sweep().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("invalid sweep: ") + e.what());
    }
  }
  return c;
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "mode = " << to_string(mode) << "\n";
  out << "output = " << output_dir << "\n";
  out << "emit_svg = " << (emit_svg ? "true" : "false") << "\n";
  out << "json = " << (json ? "true" : "false") << "\n";
  out << "workers = " << workers << "\n";
  if (mode == RunMode::figure) out << "figure_id = " << figure_id << "\n";
  out << "\n[params]\n";
  out << "kappa = " << fmt(kappa) << "\n";
  out << "kappa1 = " << fmt(kappa1_ratio) << "\n";
  out << "kappa2 = " << fmt(kappa2_ratio) << "\n";
  out << "g1 = " << fmt(g1_ratio) << "\n";
  out << "g2 = " << fmt(g2_ratio) << "\n";
  out << "n_m = " << fmt(n_m) << "\n";
  out << "n_cav1 = " << fmt(n_cav1) << "\n";
  out << "n_cav2 = " << fmt(n_cav2) << "\n";
  out << "\n[filter]\n";
  out << "omega = " << fmt(omega_ratio) << "\n";
  out << "sigma = " << fmt(sigma_ratio) << "\n";
  out << "tau = " << fmt(tau_kappa) << "\n";
  if (mode == RunMode::sweep || mode == RunMode::optimize) {
    out << "delay_mode = " << to_string(delay_mode) << "\n";
  } else {
    out << "delay_mode = " << to_string(point_delay) << "\n";
  }
  if (mode == RunMode::sweep) {
    out << "\n[sweep]\n";
    out << "variable = " << to_string(variable) << "\n";
    out << "lo = " << fmt(lo) << "\n";
    out << "hi = " << fmt(hi) << "\n";
    out << "points = " << points << "\n";
    out << "spacing = " << (log_spacing ? "log" : "linear") << "\n";
    out << "coupling_rule = " << to_string(coupling_rule) << "\n";
  }
  if (mode == RunMode::optimize) {
    out << "\n[optimize]\n";
    out << "target = " << target << "\n";
  }
  return out.str();
}

}  // namespace optomech
