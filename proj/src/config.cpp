#include "zkstrip/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace zk {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t n = 0; n < v.size(); ++n) out += (n ? "; " : "") + v[n];
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  double parse() {
    const double v = sum();
    skip();
    if (p_ != s_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() const { throw ValidationError("bad number '" + s_ + "'"); }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.compare(p_, 2, "pi") == 0) {
      p_ += 2;
      return std::numbers::pi;
    }
    const char* begin = s_.c_str() + p_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail();
    p_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  const std::string& s_;
  std::size_t p_ = 0;
};

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ValidationError("bad boolean '" + v + "'");
}

long parse_int(const std::string& v) {
  const double d = parse_number(v);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ValidationError("expected an integer, got '" + v + "'");
  return static_cast<long>(d);
}

std::size_t parse_count(const std::string& v) {
  const long n = parse_int(v);
  if (n < 0) throw ValidationError("expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

DampingPreset parse_damping(const std::string& v) {
  if (v == "none") return DampingPreset::none;
  if (v == "constant") return DampingPreset::constant;
  if (v == "plateau_both") return DampingPreset::plateau_both;
  if (v == "plateau_minus") return DampingPreset::plateau_minus;
  if (v == "plateau_plus") return DampingPreset::plateau_plus;
  throw ValidationError("unknown damping preset '" + v + "'");
}

InitialPreset parse_initial(const std::string& v) {
  if (v == "gaussian") return InitialPreset::gaussian;
  if (v == "sech2") return InitialPreset::sech2;
  if (v == "zero") return InitialPreset::zero;
  if (v == "random_modes") return InitialPreset::random_modes;
  throw ValidationError("unknown initial preset '" + v + "'");
}

using Setter = std::function<void(RunSpec&, const std::string&)>;

ScenarioSpec& scen(RunSpec& r) {
  if (!r.scenario) r.scenario.emplace();
  return *r.scenario;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.nx", [](RunSpec& r, const std::string& v) { r.grid.nx = parse_count(v); }},
      {"grid.ny", [](RunSpec& r, const std::string& v) { r.grid.ny = parse_count(v); }},
      {"grid.x_min", [](RunSpec& r, const std::string& v) { r.grid.x_min = parse_number(v); }},
      {"grid.x_max", [](RunSpec& r, const std::string& v) { r.grid.x_max = parse_number(v); }},
      {"grid.width", [](RunSpec& r, const std::string& v) { r.grid.width = parse_number(v); }},

      {"physics.b", [](RunSpec& r, const std::string& v) { r.physics.b = parse_number(v); }},
      {"physics.delta", [](RunSpec& r, const std::string& v) { r.physics.delta = parse_number(v); }},
      {"physics.h_cutoff", [](RunSpec& r, const std::string& v) { r.physics.h_cutoff = parse_number(v); }},
      {"physics.dealias", [](RunSpec& r, const std::string& v) { r.physics.dealias = parse_bool(v); }},
      {"physics.nonlinear", [](RunSpec& r, const std::string& v) { r.physics.nonlinear = parse_bool(v); }},
      {"physics.damping", [](RunSpec& r, const std::string& v) { r.physics.damping = parse_damping(v); }},
      {"physics.damping_level", [](RunSpec& r, const std::string& v) { r.physics.level = parse_number(v); }},
      {"physics.damping_R", [](RunSpec& r, const std::string& v) { r.physics.R = parse_number(v); }},
      {"physics.seam_taper", [](RunSpec& r, const std::string& v) { r.physics.seam_taper = parse_number(v); }},
      {"physics.damp_a1", [](RunSpec& r, const std::string& v) { r.physics.damp_a1 = parse_bool(v); }},
      {"physics.damp_a2", [](RunSpec& r, const std::string& v) { r.physics.damp_a2 = parse_bool(v); }},
      {"physics.a0", [](RunSpec& r, const std::string& v) { r.physics.a0 = parse_number(v); }},
      {"physics.sponge", [](RunSpec& r, const std::string& v) { r.physics.sponge = parse_number(v); }},
      {"physics.sponge_width", [](RunSpec& r, const std::string& v) { r.physics.sponge_width = parse_number(v); }},

      {"initial.preset", [](RunSpec& r, const std::string& v) { r.initial.preset = parse_initial(v); }},
      {"initial.amplitude", [](RunSpec& r, const std::string& v) { r.initial.amplitude = parse_number(v); }},
      {"initial.center", [](RunSpec& r, const std::string& v) { r.initial.center = parse_number(v); }},
      {"initial.width", [](RunSpec& r, const std::string& v) { r.initial.width = parse_number(v); }},
      {"initial.y_mode", [](RunSpec& r, const std::string& v) { r.initial.y_mode = static_cast<int>(parse_int(v)); }},
      {"initial.kmax", [](RunSpec& r, const std::string& v) { r.initial.kmax = static_cast<int>(parse_int(v)); }},
      {"initial.lmax", [](RunSpec& r, const std::string& v) { r.initial.lmax = static_cast<int>(parse_int(v)); }},
      {"initial.seed", [](RunSpec& r, const std::string& v) { r.initial.seed = parse_count(v); }},

      {"time.dt", [](RunSpec& r, const std::string& v) { r.solver.dt = parse_number(v); }},
      {"time.t_end", [](RunSpec& r, const std::string& v) { r.solver.t_end = parse_number(v); }},
      {"time.snapshot_every", [](RunSpec& r, const std::string& v) { r.solver.snapshot_every = parse_count(v); }},

      {"weights.list", [](RunSpec& r, const std::string& v) {
         r.weights.clear();
         for (const std::string& w : split_list(v)) r.weights.push_back(parse_weight(w));
       }},

      {"scenario.kind", [](RunSpec& r, const std::string& v) { scen(r).scenario.kind = parse_scenario_kind(v); }},
      {"scenario.beta", [](RunSpec& r, const std::string& v) { scen(r).scenario.beta = parse_number(v); }},
      {"scenario.beta0", [](RunSpec& r, const std::string& v) { scen(r).scenario.beta0 = parse_number(v); }},
      {"scenario.beta2", [](RunSpec& r, const std::string& v) { scen(r).scenario.beta2 = parse_number(v); }},
      {"scenario.a", [](RunSpec& r, const std::string& v) { scen(r).scenario.a = parse_number(v); }},
      {"scenario.R", [](RunSpec& r, const std::string& v) { scen(r).scenario.R = parse_number(v); }},
      {"scenario.alpha", [](RunSpec& r, const std::string& v) { scen(r).scenario.alpha = parse_number(v); }},
      {"scenario.amplitude", [](RunSpec& r, const std::string& v) { scen(r).scenario.amplitude = parse_number(v); }},
      {"scenario.x0", [](RunSpec& r, const std::string& v) { scen(r).scenario.x0 = parse_number(v); }},
      {"scenario.width", [](RunSpec& r, const std::string& v) { scen(r).scenario.width = parse_number(v); }},
      {"scenario.y_mode", [](RunSpec& r, const std::string& v) { scen(r).scenario.y_mode = static_cast<int>(parse_int(v)); }},
      {"scenario.sponge", [](RunSpec& r, const std::string& v) { scen(r).scenario.sponge = parse_number(v); }},
      {"scenario.sponge_width", [](RunSpec& r, const std::string& v) { scen(r).scenario.sponge_width = parse_number(v); }},
      {"scenario.seam_taper", [](RunSpec& r, const std::string& v) { scen(r).scenario.seam_taper = parse_number(v); }},
      {"scenario.check_beta", [](RunSpec& r, const std::string& v) { scen(r).check_beta = parse_number(v); }},
      {"scenario.threshold_search", [](RunSpec& r, const std::string& v) { scen(r).threshold_search = parse_bool(v); }},
      {"scenario.threshold_lo", [](RunSpec& r, const std::string& v) { scen(r).threshold_lo = parse_number(v); }},
      {"scenario.threshold_hi", [](RunSpec& r, const std::string& v) { scen(r).threshold_hi = parse_number(v); }},
      {"scenario.threshold_iterations", [](RunSpec& r, const std::string& v) { scen(r).threshold_iterations = static_cast<int>(parse_int(v)); }},

      {"sweep.alphas", [](RunSpec& r, const std::string& v) {
         r.sweep.alphas.clear();
         for (const std::string& a : split_list(v)) r.sweep.alphas.push_back(parse_number(a));
       }},
      {"sweep.widths", [](RunSpec& r, const std::string& v) {
         r.sweep.widths.clear();
         for (const std::string& a : split_list(v)) r.sweep.widths.push_back(parse_number(a));
       }},

      {"output.dir", [](RunSpec& r, const std::string& v) { r.output.dir = v; }},
      {"output.prefix", [](RunSpec& r, const std::string& v) { r.output.prefix = v; }},
      {"output.snapshots", [](RunSpec& r, const std::string& v) { r.output.snapshots = parse_bool(v); }},
      {"output.snapshot_format", [](RunSpec& r, const std::string& v) {
         if (v == "binary") r.output.snapshot_format = SnapshotFormat::binary;
         else if (v == "csv") r.output.snapshot_format = SnapshotFormat::csv;
         else throw ValidationError("unknown snapshot format '" + v + "'");
       }},
      {"output.residuals", [](RunSpec& r, const std::string& v) { r.output.residuals = parse_bool(v); }},
  };
  return table;
}

const std::set<std::string>& required_keys() {
  static const std::set<std::string> keys = {"grid.nx", "grid.ny", "grid.x_min", "grid.x_max",
                                             "grid.width", "time.t_end"};
  return keys;
}

template <class F>
void collect(std::vector<std::string>& errors, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    errors.emplace_back(e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError(join(errors)), errors_(std::move(errors)) {}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ValidationError("empty number");
  const double v = ExprParser(t).parse();
  if (!std::isfinite(v)) throw ValidationError("'" + t + "' is not a finite number");
  return v;
}

RunSpec parse_config(const std::string& text) {
  RunSpec spec;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    const auto it = setters().find(key);
    if (it == setters().end()) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back("duplicate key '" + key + "'");
      continue;
    }
    try {
      it->second(spec, value);
    } catch (const std::exception& e) {
      errors.push_back(key + ": " + e.what());
    }
  }
  for (const std::string& k : required_keys())
    if (!seen.count(k)) errors.push_back("missing required key '" + k + "'");

  // Invariants checkable before any compute.
  if (seen.count("grid.nx") && seen.count("grid.ny")) {
    collect(errors, [&] { spec.grid.validate(); });
  }
  spec.solver.h_cutoff = spec.physics.h_cutoff;
  spec.solver.use_dealiasing = spec.physics.dealias;
  spec.solver.nonlinear = spec.physics.nonlinear;
  if (seen.count("time.t_end")) collect(errors, [&] { spec.solver.validate(); });
  if (!(spec.physics.delta >= 0.0)) errors.push_back("physics.delta must be non-negative");
  if (spec.physics.damping != DampingPreset::none && !(spec.physics.level > 0.0))
    errors.push_back("physics.damping_level must be positive for a damping preset");
  if (spec.physics.a0 < 0.0) errors.push_back("physics.a0 must be non-negative");
  if (spec.physics.sponge < 0.0 || spec.physics.sponge_width < 0.0)
    errors.push_back("physics.sponge and physics.sponge_width must be non-negative");
  if (!(spec.initial.amplitude >= 0.0)) errors.push_back("initial.amplitude must be non-negative");
  if (!(spec.initial.width > 0.0)) errors.push_back("initial.width must be positive");
  if (spec.initial.y_mode < 1) errors.push_back("initial.y_mode must be at least 1");
  for (double a : spec.sweep.alphas)
    if (!(a > 0.0)) errors.push_back("sweep.alphas entries must be positive");
  for (double w : spec.sweep.widths)
    if (!(w > 0.0)) errors.push_back("sweep.widths entries must be positive");

  if (spec.scenario) {
    spec.scenario->scenario.b = spec.physics.b;
    spec.scenario->scenario.delta = spec.physics.delta;
    if (errors.empty()) collect(errors, [&] { build_scenario(spec.scenario->scenario, spec.grid); });
  }
  if (!errors.empty()) throw ConfigError(errors);
  return spec;
}

RunSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::map<std::string, std::string> default_config_table() {
  return {
      {"physics.b", "0"},          {"physics.delta", "1e-3"},   {"physics.h_cutoff", "0.01"},
      {"physics.dealias", "true"}, {"physics.nonlinear", "true"}, {"physics.damping", "none"},
      {"physics.damping_level", "0"}, {"physics.damping_R", "5"}, {"physics.seam_taper", "4"},
      {"physics.damp_a1", "true"}, {"physics.damp_a2", "true"},  {"physics.a0", "0"},
      {"physics.sponge", "0"},     {"physics.sponge_width", "0"}, {"initial.preset", "gaussian"},
      {"initial.amplitude", "0.1"}, {"initial.center", "0"},     {"initial.width", "2"},
      {"initial.y_mode", "1"},     {"initial.kmax", "8"},        {"initial.lmax", "4"},
      {"initial.seed", "0"},       {"time.dt", "1e-3"},          {"time.snapshot_every", "1"},
      {"weights.list", ""},        {"output.dir", "."},          {"output.prefix", "zk"},
      {"output.snapshots", "false"}, {"output.snapshot_format", "binary"},
      {"output.residuals", "true"},
  };
}

Coefficients build_coefficients(const RunSpec& spec) {
  const StripGrid& g = spec.grid;
  const PhysicsSpec& p = spec.physics;
  Coefficients c = Coefficients::zero(g, p.b, p.delta);
  Field prof(g);
  switch (p.damping) {
    case DampingPreset::none: break;
    case DampingPreset::constant: prof = damping_constant(g, p.level); break;
    case DampingPreset::plateau_both:
      prof = damping_plateau_both(g, p.level, p.R);
      c.flag = StructureFlag::both_infinities;
      break;
    case DampingPreset::plateau_minus:
      prof = damping_plateau_minus(g, p.level, p.R, p.seam_taper);
      c.flag = StructureFlag::minus_infinity;
      break;
    case DampingPreset::plateau_plus:
      prof = damping_plateau_plus(g, p.level, p.R, p.seam_taper);
      c.flag = StructureFlag::plus_infinity;
      break;
  }
  if (c.flag != StructureFlag::none && !(p.damp_a1 && p.damp_a2)) c.flag = StructureFlag::none;
  if (p.damp_a1) c.a1 = prof;
  if (p.damp_a2) c.a2 = prof;
  c.a = p.level;
  c.R = p.R;
  c.seam_taper = p.seam_taper;
  c.a0 = damping_constant(g, p.a0);
  if (p.sponge > 0.0 && p.sponge_width > 0.0) {
    const Field s = damping_sponge(g, p.sponge, p.sponge_width);
    for (std::size_t n = 0; n < s.values.size(); ++n) c.a0.values[n] += s.values[n];
  }
  c.validate(g);
  return c;
}

Field build_initial(const RunSpec& spec) {
  const InitialSpec& i = spec.initial;
  switch (i.preset) {
    case InitialPreset::gaussian:
      return initial_gaussian(spec.grid, i.amplitude, i.center, i.width, i.y_mode);
    case InitialPreset::sech2:
      return initial_sech2(spec.grid, i.amplitude, i.center, i.width, i.y_mode);
    case InitialPreset::zero: return Field(spec.grid);
    case InitialPreset::random_modes:
      return initial_random_modes(spec.grid, i.amplitude, i.seed, i.kmax, i.lmax);
  }
  return Field(spec.grid);
}

}  // namespace zk
