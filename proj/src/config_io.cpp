#include "fdp/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fdp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_plain(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

Profile parse_profile(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::string kind;
  is >> kind;
  std::vector<double> args;
  for (std::string tok; is >> tok;) args.push_back(parse_number(tok));
  if (kind == "constant" && args.size() == 1) return Profile::constant(args[0]);
  if (kind == "gaussian" && args.size() == 4)
    return Profile::gaussian(args[0], {args[1], args[2]}, args[3]);
  throw ConfigError("bad profile '" + std::string(s) +
                    "' (expected 'constant <v>' or 'gaussian <amplitude> <x0> <y0> <rate>')");
}

std::string format_profile(const Profile& p) {
  if (p.kind == Profile::Kind::constant) return "constant " + fmt(p.amplitude);
  return "gaussian " + fmt(p.amplitude) + " " + fmt(p.center.x) + " " + fmt(p.center.y) + " " +
         fmt(p.rate);
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model.tau",        "model.n_species",   "model.nu_c",      "model.zeta",
      "model.name",       "species1.chi",      "species1.nu",     "species1.gamma",
      "species1.initial", "species2.chi",      "species2.nu",     "species2.gamma",
      "species2.initial", "chemoattractant.initial", "domain.x_lo", "domain.x_hi",
      "domain.y_lo",      "domain.y_hi",       "numerics.delta",  "numerics.safety",
      "numerics.kernel_cutoff", "numerics.min_dt_fraction", "run.t_end",   "run.snapshots"};
  return keys;
}

SimulationConfig base_two_species() {
  SimulationConfig cfg;
  cfg.n_species = 2;
  cfg.domain = {-1.0, 1.0, -1.0, 1.0};
  cfg.safety_factor = 0.9;
  cfg.kernel_cutoff = true;
  return cfg;
}

SimulationConfig corner_blowup(double amplitude) {
  SimulationConfig cfg;
  cfg.tau = 1;
  cfg.n_species = 1;
  cfg.species[0] = {1.0, 1.0, 1.0, Profile::gaussian(amplitude, {0.25, 0.25}, 100.0)};
  cfg.nu_c = 1.0;
  cfg.zeta = 1.0;
  cfg.initial_c = Profile::constant(0.0);
  cfg.domain = {-0.5, 0.5, -0.5, 0.5};
  cfg.delta = 1.0 / 20.0;
  return cfg;
}

}  // namespace

double parse_number(std::string_view s) {
  s = trim(s);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_plain(s);
  const double den = parse_plain(s.substr(slash + 1));
  if (den == 0.0) throw ConfigError("division by zero in '" + std::string(s) + "'");
  return parse_plain(s.substr(0, slash)) / den;
}

std::vector<double> parse_number_list(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    out.push_back(parse_number(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example4", "example5"};
}

std::string preset_summary(std::string_view name) {
  if (name == "example1") return "two species, tau=1: accuracy test to t=2e-4 on [-1,1]^2";
  if (name == "example2") return "two species, tau=1: blowup at the center, t=1e-3";
  if (name == "example3") return "one species, tau=1: blowup at the corner, t=0.2";
  if (name == "example4") return "one species, tau=1: interior blowup, t=0.1";
  if (name == "example5") return "two species, tau=0: simultaneous blowup, t=0.0033";
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

SimulationConfig preset(std::string_view name) {
  if (name == "example1" || name == "example2") {
    SimulationConfig cfg = base_two_species();
    cfg.tau = 1;
    const Profile rho0 = Profile::gaussian(500.0, {0.0, 0.0}, 100.0);
    cfg.species[0] = {5.0, 1.0, 1.0, rho0};
    cfg.species[1] = {60.0, 1.0, 1.0, rho0};
    cfg.nu_c = 10.0;
    cfg.zeta = 1.0;
    cfg.initial_c = Profile::constant(1.0);
    if (name == "example1") {
      cfg.name = "example1";
      cfg.delta = 2.0 / 15.0;
      cfg.final_time = 2e-4;
    } else {
      cfg.name = "example2";
      cfg.delta = 1.0 / 20.0;
      cfg.final_time = 1e-3;
      cfg.snapshot_times = {5e-4, 1e-3};
    }
    return cfg;
  }
  if (name == "example3") {
    SimulationConfig cfg = corner_blowup(500.0);
    cfg.name = "example3";
    cfg.final_time = 0.2;
    cfg.snapshot_times = {0.02, 0.05, 0.1, 0.2};
    return cfg;
  }
  if (name == "example4") {
    SimulationConfig cfg = corner_blowup(1000.0);
    cfg.name = "example4";
    cfg.final_time = 0.1;
    cfg.snapshot_times = {0.02, 0.05, 0.1};
    return cfg;
  }
  if (name == "example5") {
    SimulationConfig cfg = base_two_species();
    cfg.name = "example5";
    cfg.tau = 0;
    const Profile rho0 = Profile::gaussian(50.0, {0.0, 0.0}, 100.0);
    cfg.species[0] = {1.0, 1.0, 1.0, rho0};
    cfg.species[1] = {20.0, 1.0, 1.0, rho0};
    cfg.nu_c = 1.0;
    cfg.zeta = 1.0;
    cfg.delta = 1.0 / 20.0;
    cfg.final_time = 0.0033;
    cfg.snapshot_times = {0.003, 0.0033};
    return cfg;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

SimulationConfig parse_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> values;
  std::string section;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  for (std::string raw; std::getline(is, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    if (!known_keys().count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (values.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    values[key] = {std::string(trim(line.substr(eq + 1))), line_no};
  }

  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second.first;
  };
  auto num = [&](const std::string& key) {
    try {
      return parse_number(get(key));
    } catch (const ConfigError& e) {
      if (!values.count(key)) throw;
      throw ConfigError("line " + std::to_string(values[key].second) + ": " + key + ": " + e.what());
    }
  };
  auto profile = [&](const std::string& key) {
    try {
      return parse_profile(get(key));
    } catch (const ConfigError& e) {
      if (!values.count(key)) throw;
      throw ConfigError("line " + std::to_string(values[key].second) + ": " + key + ": " + e.what());
    }
  };

  SimulationConfig cfg;
  if (values.count("model.name")) cfg.name = values["model.name"].first;
  cfg.tau = static_cast<int>(num("model.tau"));
  cfg.n_species = static_cast<int>(num("model.n_species"));
  cfg.nu_c = num("model.nu_c");
  cfg.zeta = num("model.zeta");
  for (int k = 0; k < std::clamp(cfg.n_species, 1, 2); ++k) {
    const std::string s = "species" + std::to_string(k + 1) + ".";
    cfg.species[k] = {num(s + "chi"), num(s + "nu"), num(s + "gamma"), profile(s + "initial")};
  }
  if (cfg.tau == 1) cfg.initial_c = profile("chemoattractant.initial");
  else if (values.count("chemoattractant.initial")) cfg.initial_c = profile("chemoattractant.initial");
  cfg.domain = {num("domain.x_lo"), num("domain.x_hi"), num("domain.y_lo"), num("domain.y_hi")};
  cfg.delta = num("numerics.delta");
  if (values.count("numerics.safety")) cfg.safety_factor = num("numerics.safety");
  if (values.count("numerics.min_dt_fraction"))
    cfg.min_dt_fraction = num("numerics.min_dt_fraction");
  if (values.count("numerics.kernel_cutoff"))
    cfg.kernel_cutoff = parse_bool(values["numerics.kernel_cutoff"].first);
  cfg.final_time = num("run.t_end");
  if (values.count("run.snapshots")) cfg.snapshot_times = parse_number_list(values["run.snapshots"].first);
  return validate(cfg);
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const SimulationConfig& cfg) {
  std::ostringstream os;
  os << "[model]\n"
     << "name = " << cfg.name << "\n"
     << "tau = " << cfg.tau << "\n"
     << "n_species = " << cfg.n_species << "\n"
     << "nu_c = " << fmt(cfg.nu_c) << "\n"
     << "zeta = " << fmt(cfg.zeta) << "\n";
  for (int k = 0; k < std::clamp(cfg.n_species, 1, 2); ++k) {
    const SpeciesParams& s = cfg.species[k];
    os << "\n[species" << k + 1 << "]\n"
       << "chi = " << fmt(s.chi) << "\n"
       << "nu = " << fmt(s.nu) << "\n"
       << "gamma = " << fmt(s.gamma) << "\n"
       << "initial = " << format_profile(s.initial_density) << "\n";
  }
  os << "\n[chemoattractant]\n"
     << "initial = " << format_profile(cfg.initial_c) << "\n"
     << "\n[domain]\n"
     << "x_lo = " << fmt(cfg.domain.x_lo) << "\n"
     << "x_hi = " << fmt(cfg.domain.x_hi) << "\n"
     << "y_lo = " << fmt(cfg.domain.y_lo) << "\n"
     << "y_hi = " << fmt(cfg.domain.y_hi) << "\n"
     << "\n[numerics]\n"
     << "delta = " << fmt(cfg.delta) << "\n"
     << "safety = " << fmt(cfg.safety_factor) << "\n"
     << "kernel_cutoff = " << (cfg.kernel_cutoff ? "true" : "false") << "\n"
     << "min_dt_fraction = " << fmt(cfg.min_dt_fraction) << "\n"
     << "\n[run]\n"
     << "t_end = " << fmt(cfg.final_time) << "\n"
     << "snapshots = ";
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
    os << (i ? ", " : "") << fmt(cfg.snapshot_times[i]);
  os << "\n";
  return os.str();
}

}  // namespace fdp
