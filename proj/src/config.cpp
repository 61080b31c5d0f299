#include "qfric/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace qfric {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& key, const std::string& raw) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
    fail(line, "key '" + key + "': cannot parse '" + raw + "' as a number");
  return v;
}

long long parse_int(int line, const std::string& key, const std::string& raw) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
    fail(line, "key '" + key + "': cannot parse '" + raw + "' as an integer");
  return v;
}

bool parse_bool(int line, const std::string& key, const std::string& raw) {
  if (raw == "true") return true;
  if (raw == "false") return false;
  fail(line, "key '" + key + "': expected 'true' or 'false', got '" + raw + "'");
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.geometry.half_width = 1.0;
  cfg.geometry.z_a = 0.5;
  cfg.particle.dissipation = InternalDissipationModel{1.0, 1.0, 1.0};
  return cfg;
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg = default_config();
  std::string section;
  std::set<std::string> seen;
  bool have_z_a = false, have_w = false;

  static const std::set<std::string> known_sections = {
      "geometry", "particle", "motion", "numerics", "output"};

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;

    if (t.front() == '[') {
      if (t.back() != ']') fail(lineno, "malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (!known_sections.count(section))
        fail(lineno, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(lineno, "expected 'key = value', got '" + t + "'");
    if (section.empty()) fail(lineno, "key found before any [section] header");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (value.empty()) fail(lineno, "key '" + key + "' has no value");

    const std::string full = section + "." + key;
    if (!seen.insert(full).second) fail(lineno, "duplicate key '" + full + "'");

    if (section == "geometry") {
      if (key == "w") {
        cfg.geometry.half_width = parse_double(lineno, full, value);
        have_w = true;
      } else if (key == "z_a") {
        cfg.geometry.z_a = parse_double(lineno, full, value);
        have_z_a = true;
      } else if (key == "single_plane") {
        cfg.geometry.single_plane = parse_bool(lineno, full, value);
      } else if (key == "plate1.r0") {
        cfg.geometry.plate1.r0 = parse_double(lineno, full, value);
      } else if (key == "plate1.rho") {
        cfg.geometry.plate1.rho = parse_double(lineno, full, value);
      } else if (key == "plate1.perfect_conductor") {
        cfg.geometry.plate1.perfect_conductor = parse_bool(lineno, full, value);
      } else if (key == "plate2.r0") {
        cfg.geometry.plate2.r0 = parse_double(lineno, full, value);
      } else if (key == "plate2.rho") {
        cfg.geometry.plate2.rho = parse_double(lineno, full, value);
      } else if (key == "plate2.perfect_conductor") {
        cfg.geometry.plate2.perfect_conductor = parse_bool(lineno, full, value);
      } else {
        fail(lineno, "unknown key '" + key + "' in [geometry]");
      }
    } else if (section == "particle") {
      if (key == "alpha0") {
        cfg.particle.alpha0 = parse_double(lineno, full, value);
      } else if (key == "omega_a") {
        cfg.particle.omega_a = parse_double(lineno, full, value);
      } else if (key == "mu_xx") {
        cfg.particle.dissipation.mu_xx = parse_double(lineno, full, value);
      } else if (key == "mu_yy") {
        cfg.particle.dissipation.mu_yy = parse_double(lineno, full, value);
      } else if (key == "mu_zz") {
        cfg.particle.dissipation.mu_zz = parse_double(lineno, full, value);
      } else {
        fail(lineno, "unknown key '" + key + "' in [particle]");
      }
    } else if (section == "motion") {
      if (key == "v") {
        cfg.motion.v = parse_double(lineno, full, value);
      } else {
        fail(lineno, "unknown key '" + key + "' in [motion]");
      }
    } else if (section == "numerics") {
      if (key == "rel_tol") {
        cfg.numerics.rel_tol = parse_double(lineno, full, value);
        if (!(cfg.numerics.rel_tol > 0.0 && cfg.numerics.rel_tol <= 0.1))
          fail(lineno, "rel_tol must lie in (0, 0.1]");
      } else if (key == "max_evals") {
        const long long n = parse_int(lineno, full, value);
        if (n < 1000 || n > 2'000'000'000)
          fail(lineno, "max_evals must lie in [1000, 2e9]");
        cfg.numerics.max_evals = static_cast<int>(n);
      } else if (key == "n_points") {
        const long long n = parse_int(lineno, full, value);
        if (n < 3 || n > 100000) fail(lineno, "n_points must lie in [3, 100000]");
        cfg.numerics.n_points = static_cast<int>(n);
      } else {
        fail(lineno, "unknown key '" + key + "' in [numerics]");
      }
    } else if (section == "output") {
      if (key == "format") {
        if (value == "csv") {
          cfg.output.format = OutputFormat::csv;
        } else if (value == "json") {
          cfg.output.format = OutputFormat::json;
        } else {
          fail(lineno, "format must be 'csv' or 'json', got '" + value + "'");
        }
      } else if (key == "path") {
        cfg.output.path = value;
      } else {
        fail(lineno, "unknown key '" + key + "' in [output]");
      }
    }
  }

  if (!have_z_a)
    throw ConfigError("missing required key geometry.z_a");
  if (!cfg.geometry.single_plane && !have_w)
    throw ConfigError(
        "missing required key geometry.w (or set geometry.single_plane)");

  require_valid(cfg.geometry);
  require_valid(cfg.particle);
  require_valid(cfg.motion);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

quad::QuadratureSpec quadrature_spec(const NumericsConfig& numerics) {
  quad::QuadratureSpec spec;
  spec.rel_tol = numerics.rel_tol;
  spec.max_evals = numerics.max_evals;
  return spec;
}

std::string format_name(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

}  // namespace qfric
