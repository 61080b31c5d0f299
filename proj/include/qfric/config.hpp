#pragma once
// Run configuration: a strict INI document (known sections and keys only,
// every value checked) mapped onto the model structs, with reduced-unit
// numbers throughout.
//
//   [geometry] w, z_a, single_plane, plate1.r0, plate1.rho,
//              plate1.perfect_conductor, plate2.r0, plate2.rho,
//              plate2.perfect_conductor
//   [particle] alpha0, omega_a, mu_xx, mu_yy, mu_zz
//   [motion]   v
//   [numerics] rel_tol, max_evals, n_points
//   [output]   format (csv|json), path
//
// z_a is required; w is required unless single_plane = true. Everything
// else falls back to documented defaults.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qfric/quadrature.hpp"
#include "qfric/units.hpp"

namespace qfric {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NumericsConfig {
  double rel_tol = 1e-9;
  int max_evals = 1'000'000;
  int n_points = 37;
};

enum class OutputFormat { csv, json };

struct OutputConfig {
  OutputFormat format = OutputFormat::csv;
  std::string path;  // empty: write to stdout
};

struct RunConfig {
  CavityGeometry geometry;
  ParticleModel particle;
  MotionSpec motion;
  NumericsConfig numerics;
  OutputConfig output;
};

// Built-in defaults: w=1, z_a=0.5, plates r0=1 rho=0, alpha0=omega_a=1,
// mu = identity, v=1, rel_tol=1e-9, max_evals=1e6, n_points=37, csv.
RunConfig default_config();

// Throws ConfigError on syntax errors, unknown sections/keys, malformed or
// duplicate values, and missing required keys; throws ValidationError when
// the parsed models violate their invariants.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

quad::QuadratureSpec quadrature_spec(const NumericsConfig& numerics);

std::string format_name(OutputFormat f);

}  // namespace qfric
