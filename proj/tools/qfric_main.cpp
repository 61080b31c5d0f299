// qfric: quantum friction on a polarizable particle moving parallel to a
// single planar surface or inside a planar two-plate cavity (reduced units,
// hbar = eps0 = 1). Subcommands: single, cavity, fig3, sweep, validate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "qfric/config.hpp"
#include "qfric/forces.hpp"
#include "qfric/greens.hpp"
#include "qfric/quadrature.hpp"
#include "qfric/report_io.hpp"
#include "qfric/spectrum.hpp"
#include "qfric/units.hpp"

namespace {

using namespace qfric;

struct GlobalFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  double rel_tol = -1.0;
  std::uint64_t seed = 12345;
};

RunConfig resolve_config(const GlobalFlags& flags) {
  RunConfig cfg = flags.config_path.empty() ? default_config()
                                            : load_config(flags.config_path);
  if (!flags.out_path.empty()) cfg.output.path = flags.out_path;
  if (!flags.format.empty()) {
    if (flags.format == "csv") {
      cfg.output.format = OutputFormat::csv;
    } else if (flags.format == "json") {
      cfg.output.format = OutputFormat::json;
    } else {
      throw ConfigError("--format must be 'csv' or 'json', got '" +
                        flags.format + "'");
    }
  }
  if (flags.rel_tol > 0.0) {
    if (!(flags.rel_tol <= 0.1))
      throw ConfigError("--rel-tol must lie in (0, 0.1]");
    cfg.numerics.rel_tol = flags.rel_tol;
  }
  return cfg;
}

void emit(const OutputConfig& out, const std::string& content) {
  if (out.path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw ConfigError("cannot open output file '" + out.path + "'");
  f << content;
  f.flush();
  if (!f)
    throw std::runtime_error("failed writing output file '" + out.path + "'");
}

std::string serialize_reports(const OutputConfig& out,
                              const std::vector<ForceReport>& rows) {
  return out.format == OutputFormat::csv ? reports_to_csv(rows)
                                         : reports_to_json(rows);
}

int run_single(RunConfig cfg) {
  cfg.geometry.single_plane = true;
  const UnitSystem units;
  const auto spec = quadrature_spec(cfg.numerics);
  const ForceReport rep =
      force_cavity(cfg.geometry, cfg.particle, cfg.motion, units, spec);

  std::cerr << "single plane: z_a=" << cfg.geometry.z_a
            << " rho=" << cfg.geometry.plate1.rho << " v=" << cfg.motion.v
            << "\n";
  if (!cfg.geometry.plate1.perfect_conductor) {
    const double ci = force_int_plane_closed(cfg.geometry.z_a,
                                             cfg.geometry.plate1.rho,
                                             cfg.particle, cfg.motion, units);
    const double cr = force_rad_plane_closed(cfg.geometry.z_a,
                                             cfg.geometry.plate1.rho,
                                             cfg.particle, cfg.motion, units);
    std::cerr << "  f_int = " << rep.f_int << "  (closed form " << ci << ")\n"
              << "  f_rad = " << rep.f_rad << "  (closed form " << cr << ")\n";
  } else {
    std::cerr << "  f_int = " << rep.f_int << "\n  f_rad = " << rep.f_rad
              << "\n";
  }
  if (rep.f_rad != 0.0)
    std::cerr << "  phi = sigma_term/total = " << rep.rad_sigma_term / rep.f_rad
              << "\n";
  emit(cfg.output, serialize_reports(cfg.output, {rep}));
  return 0;
}

int run_cavity(const RunConfig& cfg) {
  if (cfg.geometry.single_plane)
    throw ConfigError(
        "the cavity command needs a two-plate geometry "
        "(geometry.single_plane = false)");
  const UnitSystem units;
  const auto spec = quadrature_spec(cfg.numerics);
  const ForceReport rep =
      force_cavity(cfg.geometry, cfg.particle, cfg.motion, units, spec);
  std::cerr << "cavity: w=" << cfg.geometry.half_width
            << " z_a=" << cfg.geometry.z_a << " v=" << cfg.motion.v
            << "\n  eta_int = " << rep.eta_int
            << "\n  eta_rad = " << rep.eta_rad << "\n";
  emit(cfg.output, serialize_reports(cfg.output, {rep}));
  return 0;
}

int run_fig3(const RunConfig& cfg) {
  if (cfg.geometry.single_plane)
    throw ConfigError("fig3 needs a two-plate geometry");
  const UnitSystem units;
  const auto spec = quadrature_spec(cfg.numerics);
  const NonadditivityCurve curve =
      eta_curve(cfg.geometry, cfg.particle, cfg.motion, units,
                cfg.numerics.n_points, 0.1, 1.9, spec);
  std::vector<Fig3Row> rows;
  rows.reserve(curve.points.size());
  for (const auto& p : curve.points)
    rows.push_back(Fig3Row{p.z_a_over_w, p.eta, curve.lorentz(p.z_a_over_w)});
  emit(cfg.output, cfg.output.format == OutputFormat::csv
                       ? fig3_to_csv(rows)
                       : fig3_to_json(rows));
  return 0;
}

int run_sweep(const RunConfig& cfg, const std::string& param, double from,
              double to, int steps) {
  static const std::set<std::string> known = {"z_a", "w",    "v",
                                              "rho1", "rho2", "r0"};
  if (!known.count(param))
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected z_a, w, v, rho1, rho2 or r0)");
  if (steps < 1) throw ConfigError("--steps must be >= 1");
  if (cfg.geometry.single_plane && (param == "w" || param == "rho2"))
    throw ConfigError("parameter '" + param +
                      "' cannot be swept for a single plane");

  const UnitSystem units;
  const auto spec = quadrature_spec(cfg.numerics);
  std::vector<ForceReport> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double val =
        steps == 1 ? from : from + (to - from) * i / (steps - 1);
    RunConfig c = cfg;
    if (param == "z_a") {
      c.geometry.z_a = val;
    } else if (param == "w") {
      c.geometry.half_width = val;
    } else if (param == "v") {
      c.motion.v = val;
    } else if (param == "rho1") {
      c.geometry.plate1.rho = val;
    } else if (param == "rho2") {
      c.geometry.plate2.rho = val;
    } else {  // r0 on both plates
      c.geometry.plate1.r0 = val;
      c.geometry.plate2.r0 = val;
    }
    rows.push_back(
        force_cavity(c.geometry, c.particle, c.motion, units, spec));
  }
  emit(cfg.output, serialize_reports(cfg.output, rows));
  return 0;
}

// ---------------------------------------------------------------------------
// validate: invariant diagnostics on the configured models.
// ---------------------------------------------------------------------------

struct CheckLog {
  std::string text;
  bool all_pass = true;
  void report(const std::string& name, bool pass, const std::string& detail) {
    text += pass ? "[PASS] " : "[FAIL] ";
    text += name + ": " + detail + "\n";
    all_pass = all_pass && pass;
  }
};

int run_validate(const RunConfig& cfg, std::uint64_t seed, bool corrupt) {
  const UnitSystem units;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckLog log;
  char buf[160];

  // 1. model invariants (already enforced at config load; re-run explicitly)
  {
    bool ok = !validate(cfg.geometry) && !validate(cfg.particle) &&
              !validate(cfg.motion) && !validate(cfg.geometry.plate1) &&
              !validate(cfg.geometry.plate2);
    log.report("model invariants", ok,
               ok ? "all configured models satisfy their invariants"
                  : "a configured model violates an invariant");
  }

  // 2. reflection linearity: r(w) = r0 + 2 i rho w
  {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double w = -2.0 + 4.0 * unit(rng);
      for (const ReflectionModel* m :
           {&cfg.geometry.plate1, &cfg.geometry.plate2}) {
        const std::complex<double> r = reflection_at(*m, w);
        const double r0 = static_reflection(*m);
        const double rho = m->perfect_conductor ? 0.0 : m->rho;
        worst = std::max(worst, std::abs(r.real() - r0));
        worst = std::max(worst, std::abs(r.imag() - 2.0 * rho * w));
      }
    }
    std::snprintf(buf, sizeof(buf), "max deviation %.3g", worst);
    log.report("reflection linearity", worst <= 1e-13, buf);
  }

  // 3. polarizability reality: alpha_mu(-w) = conj(alpha_mu(w))
  {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double w = cfg.particle.omega_a * (0.1 + 0.8 * unit(rng));
      const Eigen::Matrix3cd a = alpha_mu(cfg.particle, w);
      const Eigen::Matrix3cd b = alpha_mu(cfg.particle, -w);
      worst = std::max(worst, (b - a.conjugate()).cwiseAbs().maxCoeff());
    }
    std::snprintf(buf, sizeof(buf), "max deviation %.3g", worst);
    log.report("polarizability reality", worst <= 1e-12, buf);
  }

  const double zmin = cfg.geometry.single_plane
                          ? cfg.geometry.z_a
                          : std::min(cfg.geometry.z_a,
                                     2.0 * cfg.geometry.half_width -
                                         cfg.geometry.z_a);
  const double q_scale = 1.0 / (2.0 * zmin);

  // 4. kernel parity in q: Sigma even, s_y odd (the corrupt hook injects an
  // artificial asymmetry to demonstrate the check trips)
  {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double q = q_scale * (0.2 + 1.8 * unit(rng));
      const double w = 0.05 + 0.45 * unit(rng);
      const GreenSample gp = green_q(q, cfg.geometry, w, units);
      GreenSample gm = green_q(-q, cfg.geometry, w, units);
      // An imaginary shift lands in the dissipative part; a real one would
      // cancel out of G - G^dagger and stay invisible to the check.
      if (corrupt) gm.G(0, 0) += std::complex<double>(0.0, 1e-3);
      const SigmaSpin dp = sigma_s_decompose(gp);
      const SigmaSpin dm = sigma_s_decompose(gm);
      const double scale = 1.0 + dp.sigma.cwiseAbs().maxCoeff();
      worst = std::max(worst,
                       (dp.sigma - dm.sigma).cwiseAbs().maxCoeff() / scale);
      worst = std::max(worst,
                       std::abs(dp.s_perp(1) + dm.s_perp(1)) / scale);
    }
    std::snprintf(buf, sizeof(buf), "max asymmetry %.3g", worst);
    log.report("kernel parity", worst <= 1e-8, buf);
  }

  // 5. Sigma positive semidefinite for w > 0
  {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double q = q_scale * (0.2 + 1.8 * unit(rng));
      const double w = 0.05 + 0.45 * unit(rng);
      const SigmaSpin d = sigma_s_decompose(green_q(q, cfg.geometry, w, units));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(d.sigma);
      const double norm = std::max(1e-300, d.sigma.cwiseAbs().maxCoeff());
      worst = std::max(worst, -es.eigenvalues().minCoeff() / norm);
    }
    std::snprintf(buf, sizeof(buf), "most negative eigenvalue %.3g (relative)",
                  worst);
    log.report("sigma psd", worst <= 1e-12, buf);
  }

  // 6. analytic frequency derivative vs finite differences
  {
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double q = q_scale * (0.3 + 1.2 * unit(rng));
      const GreenDerivative ana =
          green_derivative_at0(q, cfg.geometry, units);
      const auto fd_zz = quad::derivative_at(
          [&](double w) {
            return sigma_s_decompose(green_q(q, cfg.geometry, w, units))
                .sigma(2, 2);
          },
          0.0, 1, 1e-3);
      const auto fd_sy = quad::derivative_at(
          [&](double w) {
            return sigma_s_decompose(green_q(q, cfg.geometry, w, units))
                .s_perp(1);
          },
          0.0, 1, 1e-3);
      const double scale =
          1e-12 + std::abs(ana.dsigma(2, 2)) + std::abs(ana.ds_y);
      worst = std::max(worst,
                       std::abs(fd_zz.value - ana.dsigma(2, 2)) / scale);
      worst = std::max(worst, std::abs(fd_sy.value - ana.ds_y) / scale);
    }
    std::snprintf(buf, sizeof(buf), "max relative mismatch %.3g", worst);
    log.report("derivative agreement", worst <= 1e-6, buf);
  }

  // 7. mirror symmetry of the cavity report
  if (cfg.geometry.single_plane) {
    log.report("mirror symmetry", true, "skipped (single plane)");
  } else {
    CavityGeometry g2 = cfg.geometry;
    g2.z_a = 2.0 * cfg.geometry.half_width - cfg.geometry.z_a;
    std::swap(g2.plate1, g2.plate2);
    const auto spec = quadrature_spec(cfg.numerics);
    const ForceReport a =
        force_cavity(cfg.geometry, cfg.particle, cfg.motion, units, spec);
    const ForceReport b =
        force_cavity(g2, cfg.particle, cfg.motion, units, spec);
    const double scale = 1e-300 + std::abs(a.f_int) + std::abs(a.f_rad);
    const double worst = std::max(std::abs(a.f_int - b.f_int),
                                  std::abs(a.f_rad - b.f_rad)) /
                         scale;
    std::snprintf(buf, sizeof(buf), "relative mismatch %.3g", worst);
    log.report("mirror symmetry", worst <= 1e-8, buf);
  }

  // 8. G_Im reconstruction from the Sigma/spin decomposition
  {
    double worst = 0.0;
    const std::complex<double> im(0.0, 1.0);
    for (int k = 0; k < 4; ++k) {
      const double q = q_scale * (0.2 + 1.8 * unit(rng));
      const double w = 0.05 + 0.45 * unit(rng);
      const GreenSample g = green_q(q, cfg.geometry, w, units);
      const Eigen::Matrix3cd gim =
          (g.G - g.G.adjoint()) / std::complex<double>(0.0, 2.0);
      const SigmaSpin d = sigma_s_decompose(g);
      Eigen::Matrix3cd rec = d.sigma.cast<std::complex<double>>();
      // s . L with (L_i)_{jk} = -i eps_{ijk}
      rec(1, 2) += -im * d.s_perp(0);
      rec(2, 1) += im * d.s_perp(0);
      rec(2, 0) += -im * d.s_perp(1);
      rec(0, 2) += im * d.s_perp(1);
      rec(0, 1) += -im * d.s_perp(2);
      rec(1, 0) += im * d.s_perp(2);
      const double norm = 1e-300 + gim.cwiseAbs().maxCoeff();
      worst = std::max(worst, (rec - gim).cwiseAbs().maxCoeff() / norm);
    }
    std::snprintf(buf, sizeof(buf), "max relative residual %.3g", worst);
    log.report("decomposition reconstruction", worst <= 1e-12, buf);
  }

  log.text += log.all_pass ? "all checks passed\n" : "some checks FAILED\n";
  if (!cfg.output.path.empty()) emit(cfg.output, log.text);
  std::cout << log.text;
  return log.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quantum friction (drag ~ v^3) on a small polarizable particle moving "
      "parallel to planar surfaces; reduced units hbar = eps0 = 1"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path,
                 "path to an INI run configuration");
  app.add_option("--out", flags.out_path,
                 "output file (default: stdout)");
  app.add_option("--format", flags.format, "output format: csv or json");
  app.add_option("--rel-tol", flags.rel_tol,
                 "override numerics.rel_tol");
  app.add_option("--seed", flags.seed,
                 "seed for randomized validate checks");

  auto* single =
      app.add_subcommand("single", "force report for a single plane");
  auto* cavity =
      app.add_subcommand("cavity", "force report inside a two-plate cavity");
  auto* fig3 = app.add_subcommand(
      "fig3", "nonadditive enhancement eta_rad across the cavity");

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  std::string sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  sweep->add_option("--param", sweep_param,
                    "one of z_a, w, v, rho1, rho2, r0")
      ->required();
  sweep->add_option("--from", sweep_from, "first value")->required();
  sweep->add_option("--to", sweep_to, "last value")->required();
  sweep->add_option("--steps", sweep_steps, "number of rows")->required();

  auto* validate_cmd =
      app.add_subcommand("validate", "run the invariant diagnostics suite");
  bool corrupt = false;
  validate_cmd->add_flag("--corrupt-kernel", corrupt)->group("");

  for (auto* sub : {single, cavity, fig3, sweep, validate_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve_config(flags);
    if (app.got_subcommand(single)) return run_single(cfg);
    if (app.got_subcommand(cavity)) return run_cavity(cfg);
    if (app.got_subcommand(fig3)) return run_fig3(cfg);
    if (app.got_subcommand(sweep))
      return run_sweep(cfg, sweep_param, sweep_from, sweep_to, sweep_steps);
    return run_validate(cfg, flags.seed, corrupt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
