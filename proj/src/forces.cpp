#include "qfric/forces.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace qfric {
namespace {

constexpr double pi = std::numbers::pi;

double safe_ratio(double num, double den) {
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

// Per-plate field-channel moment combination entering the additive baseline
// (a single plane has R moments = 0 and P-moment = M-moment kernels).
double plate_rad_braces(const PlateMoments& m) {
  return (3.0 / 8.0) * m.P2 * m.P6 + (13.0 / 16.0) * m.P4 * m.P4 -
         m.M3 * m.M5;
}

}  // namespace

double NonadditivityCurve::lorentz(double z_a_over_w) const {
  const double du = 1.0 - z_a_over_w;
  return 1.0 + lorentz_lambda * lorentz_lambda /
                   (du * du + lorentz_gamma * lorentz_gamma);
}

KernelProvider cavity_kernel_provider(const CavityGeometry& geom,
                                      const UnitSystem& units,
                                      const quad::QuadratureSpec& spec) {
  require_valid(geom);
  quad::QuadratureSpec inner = spec;
  inner.decay_scale = 1.0 / (2.0 * (geom.single_plane
                                        ? geom.z_a
                                        : std::min(geom.z_a,
                                                   2.0 * geom.half_width -
                                                       geom.z_a)));
  return [geom, units, inner](double q) {
    return green_derivative_at0(q, geom, units, inner);
  };
}

double force_int_general(const KernelProvider& kernels,
                         const InternalDissipationModel& mu,
                         const MotionSpec& motion,
                         const ParticleModel& particle, const UnitSystem& units,
                         const quad::QuadratureSpec& spec) {
  require_valid(mu);
  require_valid(motion);
  auto f = [&](std::span<const double> qs, std::span<double> out) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double q = qs[i];
      const GreenDerivative k = kernels(q);
      const double tr = mu.mu_xx * k.dsigma(0, 0) + mu.mu_yy * k.dsigma(1, 1) +
                        mu.mu_zz * k.dsigma(2, 2);
      out[i] = q * q * q * q * tr;
    }
  };
  const auto res = quad::integrate_halfline<double>(f, spec);
  const double v = motion.v;
  return -(units.hbar * particle.alpha0 * units.eps0 / pi) * v * v * v *
         res.value / (6.0 * pi);
}

RadForce force_rad_general(const KernelProvider& kernels,
                           const MotionSpec& motion,
                           const ParticleModel& particle,
                           const UnitSystem& units,
                           const quad::QuadratureSpec& spec) {
  require_valid(motion);
  // Moments of the three diagonal Sigma' components (q^0, q^2, q^4 each)
  // and of s'_y (q^1, q^3), all on the same node set.
  using Row = std::array<double, 11>;
  auto f = [&](std::span<const double> qs, std::span<Row> out) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double q = qs[i];
      const double q2 = q * q, q3 = q2 * q, q4 = q2 * q2;
      const GreenDerivative k = kernels(q);
      out[i] = {k.dsigma(0, 0), q2 * k.dsigma(0, 0), q4 * k.dsigma(0, 0),
                k.dsigma(1, 1), q2 * k.dsigma(1, 1), q4 * k.dsigma(1, 1),
                k.dsigma(2, 2), q2 * k.dsigma(2, 2), q4 * k.dsigma(2, 2),
                q * k.ds_y,     q3 * k.ds_y};
    }
  };
  const auto res = quad::integrate_halfline<Row>(f, spec);
  const Row& m = res.value;

  double t_sigma = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double M0 = m[3 * a], M2 = m[3 * a + 1], M4 = m[3 * a + 2];
    t_sigma += M0 * M4 / 6.0 + 0.5 * M2 * M2;
  }
  t_sigma /= pi * pi;
  const double t_spin = -(4.0 / (3.0 * pi * pi)) * m[9] * m[10];

  const double v = motion.v;
  const double pref =
      -(units.hbar * particle.alpha0 * particle.alpha0 / pi) * v * v * v;
  RadForce out;
  out.sigma_term = pref * t_sigma;
  out.spin_term = pref * t_spin;
  out.total = out.sigma_term + out.spin_term;
  return out;
}

ForceReport force_cavity(const CavityGeometry& geom,
                         const ParticleModel& particle,
                         const MotionSpec& motion, const UnitSystem& units,
                         const quad::QuadratureSpec& spec) {
  require_valid(geom);
  require_valid(particle);
  require_valid(motion);

  const CavityMoments m = cavity_moments(geom, spec);
  const auto& mu = particle.dissipation;
  const double bracket_p = 5.0 * mu.mu_xx + mu.mu_yy + 6.0 * mu.mu_zz;
  const double bracket_m = 5.0 * mu.mu_xx + mu.mu_yy - 6.0 * mu.mu_zz;
  const double A_plus = (pi / 8.0) * bracket_p;
  const double A_minus = (pi / 8.0) * bracket_m;

  const double v = motion.v;
  const double v3 = v * v * v;
  const double pref_int =
      units.hbar * particle.alpha0 * v3 / (48.0 * pi * pi * pi);
  const double pref_rad = units.hbar * particle.alpha0 * particle.alpha0 * v3 /
                          (64.0 * pi * pi * pi);

  ForceReport rep;
  rep.z_a = geom.z_a;
  rep.w = geom.single_plane ? 0.0 : geom.half_width;
  rep.v = v;

  rep.f_int = -pref_int * (A_plus * m.P6 - A_minus * m.R6);
  rep.f_int_additive = -pref_int * A_plus * (m.plate1.P6 + m.plate2.P6);

  const double n_sigma = (3.0 / 8.0) * (m.P2 * m.P6 + m.R2 * m.R6) +
                         (13.0 / 16.0) * (m.P4 * m.P4 + m.R4 * m.R4) +
                         (1.0 / 8.0) * (m.P2 * m.R6 + m.P6 * m.R2) +
                         (3.0 / 8.0) * m.P4 * m.R4;
  rep.rad_sigma_term = -pref_rad * n_sigma;
  rep.rad_spin_term = pref_rad * m.M3 * m.M5;
  rep.f_rad = rep.rad_sigma_term + rep.rad_spin_term;
  rep.f_rad_additive =
      -pref_rad * (plate_rad_braces(m.plate1) + plate_rad_braces(m.plate2));

  rep.eta_int = safe_ratio(rep.f_int, rep.f_int_additive);
  rep.eta_rad = safe_ratio(rep.f_rad, rep.f_rad_additive);
  return rep;
}

NonadditivityCurve eta_curve(const CavityGeometry& geom,
                             const ParticleModel& particle,
                             const MotionSpec& motion, const UnitSystem& units,
                             int n_points, double u_min, double u_max,
                             const quad::QuadratureSpec& spec) {
  if (n_points < 3)
    throw std::invalid_argument("eta_curve: n_points must be >= 3");
  if (geom.single_plane)
    throw std::invalid_argument("eta_curve: requires a two-plate cavity");
  require_valid(geom);

  const double lo = std::max(u_min, 0.05);
  const double hi = std::min(u_max, 1.95);
  if (!(lo < hi))
    throw std::invalid_argument("eta_curve: empty z_a/w range after clamping");

  NonadditivityCurve curve;
  curve.points.reserve(n_points);
  CavityGeometry g = geom;
  for (int i = 0; i < n_points; ++i) {
    const double u = lo + (hi - lo) * i / (n_points - 1);
    g.z_a = u * geom.half_width;
    const ForceReport rep = force_cavity(g, particle, motion, units, spec);
    curve.points.push_back({u, rep.eta_rad});
  }
  return curve;
}

std::pair<double, double> anisotropy_shift(const CavityGeometry& geom,
                                           const MotionSpec& motion,
                                           const UnitSystem& units,
                                           const quad::QuadratureSpec& spec) {
  ParticleModel particle;
  particle.dissipation = InternalDissipationModel{1.0, 1.0, 0.0};
  const double eta_xxyy =
      force_cavity(geom, particle, motion, units, spec).eta_int;
  particle.dissipation = InternalDissipationModel{0.0, 0.0, 1.0};
  const double eta_zz =
      force_cavity(geom, particle, motion, units, spec).eta_int;
  return {eta_xxyy, eta_zz};
}

std::pair<double, double> spin_factorization_check(
    const std::function<double(double)>& kernel,
    const quad::QuadratureSpec& spec) {
  // lhs: outer u on (0, inf), inner q on (-inf, inf) of u^4 s(q) s(u - q).
  auto f2 = [&](std::span<const double> outer, std::span<const double> qs,
                std::span<double> out) {
    const double u = outer[0];
    const double u4 = u * u * u * u;
    for (std::size_t i = 0; i < qs.size(); ++i)
      out[i] = u4 * kernel(qs[i]) * kernel(u - qs[i]);
  };
  const std::array<quad::AxisSpec, 2> axes = {
      quad::AxisSpec{quad::Axis::halfline, 2.0 * spec.decay_scale},
      quad::AxisSpec{quad::Axis::fullline, spec.decay_scale}};
  const double lhs =
      quad::integrate_nested<double>(f2, 2, spec, axes).value;

  using Row = std::array<double, 2>;
  auto f1 = [&](std::span<const double> qs, std::span<Row> out) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double q = qs[i];
      const double s = kernel(q);
      out[i] = {q * s, q * q * q * s};
    }
  };
  const auto mom = quad::integrate_halfline<Row>(f1, spec).value;
  const double rhs = 16.0 * mom[1] * mom[0];
  return {lhs, rhs};
}

double force_int_plane_closed(double z_a, double rho,
                              const ParticleModel& particle,
                              const MotionSpec& motion,
                              const UnitSystem& units) {
  const auto& mu = particle.dissipation;
  const double bracket = 5.0 * mu.mu_xx + mu.mu_yy + 6.0 * mu.mu_zz;
  const double v = motion.v;
  return -(15.0 / (4.0 * pi * pi)) * units.hbar * particle.alpha0 *
         units.eps0 * bracket * rho * v * v * v / std::pow(2.0 * z_a, 7);
}

double force_rad_plane_closed(double z_a, double rho,
                              const ParticleModel& particle,
                              const MotionSpec& motion,
                              const UnitSystem& units) {
  const double v = motion.v;
  return -(18.0 / (pi * pi * pi)) * units.hbar * particle.alpha0 *
         particle.alpha0 * rho * rho * v * v * v / std::pow(2.0 * z_a, 10);
}

}  // namespace qfric
