#pragma once
// Leading-order (v^3) drag on a moving polarizable particle: the internal
// dissipation channel, the field (radiation) channel with its Sigma and
// spin contributions, additive two-surface baselines, and the nonadditivity
// factors eta built from them.

#include <functional>
#include <utility>
#include <vector>

#include "qfric/greens.hpp"
#include "qfric/quadrature.hpp"
#include "qfric/units.hpp"

namespace qfric {

struct ForceReport {
  double z_a = 0.0;
  double w = 0.0;  // half separation; 0 marks a single-plane report
  double v = 0.0;
  double f_int = 0.0;
  double f_rad = 0.0;
  double f_int_additive = 0.0;
  double f_rad_additive = 0.0;
  double eta_int = 0.0;  // NaN when the additive baseline vanishes
  double eta_rad = 0.0;  // NaN when the additive baseline vanishes
  double rad_sigma_term = 0.0;
  double rad_spin_term = 0.0;
};

// eta_rad sampled along z_a/w in (0, 2), plus the parameters of the
// empirical Lorentzian profile eta ~ 1 + Lambda^2/((1 - z_a/w)^2 + Gamma^2).
struct NonadditivityCurve {
  struct Point {
    double z_a_over_w = 0.0;
    double eta = 0.0;
  };
  std::vector<Point> points;
  double lorentz_lambda = 0.42;
  double lorentz_gamma = 0.15;
  double lorentz(double z_a_over_w) const;
};

// Frequency-derivative kernels Sigma'(q), s'_y(q) for a fixed geometry.
using KernelProvider = std::function<GreenDerivative(double q)>;

// Provider backed by green_derivative_at0 for the given cavity.
KernelProvider cavity_kernel_provider(const CavityGeometry& geom,
                                      const UnitSystem& units,
                                      const quad::QuadratureSpec& spec = {});

// Internal-dissipation drag
//   F_int = -(hbar alpha0 eps0 / pi) v^3 * (1/3) int_0^inf dq/(2pi)
//           q^4 Tr[mu Sigma'(q)].
// Pass spec.decay_scale ~ 1/(2 z_min) for efficient tail resolution.
double force_int_general(const KernelProvider& kernels,
                         const InternalDissipationModel& mu,
                         const MotionSpec& motion,
                         const ParticleModel& particle, const UnitSystem& units,
                         const quad::QuadratureSpec& spec = {});

struct RadForce {
  double total = 0.0;
  double sigma_term = 0.0;
  double spin_term = 0.0;
};

// Field-fluctuation drag from moments of Sigma' and s'_y:
//   sigma term: -(hbar alpha0^2 / pi) v^3 (1/pi^2) sum_a [ M0_a M4_a / 6
//               + M2_a^2 / 2 ],        M_k^a = int_0^inf q^k Sigma'_aa dq
//   spin term:  +(hbar alpha0^2 / pi) v^3 (4 / 3pi^2) S1 S3,
//               S_k = int_0^inf q^k s'_y dq
// (the double-q convolution collapses to products of one-dimensional
// moments because Sigma' is even and s'_y odd in q).
RadForce force_rad_general(const KernelProvider& kernels,
                           const MotionSpec& motion,
                           const ParticleModel& particle,
                           const UnitSystem& units,
                           const quad::QuadratureSpec& spec = {});

// Complete leading-order report for a cavity (or single plane) via the
// radial-moment fast path: both channels, additive baselines from the same
// quadrature pass, and the eta factors.
ForceReport force_cavity(const CavityGeometry& geom,
                         const ParticleModel& particle,
                         const MotionSpec& motion, const UnitSystem& units,
                         const quad::QuadratureSpec& spec = {});

// eta_rad(z_a/w) sampled at n_points uniformly spaced points, clamped to a
// guard band of 0.05 w at each plate. For identical plates the curve is
// symmetric about z_a = w.
NonadditivityCurve eta_curve(const CavityGeometry& geom,
                             const ParticleModel& particle,
                             const MotionSpec& motion, const UnitSystem& units,
                             int n_points, double u_min = 0.05,
                             double u_max = 1.95,
                             const quad::QuadratureSpec& spec = {});

// eta_int at the cavity center for in-plane (mu = diag(1,1,0)) and
// perpendicular (mu = diag(0,0,1)) internal dissipation.
std::pair<double, double> anisotropy_shift(const CavityGeometry& geom,
                                           const MotionSpec& motion,
                                           const UnitSystem& units,
                                           const quad::QuadratureSpec& spec = {});

// Both sides of the spin-channel factorization identity
//   int_0^inf du u^4 int_-inf^inf dq s(q) s(u-q)
//       = 16 (int_0^inf q^3 s dq)(int_0^inf q s dq)
// for a kernel s odd in q (pass the signed-q extension). The convolution
// of two odd kernels is even, so the u >= 0 half carries half of the
// full-line moment expansion sum_k C(4,k) M_k M_{4-k} = 32 S1 S3.
std::pair<double, double> spin_factorization_check(
    const std::function<double(double)>& kernel,
    const quad::QuadratureSpec& spec = {});

// Single-plane closed forms for an Ohmic plate with slope rho.
double force_int_plane_closed(double z_a, double rho,
                              const ParticleModel& particle,
                              const MotionSpec& motion,
                              const UnitSystem& units);
double force_rad_plane_closed(double z_a, double rho,
                              const ParticleModel& particle,
                              const MotionSpec& motion,
                              const UnitSystem& units);

}  // namespace qfric
