#pragma once
// Nonequilibrium statistics layer: the dissipation kernel D(omega, v) felt
// by the moving particle (internal bath channel + field channel), the
// dressed velocity-dependent polarizability, the resulting power spectrum,
// the free-particle Langevin force spectrum, and the full force functional
//   F = -2 Tr int_0^inf dw int dq/2pi q S^T(qv - w, v) G_Im(q, w).

#include <vector>

#include <Eigen/Dense>

#include "qfric/greens.hpp"
#include "qfric/quadrature.hpp"
#include "qfric/units.hpp"

namespace qfric {

// D(omega, v). Hermitian: real diagonal plus the spin part i*h_s in the
// (x,z) block inherited from G_Im; positive semidefinite where nonzero.
struct DissipationKernel {
  double omega = 0.0;
  double v = 0.0;
  Eigen::Matrix3cd D = Eigen::Matrix3cd::Zero();
};

struct PowerSpectrum {
  double omega = 0.0;
  double v = 0.0;
  Eigen::Matrix3cd S = Eigen::Matrix3cd::Zero();
};

// Channel switches; the two channels add linearly in D.
struct DissipationChannels {
  bool bath = true;
  bool field = true;
};

// D = (omega eps0 theta(omega)/alpha0) mu_Re(omega)
//     + int dq/2pi theta(omega + q v) G_Im(q, omega + q v).
DissipationKernel dissipation_kernel(double omega, double v,
                                     const CavityGeometry& geom,
                                     const ParticleModel& particle,
                                     const UnitSystem& units,
                                     DissipationChannels channels = {},
                                     const quad::QuadratureSpec& spec = {});

// Gamma(omega, v) = int dq/2pi G(q, omega + q v): the self-interaction of
// the dipole with its own scattered field, which dresses alpha.
Eigen::Matrix3cd field_response(double omega, double v,
                                const CavityGeometry& geom,
                                const UnitSystem& units,
                                const quad::QuadratureSpec& spec = {});

// alpha(omega, v) = alpha_mu(omega) [1 - Gamma(omega, v) alpha_mu]^{-1}.
// Throws std::runtime_error (with the condition number) when the bracket is
// numerically singular.
Eigen::Matrix3cd dressed_alpha(double omega, double v,
                               const CavityGeometry& geom,
                               const ParticleModel& particle,
                               const UnitSystem& units,
                               const quad::QuadratureSpec& spec = {});

// S(omega, v) = (hbar/pi) alpha D alpha^dag; Hermitian PSD.
PowerSpectrum power_spectrum(double omega, double v,
                             const CavityGeometry& geom,
                             const ParticleModel& particle,
                             const UnitSystem& units,
                             const quad::QuadratureSpec& spec = {});

// One-sided spectral density of the free-particle Langevin force:
// 4 pi hbar theta(omega) alpha0^{-1} eps0 omega mu_Re(omega).
Eigen::Matrix3d langevin_spectrum(double omega, const ParticleModel& particle,
                                  const UnitSystem& units);

struct FullForceOptions {
  // Default uses the low-frequency substitution S ~ (hbar alpha0^2/pi) D;
  // the dressed-alpha spectrum is much costlier inside the 2D integral.
  bool full_spectrum = false;
  double rel_tol = 1e-5;
  int cheb_nodes = 65;          // interpolation nodes for D's field part
  double q_cap_folds = 45.0;    // q cutoff in units of 1/(2 z_min)
  double omega_cut_folds = 20.0;  // window below omega ~ q v (evanescent)
};

// Total drag from the force functional; negative (opposite to the motion).
double force_full(const CavityGeometry& geom, const ParticleModel& particle,
                  const MotionSpec& motion, const UnitSystem& units,
                  const FullForceOptions& opt = {});

// Barycentric interpolation on Chebyshev-Lobatto nodes of [a, b]; used to
// cache the frequency profile of slow integrand factors.
class ChebyshevInterpolant {
 public:
  // values[j] = f(node j); nodes run from b down to a (cos ordering).
  ChebyshevInterpolant(double a, double b, std::vector<double> values);
  static std::vector<double> nodes(double a, double b, int n);
  double operator()(double x) const;

 private:
  double a_, b_;
  std::vector<double> values_;
};

}  // namespace qfric
