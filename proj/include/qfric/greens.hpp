#pragma once
// Near-field scattered Green tensor of the planar cavity / single plane,
// its Sigma / spin decomposition, the analytic frequency-derivative kernels
// at omega = 0, and the radial kernel moments that feed the force assembly.

#include <complex>

#include <Eigen/Dense>

#include "qfric/quadrature.hpp"
#include "qfric/units.hpp"

namespace qfric {

// p_y-integrated scattered Green tensor at in-plane wavevector q (along the
// motion), height z_a, frequency omega.
struct GreenSample {
  double q = 0.0;
  Eigen::Matrix3cd G = Eigen::Matrix3cd::Zero();
};

// G_Im = (G - G^dag)/(2i) split as G_Im = Sigma + s . L with
// (L_i)_{jk} = -i eps_{ijk}. For motion along x in a planar geometry the
// spin vector is s = (0, s_y, 0).
struct SigmaSpin {
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  Eigen::Vector3d s_perp = Eigen::Vector3d::Zero();
};

// Frequency derivatives at omega = 0: Sigma'(q) and s'_y(q).
struct GreenDerivative {
  Eigen::Matrix3d dsigma = Eigen::Matrix3d::Zero();
  double ds_y = 0.0;
};

// Cavity field reflection ladder R = 2 r1 r2 e^{-4pw} / (1 - r1 r2 e^{-4pw}).
// Throws std::domain_error when |denominator| < 1e-12 (resonant cavity).
std::complex<double> fabry_perot_R(double p, const CavityGeometry& geom,
                                   double omega);

// P+- = (r1 e^{-2 p z_a} +- r2 e^{-2 p (2w - z_a)}) / (1 - r1 r2 e^{-4pw});
// sign = +1 or -1.
std::complex<double> cavity_P(double p, const CavityGeometry& geom,
                              double omega, int sign);

// G(q, omega) as the p_y-integral of
//   (p/2eps0) P+ Pi - (p/2eps0) R M Pi - (q/2eps0) P- L_y,
// with Pi = diag(q^2/p^2, p_y^2/p^2, 1), M = diag(1, 1, -1),
// p = sqrt(q^2 + p_y^2). Relative tolerance 1e-9 unless overridden.
GreenSample green_q(double q, const CavityGeometry& geom, double omega,
                    const UnitSystem& units,
                    const quad::QuadratureSpec& spec = {});

SigmaSpin sigma_s_decompose(const GreenSample& sample);

// Analytic d/domega at omega = 0 of the Sigma / spin kernels under the
// Ohmic reflection model, p_y-integrated.
GreenDerivative green_derivative_at0(double q, const CavityGeometry& geom,
                                     const UnitSystem& units,
                                     const quad::QuadratureSpec& spec = {});

// Radial moments of the omega-derivative kernels over p in (0, inf):
//   Pk = int p^k dPp,  Rk = int p^k dR,  Mk = int p^k dPm,
// with dPp = d/dw Im P+|0 etc. The `sk_*` fields hold the same moments for
// each plate alone (single-plane kernels), used as the additive baseline;
// all components are accumulated over the same quadrature nodes so that
// ratio quantities (eta) benefit from systematic-error cancellation.
struct PlateMoments {
  double P2 = 0, P4 = 0, P6 = 0;  // int p^k * 2 rho e^{-2 p d}
  double M3 = 0, M5 = 0;
};

struct CavityMoments {
  double P2 = 0, P4 = 0, P6 = 0;
  double R2 = 0, R4 = 0, R6 = 0;
  double M3 = 0, M5 = 0;
  PlateMoments plate1;  // single-plane moments at distance z_a
  PlateMoments plate2;  // single-plane moments at distance 2w - z_a
  double error_estimate = 0.0;
  int evals = 0;
};

CavityMoments cavity_moments(const CavityGeometry& geom,
                             const quad::QuadratureSpec& spec = {});

}  // namespace qfric
