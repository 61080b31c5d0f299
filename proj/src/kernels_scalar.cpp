#include "qfric/kernels.hpp"

#include <cmath>

// Kernel algebra, with r_k(w) = r0k + 2i*eps0*rho_k*w and Ea = e^{-2 p z_a},
// Eb = e^{-2 p (2w - z_a)}, E4 = Ea*Eb:
//
//   P+-(p, w) = (r1 Ea +- r2 Eb) / (1 - r1 r2 E4)
//   R(p, w)   = 2 r1 r2 E4 / (1 - r1 r2 E4)
//
// The static denominator D0 = 1 - r01 r02 E4 cancels catastrophically when
// r01 r02 -> 1 and p -> 0; it is evaluated as
//   D0 = (1 - g) + g * (-expm1(-4 p w)),  g = r01 r02,
// which is exact and stable in both regimes. The minus combinations
// x1 Ea - x2 Eb cancel the same way when p -> 0 and x1 ~ x2; they are
// rewritten as (x1 - x2) Ea + x2 (Ea - Eb) with
//   Ea - Eb = -Ea * expm1(-2 p (zb - z_a)),
// which holds for either sign of zb - z_a and loses no digits.

namespace qfric::kernels {

CavityParams make_params(const CavityGeometry& geom) {
  CavityParams c;
  c.z_a = geom.z_a;
  c.width = geom.single_plane ? 0.0 : 2.0 * geom.half_width;
  c.r01 = static_reflection(geom.plate1);
  c.rho1 = geom.plate1.perfect_conductor ? 0.0 : geom.plate1.rho;
  c.r02 = geom.single_plane ? 0.0 : static_reflection(geom.plate2);
  c.rho2 = (geom.single_plane || geom.plate2.perfect_conductor)
               ? 0.0
               : geom.plate2.rho;
  c.single_plane = geom.single_plane;
  return c;
}

void deriv_kernels_scalar(const CavityParams& c, std::span<const double> p,
                          const DerivBatch& out) {
  const std::size_t n = p.size();
  if (c.single_plane) {
    const double two_rho1 = 2.0 * c.rho1;
    for (std::size_t i = 0; i < n; ++i) {
      const double Ea = std::exp(-2.0 * p[i] * c.z_a);
      out.dPp[i] = two_rho1 * Ea;
      out.dPm[i] = two_rho1 * Ea;
      out.dR[i] = 0.0;
    }
    return;
  }
  const double zb = c.width - c.z_a;
  const double g = c.r01 * c.r02;
  const double cross = c.rho1 * c.r02 + c.rho2 * c.r01;
  for (std::size_t i = 0; i < n; ++i) {
    const double Ea = std::exp(-2.0 * p[i] * c.z_a);
    const double Eb = std::exp(-2.0 * p[i] * zb);
    const double E4 = Ea * Eb;
    const double D0 = (1.0 - g) + g * (-std::expm1(-2.0 * p[i] * (c.z_a + zb)));
    const double dE = -Ea * std::expm1(-2.0 * p[i] * (zb - c.z_a));  // Ea - Eb
    const double inv2 = 1.0 / (D0 * D0);
    const double cE4 = cross * E4;
    out.dPp[i] = 2.0 * ((c.rho1 * Ea + c.rho2 * Eb) * D0 +
                        (c.r01 * Ea + c.r02 * Eb) * cE4) * inv2;
    out.dPm[i] = 2.0 * (((c.rho1 - c.rho2) * Ea + c.rho2 * dE) * D0 +
                        ((c.r01 - c.r02) * Ea + c.r02 * dE) * cE4) * inv2;
    out.dR[i] = 4.0 * cE4 * inv2;
  }
}

void freq_kernels_scalar(const CavityParams& c, double omega,
                         std::span<const double> p, const FreqBatch& out) {
  const std::size_t n = p.size();
  const double b1 = 2.0 * c.rho1 * omega;
  if (c.single_plane) {
    for (std::size_t i = 0; i < n; ++i) {
      const double Ea = std::exp(-2.0 * p[i] * c.z_a);
      out.rePp[i] = c.r01 * Ea;
      out.imPp[i] = b1 * Ea;
      out.rePm[i] = c.r01 * Ea;
      out.imPm[i] = b1 * Ea;
      out.reR[i] = 0.0;
      out.imR[i] = 0.0;
    }
    return;
  }
  const double zb = c.width - c.z_a;
  const double b2 = 2.0 * c.rho2 * omega;
  const double g = c.r01 * c.r02;
  // r1 r2 = (g - b1 b2) + i (r01 b2 + r02 b1)
  const double ra = g - b1 * b2;
  const double rb = c.r01 * b2 + c.r02 * b1;
  for (std::size_t i = 0; i < n; ++i) {
    const double Ea = std::exp(-2.0 * p[i] * c.z_a);
    const double Eb = std::exp(-2.0 * p[i] * zb);
    const double E4 = Ea * Eb;
    const double D0 = (1.0 - g) + g * (-std::expm1(-2.0 * p[i] * (c.z_a + zb)));
    const double dE = -Ea * std::expm1(-2.0 * p[i] * (zb - c.z_a));  // Ea - Eb
    const double one_c = D0 + E4 * b1 * b2;  // 1 - Re(r1 r2 E4)
    const double d = E4 * rb;                //     Im(r1 r2 E4)
    const double inv_den = 1.0 / (one_c * one_c + d * d);
    const double Ap = c.r01 * Ea + c.r02 * Eb;
    const double Am = (c.r01 - c.r02) * Ea + c.r02 * dE;
    const double Bp = b1 * Ea + b2 * Eb;
    const double Bm = (b1 - b2) * Ea + b2 * dE;
    out.rePp[i] = (Ap * one_c - Bp * d) * inv_den;
    out.imPp[i] = (Bp * one_c + Ap * d) * inv_den;
    out.rePm[i] = (Am * one_c - Bm * d) * inv_den;
    out.imPm[i] = (Bm * one_c + Am * d) * inv_den;
    const double cc = E4 * ra;
    out.reR[i] = 2.0 * (cc * one_c - d * d) * inv_den;
    out.imR[i] = 2.0 * d * inv_den;
  }
}

}  // namespace qfric::kernels
