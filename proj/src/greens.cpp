#include "qfric/greens.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "qfric/kernels.hpp"

namespace qfric {
namespace {

using std::complex;

// Slowest kernel decay rate in p: exp(-2 p zmin) with zmin the distance to
// the nearest plate. Quadrature decay scales are 1/(2 zmin).
double zmin_of(const CavityGeometry& geom) {
  return geom.single_plane ? geom.z_a
                           : std::min(geom.z_a, 2.0 * geom.half_width - geom.z_a);
}

complex<double> stable_denominator(double p, const CavityGeometry& geom,
                                   double omega) {
  const complex<double> r1 = reflection_at(geom.plate1, omega);
  const complex<double> r2 = geom.single_plane
                                 ? complex<double>(0.0, 0.0)
                                 : reflection_at(geom.plate2, omega);
  const double E4 = std::exp(-4.0 * p * geom.half_width);
  // 1 - r1 r2 E4 with the static part evaluated cancellation-free:
  // Re = (1 - g) + g(1 - E4) + E4 * Im(r1) Im(r2).
  const double g = r1.real() * r2.real();
  const double re = (1.0 - g) + g * (-std::expm1(-4.0 * p * geom.half_width)) +
                    E4 * r1.imag() * r2.imag();
  const double im = -E4 * (r1.real() * r2.imag() + r2.real() * r1.imag());
  return {re, im};
}

}  // namespace

complex<double> fabry_perot_R(double p, const CavityGeometry& geom,
                              double omega) {
  const complex<double> den = stable_denominator(p, geom, omega);
  if (std::abs(den) < 1e-12)
    throw std::domain_error("fabry_perot_R: resonant cavity, |1 - r1 r2 e^{-4pw}| < 1e-12");
  const complex<double> r1 = reflection_at(geom.plate1, omega);
  const complex<double> r2 = geom.single_plane
                                 ? complex<double>(0.0, 0.0)
                                 : reflection_at(geom.plate2, omega);
  const double E4 = std::exp(-4.0 * p * geom.half_width);
  return 2.0 * r1 * r2 * E4 / den;
}

complex<double> cavity_P(double p, const CavityGeometry& geom, double omega,
                         int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("cavity_P: sign must be +1 or -1");
  const complex<double> r1 = reflection_at(geom.plate1, omega);
  const double Ea = std::exp(-2.0 * p * geom.z_a);
  if (geom.single_plane) return r1 * Ea;
  const complex<double> den = stable_denominator(p, geom, omega);
  if (std::abs(den) < 1e-12)
    throw std::domain_error("cavity_P: resonant cavity, |1 - r1 r2 e^{-4pw}| < 1e-12");
  const complex<double> r2 = reflection_at(geom.plate2, omega);
  const double Eb = std::exp(-2.0 * p * (2.0 * geom.half_width - geom.z_a));
  return (r1 * Ea + static_cast<double>(sign) * r2 * Eb) / den;
}

GreenSample green_q(double q, const CavityGeometry& geom, double omega,
                    const UnitSystem& units, const quad::QuadratureSpec& spec) {
  require_valid(geom);
  const auto params = kernels::make_params(geom);
  const double q2 = q * q;

  // Integrand rows over p_y >= 0 (the full integrand is even in p_y):
  // 0/1 Re/Im of (q^2/2p)(P+ - R)      -> G_xx
  // 2/3 Re/Im of (p_y^2/2p)(P+ - R)    -> G_yy
  // 4/5 Re/Im of (p/2)(P+ + R)         -> G_zz
  // 6/7 Re/Im of (q/2) P-              -> i-prefactored into G_xz below
  using Row = std::array<double, 8>;
  std::vector<double> pbuf;
  std::vector<double> k[6];
  auto f = [&](std::span<const double> pys, std::span<Row> out) {
    const std::size_t n = pys.size();
    pbuf.resize(n);
    for (auto& v : k) v.resize(n);
    for (std::size_t i = 0; i < n; ++i) pbuf[i] = std::hypot(q, pys[i]);
    kernels::FreqBatch batch{k[0], k[1], k[2], k[3], k[4], k[5]};
    kernels::freq_kernels(params, omega, pbuf, batch);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = pbuf[i];
      const double py2 = pys[i] * pys[i];
      out[i][0] = (q2 / (2.0 * p)) * (k[0][i] - k[4][i]);
      out[i][1] = (q2 / (2.0 * p)) * (k[1][i] - k[5][i]);
      out[i][2] = (py2 / (2.0 * p)) * (k[0][i] - k[4][i]);
      out[i][3] = (py2 / (2.0 * p)) * (k[1][i] - k[5][i]);
      out[i][4] = (p / 2.0) * (k[0][i] + k[4][i]);
      out[i][5] = (p / 2.0) * (k[1][i] + k[5][i]);
      out[i][6] = (q / 2.0) * k[2][i];
      out[i][7] = (q / 2.0) * k[3][i];
    }
  };

  quad::QuadratureSpec s = spec;
  s.decay_scale = 1.0 / (2.0 * zmin_of(geom));
  auto res = quad::integrate_halfline<Row>(f, s);
  // Even integrand: full line = 2 * half line; measure dp_y / (2 pi eps0).
  const double scale = 2.0 / (2.0 * std::numbers::pi * units.eps0);
  Row I = res.value;
  for (auto& v : I) v *= scale;

  GreenSample sample;
  sample.q = q;
  const complex<double> J(I[6], I[7]);  // (q/2) integral of P-
  sample.G(0, 0) = {I[0], I[1]};
  sample.G(1, 1) = {I[2], I[3]};
  sample.G(2, 2) = {I[4], I[5]};
  sample.G(0, 2) = complex<double>(0.0, -1.0) * J;
  sample.G(2, 0) = complex<double>(0.0, 1.0) * J;
  return sample;
}

SigmaSpin sigma_s_decompose(const GreenSample& sample) {
  const Eigen::Matrix3cd G_im =
      (sample.G - sample.G.adjoint()) / complex<double>(0.0, 2.0);
  SigmaSpin out;
  out.sigma = G_im.real();
  // Spin generators (L_i)_{jk} = -i eps_{ijk}; projection uses
  // Tr[L_i^T L_j] = -2 delta_ij, so s_i = -(1/2) Tr[L_i^T (G_im - Sigma)].
  const complex<double> mi(0.0, -1.0);
  Eigen::Matrix3cd L[3];
  for (auto& m : L) m = Eigen::Matrix3cd::Zero();
  L[0](1, 2) = mi;   L[0](2, 1) = -mi;
  L[1](2, 0) = mi;   L[1](0, 2) = -mi;
  L[2](0, 1) = mi;   L[2](1, 0) = -mi;
  const Eigen::Matrix3cd A = G_im - out.sigma.cast<complex<double>>();
  for (int i = 0; i < 3; ++i)
    out.s_perp(i) = -0.5 * (L[i].transpose() * A).trace().real();
  return out;
}

GreenDerivative green_derivative_at0(double q, const CavityGeometry& geom,
                                     const UnitSystem& units,
                                     const quad::QuadratureSpec& spec) {
  require_valid(geom);
  const auto params = kernels::make_params(geom);
  const double q2 = q * q;

  // Rows over p_y >= 0: Sigma'_xx, Sigma'_yy, Sigma'_zz, and the P- part of
  // s'_y (without its -q/2 prefactor).
  using Row = std::array<double, 4>;
  std::vector<double> pbuf;
  std::vector<double> k[3];
  auto f = [&](std::span<const double> pys, std::span<Row> out) {
    const std::size_t n = pys.size();
    pbuf.resize(n);
    for (auto& v : k) v.resize(n);
    for (std::size_t i = 0; i < n; ++i) pbuf[i] = std::hypot(q, pys[i]);
    kernels::DerivBatch batch{k[0], k[1], k[2]};
    kernels::deriv_kernels(params, pbuf, batch);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = pbuf[i];
      const double py2 = pys[i] * pys[i];
      out[i][0] = (q2 / (2.0 * p)) * (k[0][i] - k[2][i]);
      out[i][1] = (py2 / (2.0 * p)) * (k[0][i] - k[2][i]);
      out[i][2] = (p / 2.0) * (k[0][i] + k[2][i]);
      out[i][3] = k[1][i];
    }
  };

  quad::QuadratureSpec s = spec;
  s.decay_scale = 1.0 / (2.0 * zmin_of(geom));
  auto res = quad::integrate_halfline<Row>(f, s);
  const double scale = 2.0 / (2.0 * std::numbers::pi * units.eps0);

  GreenDerivative out;
  out.dsigma(0, 0) = scale * res.value[0];
  out.dsigma(1, 1) = scale * res.value[1];
  out.dsigma(2, 2) = scale * res.value[2];
  out.ds_y = -(q / 2.0) * scale * res.value[3];
  return out;
}

CavityMoments cavity_moments(const CavityGeometry& geom,
                             const quad::QuadratureSpec& spec) {
  require_valid(geom);
  const auto params = kernels::make_params(geom);
  const double d1 = geom.z_a;
  const double d2 = geom.single_plane ? 0.0 : 2.0 * geom.half_width - geom.z_a;
  const double rho1 = params.rho1;
  const double rho2 = params.rho2;

  // 18 simultaneous moments sharing one node set:
  //  0..7  cavity  P2 P4 P6 R2 R4 R6 M3 M5
  //  8..12 plate1  P2 P4 P6 M3 M5   (kernel 2 rho1 e^{-2 p d1})
  // 13..17 plate2  P2 P4 P6 M3 M5   (kernel 2 rho2 e^{-2 p d2})
  using Row = std::array<double, 18>;
  std::vector<double> k[3];
  auto f = [&](std::span<const double> ps, std::span<Row> out) {
    const std::size_t n = ps.size();
    for (auto& v : k) v.resize(n);
    kernels::DerivBatch batch{k[0], k[1], k[2]};
    kernels::deriv_kernels(params, ps, batch);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = ps[i];
      const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p5 = p4 * p,
                   p6 = p4 * p2;
      const double s1 = 2.0 * rho1 * std::exp(-2.0 * p * d1);
      const double s2 = geom.single_plane ? 0.0 : 2.0 * rho2 * std::exp(-2.0 * p * d2);
      out[i] = {p2 * k[0][i], p4 * k[0][i], p6 * k[0][i],
                p2 * k[2][i], p4 * k[2][i], p6 * k[2][i],
                p3 * k[1][i], p5 * k[1][i],
                p2 * s1, p4 * s1, p6 * s1, p3 * s1, p5 * s1,
                p2 * s2, p4 * s2, p6 * s2, p3 * s2, p5 * s2};
    }
  };

  quad::QuadratureSpec s = spec;
  s.decay_scale = 1.0 / (2.0 * zmin_of(geom));
  auto res = quad::integrate_halfline<Row>(f, s);
  const Row& v = res.value;

  CavityMoments m;
  m.P2 = v[0]; m.P4 = v[1]; m.P6 = v[2];
  m.R2 = v[3]; m.R4 = v[4]; m.R6 = v[5];
  m.M3 = v[6]; m.M5 = v[7];
  m.plate1 = PlateMoments{v[8], v[9], v[10], v[11], v[12]};
  m.plate2 = PlateMoments{v[13], v[14], v[15], v[16], v[17]};
  m.error_estimate = res.error_estimate;
  m.evals = res.evals;
  return m;
}

}  // namespace qfric
