#include "qfric/spectrum.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

namespace qfric {
namespace {

constexpr double pi = std::numbers::pi;
using std::complex;

double zmin_of(const CavityGeometry& geom) {
  return geom.single_plane ? geom.z_a
                           : std::min(geom.z_a, 2.0 * geom.half_width - geom.z_a);
}

// {Sigma_xx, Sigma_yy, Sigma_zz, s_y} of G_Im at (q, omega).
std::array<double, 4> sigma_spin4(double q, const CavityGeometry& geom,
                                  double omega, const UnitSystem& units,
                                  const quad::QuadratureSpec& spec) {
  const SigmaSpin dec = sigma_s_decompose(green_q(q, geom, omega, units, spec));
  return {dec.sigma(0, 0), dec.sigma(1, 1), dec.sigma(2, 2), dec.s_perp(1)};
}

// Field part of D: H(Omega) = int dq/2pi theta(Omega + q v) G_Im(q, Omega + q v)
// decomposed as {H_xx, H_yy, H_zz, h_s}. For v > 0 the theta window is
// q > -Omega/v; the integrand decays like exp(-|q| / q_scale) with
// q_scale = 1/(2 z_min), so the window is truncated after q_cap_folds folds.
std::array<double, 4> field_kernel(double Omega, double v,
                                   const CavityGeometry& geom,
                                   const UnitSystem& units,
                                   const quad::QuadratureSpec& spec,
                                   double q_cap_folds) {
  const double q_scale = 1.0 / (2.0 * zmin_of(geom));
  quad::QuadratureSpec gspec = spec;
  gspec.rel_tol = std::max(spec.rel_tol * 0.1, 1e-11);

  if (v == 0.0) {
    if (Omega <= 0.0) return {0.0, 0.0, 0.0, 0.0};
    auto f = [&](std::span<const double> qs, std::span<std::array<double, 4>> out) {
      for (std::size_t i = 0; i < qs.size(); ++i)
        out[i] = sigma_spin4(qs[i], geom, Omega, units, gspec);
    };
    quad::QuadratureSpec s = spec;
    s.decay_scale = q_scale;
    auto res = quad::integrate_fullline<std::array<double, 4>>(f, s);
    for (auto& x : res.value) x /= 2.0 * pi;
    return res.value;
  }

  const double lo = -Omega / v;
  const double hi = std::max(lo, 0.0) + q_cap_folds * q_scale;
  std::vector<double> breaks{0.0};
  for (double s = 1.0; s <= 32.0; s *= 2.0) {
    breaks.push_back(s * q_scale);
    breaks.push_back(-s * q_scale);
  }
  auto f = [&](std::span<const double> qs, std::span<std::array<double, 4>> out) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double w_arg = Omega + qs[i] * v;
      if (w_arg <= 0.0) {
        out[i] = {0.0, 0.0, 0.0, 0.0};
        continue;
      }
      out[i] = sigma_spin4(qs[i], geom, w_arg, units, gspec);
    }
  };
  auto res = quad::integrate_interval<std::array<double, 4>>(f, lo, hi, spec,
                                                             breaks);
  for (auto& x : res.value) x /= 2.0 * pi;
  return res.value;
}

}  // namespace

ChebyshevInterpolant::ChebyshevInterpolant(double a, double b,
                                           std::vector<double> values)
    : a_(a), b_(b), values_(std::move(values)) {
  if (values_.size() < 2)
    throw std::invalid_argument("ChebyshevInterpolant: need >= 2 nodes");
  if (!(a_ < b_))
    throw std::invalid_argument("ChebyshevInterpolant: empty interval");
}

std::vector<double> ChebyshevInterpolant::nodes(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("ChebyshevInterpolant: n must be >= 2");
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j)
    xs[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(pi * j / (n - 1));
  return xs;
}

double ChebyshevInterpolant::operator()(double x) const {
  const int n = static_cast<int>(values_.size());
  // Barycentric form on Lobatto nodes: weights (-1)^j, halved at the ends.
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double xj = 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * std::cos(pi * j / (n - 1));
    const double dx = x - xj;
    if (dx == 0.0) return values_[j];
    double wj = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n - 1) wj *= 0.5;
    num += wj / dx * values_[j];
    den += wj / dx;
  }
  return num / den;
}

DissipationKernel dissipation_kernel(double omega, double v,
                                     const CavityGeometry& geom,
                                     const ParticleModel& particle,
                                     const UnitSystem& units,
                                     DissipationChannels channels,
                                     const quad::QuadratureSpec& spec) {
  require_valid(geom);
  require_valid(particle);
  if (v < 0.0)
    throw std::invalid_argument("dissipation_kernel: v must be >= 0");

  DissipationKernel out;
  out.omega = omega;
  out.v = v;
  if (channels.bath && omega > 0.0) {
    const Eigen::Matrix3cd mu = mu_tensor(particle.dissipation, omega);
    out.D += (omega * UnitSystem::eps0 / particle.alpha0) * mu.real().cast<complex<double>>();
  }
  if (channels.field) {
    const auto h = field_kernel(omega, v, geom, units, spec, 45.0);
    out.D(0, 0) += h[0];
    out.D(1, 1) += h[1];
    out.D(2, 2) += h[2];
    out.D(0, 2) += complex<double>(0.0, h[3]);
    out.D(2, 0) += complex<double>(0.0, -h[3]);
  }
  return out;
}

Eigen::Matrix3cd field_response(double omega, double v,
                                const CavityGeometry& geom,
                                const UnitSystem& units,
                                const quad::QuadratureSpec& spec) {
  require_valid(geom);
  quad::QuadratureSpec gspec = spec;
  gspec.rel_tol = std::max(spec.rel_tol * 0.1, 1e-11);

  using Row = std::array<double, 8>;
  auto f = [&](std::span<const double> qs, std::span<Row> out) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const GreenSample g =
          green_q(qs[i], geom, omega + qs[i] * v, units, gspec);
      out[i] = {g.G(0, 0).real(), g.G(0, 0).imag(), g.G(1, 1).real(),
                g.G(1, 1).imag(), g.G(2, 2).real(), g.G(2, 2).imag(),
                g.G(0, 2).real(), g.G(0, 2).imag()};
    }
  };
  quad::QuadratureSpec s = spec;
  s.decay_scale = 1.0 / (2.0 * zmin_of(geom));
  auto res = quad::integrate_fullline<Row>(f, s);
  const Row& r = res.value;

  Eigen::Matrix3cd G = Eigen::Matrix3cd::Zero();
  G(0, 0) = complex<double>(r[0], r[1]) / (2.0 * pi);
  G(1, 1) = complex<double>(r[2], r[3]) / (2.0 * pi);
  G(2, 2) = complex<double>(r[4], r[5]) / (2.0 * pi);
  G(0, 2) = complex<double>(r[6], r[7]) / (2.0 * pi);
  G(2, 0) = -G(0, 2);
  return G;
}

Eigen::Matrix3cd dressed_alpha(double omega, double v,
                               const CavityGeometry& geom,
                               const ParticleModel& particle,
                               const UnitSystem& units,
                               const quad::QuadratureSpec& spec) {
  require_valid(particle);
  const Eigen::Matrix3cd am = alpha_mu(particle, omega);
  const Eigen::Matrix3cd gamma = field_response(omega, v, geom, units, spec);
  const Eigen::Matrix3cd bracket = Eigen::Matrix3cd::Identity() - gamma * am;
  // Singular values through the eigenvalues of B^dagger B (ascending).
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(
      bracket.adjoint() * bracket);
  const double smax = std::sqrt(std::max(eig.eigenvalues()(2), 0.0));
  const double smin = std::sqrt(std::max(eig.eigenvalues()(0), 0.0));
  if (!(smin > 1e-12 * smax)) {
    std::ostringstream msg;
    msg << "dressed_alpha: singular dressing bracket 1 - Gamma alpha_mu at "
           "omega="
        << omega << " (condition number "
        << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity())
        << ")";
    throw std::runtime_error(msg.str());
  }
  return am * bracket.inverse();
}

PowerSpectrum power_spectrum(double omega, double v, const CavityGeometry& geom,
                             const ParticleModel& particle,
                             const UnitSystem& units,
                             const quad::QuadratureSpec& spec) {
  const DissipationKernel dk =
      dissipation_kernel(omega, v, geom, particle, units, {}, spec);
  const Eigen::Matrix3cd a = dressed_alpha(omega, v, geom, particle, units, spec);
  PowerSpectrum out;
  out.omega = omega;
  out.v = v;
  out.S = (UnitSystem::hbar / pi) * a * dk.D * a.adjoint();
  return out;
}

Eigen::Matrix3d langevin_spectrum(double omega, const ParticleModel& particle,
                                  const UnitSystem& /*units*/) {
  require_valid(particle);
  if (omega <= 0.0) return Eigen::Matrix3d::Zero();
  const Eigen::Matrix3d mu =
      mu_tensor(particle.dissipation, omega).real();
  return (4.0 * pi * UnitSystem::hbar * UnitSystem::eps0 * omega /
          particle.alpha0) *
         mu;
}

double force_full(const CavityGeometry& geom, const ParticleModel& particle,
                  const MotionSpec& motion, const UnitSystem& units,
                  const FullForceOptions& opt) {
  require_valid(geom);
  require_valid(particle);
  require_valid(motion);
  const double v = motion.v;
  const double zmin = zmin_of(geom);
  if (v > 2.0 * zmin * particle.omega_a)
    std::cerr << "force_full: warning: v = " << v
              << " exceeds the kernel decay scale times omega_a ("
              << 2.0 * zmin * particle.omega_a
              << "); the low-frequency expansion is unreliable here\n";

  const double q_scale = 1.0 / (2.0 * zmin);
  const double q_cap = opt.q_cap_folds * q_scale;
  const double omega_cut = opt.omega_cut_folds * v * q_scale;
  const double O_lo = -omega_cut;
  const double O_hi = v * q_cap;

  quad::QuadratureSpec hspec;
  hspec.rel_tol = std::max(opt.rel_tol * 0.05, 1e-9);
  hspec.decay_scale = q_scale;

  // Frequency profile of the field channel, cached on Chebyshev nodes over
  // the window [-omega_cut, v q_cap] that the arguments q v - omega and
  // -q v - omega can reach with non-negligible weight; clamped to zero
  // below the window (the kernel there is smaller than e^-omega_cut_folds).
  const auto xs = ChebyshevInterpolant::nodes(O_lo, O_hi, opt.cheb_nodes);
  const int n = static_cast<int>(xs.size());
  std::array<std::vector<double>, 4> hvals;
  for (auto& vv : hvals) vv.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto h = field_kernel(xs[j], v, geom, units, hspec, opt.q_cap_folds);
    for (int c = 0; c < 4; ++c) hvals[c][j] = h[c];
  }
  const std::array<ChebyshevInterpolant, 4> H = {
      ChebyshevInterpolant(O_lo, O_hi, hvals[0]),
      ChebyshevInterpolant(O_lo, O_hi, hvals[1]),
      ChebyshevInterpolant(O_lo, O_hi, hvals[2]),
      ChebyshevInterpolant(O_lo, O_hi, hvals[3])};
  auto h_at = [&](double W, int c) -> double {
    if (W < O_lo) return 0.0;
    return H[c](std::min(W, O_hi));
  };

  // Dressed-spectrum path: cache Gamma(Omega) over the same window.
  std::vector<ChebyshevInterpolant> Gvals;
  if (opt.full_spectrum) {
    std::array<std::vector<double>, 8> gv;
    for (auto& vv : gv) vv.resize(n);
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix3cd g = field_response(xs[j], v, geom, units, hspec);
      gv[0][j] = g(0, 0).real();
      gv[1][j] = g(0, 0).imag();
      gv[2][j] = g(1, 1).real();
      gv[3][j] = g(1, 1).imag();
      gv[4][j] = g(2, 2).real();
      gv[5][j] = g(2, 2).imag();
      gv[6][j] = g(0, 2).real();
      gv[7][j] = g(0, 2).imag();
    }
    Gvals.reserve(8);
    for (int c = 0; c < 8; ++c)
      Gvals.emplace_back(O_lo, O_hi, gv[c]);
  }

  const auto& mu = particle.dissipation;
  const std::array<double, 3> mu_diag = {mu.mu_xx, mu.mu_yy, mu.mu_zz};
  auto bath_at = [&](double W, int a) -> double {
    return W > 0.0 ? W * UnitSystem::eps0 * mu_diag[a] / particle.alpha0 : 0.0;
  };

  // Hermitian D(Omega): real diagonal plus i h_s in the (x,z) block.
  auto d_matrix = [&](double W) -> Eigen::Matrix3cd {
    Eigen::Matrix3cd D = Eigen::Matrix3cd::Zero();
    for (int a = 0; a < 3; ++a) D(a, a) = bath_at(W, a) + h_at(W, a);
    const double hs = h_at(W, 3);
    D(0, 2) = complex<double>(0.0, hs);
    D(2, 0) = complex<double>(0.0, -hs);
    return D;
  };
  auto s_matrix = [&](double W) -> Eigen::Matrix3cd {
    const double Wc = std::min(std::max(W, O_lo), O_hi);
    Eigen::Matrix3cd gamma = Eigen::Matrix3cd::Zero();
    gamma(0, 0) = complex<double>(Gvals[0](Wc), Gvals[1](Wc));
    gamma(1, 1) = complex<double>(Gvals[2](Wc), Gvals[3](Wc));
    gamma(2, 2) = complex<double>(Gvals[4](Wc), Gvals[5](Wc));
    gamma(0, 2) = complex<double>(Gvals[6](Wc), Gvals[7](Wc));
    gamma(2, 0) = -gamma(0, 2);
    const Eigen::Matrix3cd am = alpha_mu(particle, W);
    const Eigen::Matrix3cd a =
        am * (Eigen::Matrix3cd::Identity() - gamma * am).inverse();
    return (UnitSystem::hbar / pi) * a * d_matrix(W) * a.adjoint();
  };

  quad::QuadratureSpec gspec;
  gspec.rel_tol = std::max(opt.rel_tol * 0.05, 1e-9);

  quad::QuadratureSpec inner_spec;
  inner_spec.rel_tol = opt.rel_tol * 0.2;

  auto inner = [&](double omega) -> double {
    auto fq = [&](std::span<const double> qs, std::span<double> out) {
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const double q = qs[i];
        const auto sig = sigma_spin4(q, geom, omega, units, gspec);
        const double Wp = q * v - omega;
        const double Wm = -q * v - omega;
        double val = 0.0;
        if (!opt.full_spectrum) {
          for (int a = 0; a < 3; ++a)
            val += (bath_at(Wp, a) + h_at(Wp, a) - h_at(Wm, a)) * sig[a];
          val -= 2.0 * (h_at(Wp, 3) + h_at(Wm, 3)) * sig[3];
        } else {
          const Eigen::Matrix3cd Sp = s_matrix(Wp);
          const Eigen::Matrix3cd Sm =
              Wm < O_lo ? Eigen::Matrix3cd::Zero() : s_matrix(Wm);
          for (int a = 0; a < 3; ++a)
            val += (Sp(a, a).real() - Sm(a, a).real()) * sig[a];
          val -= 2.0 * (Sp(0, 2).imag() + Sm(0, 2).imag()) * sig[3];
        }
        out[i] = q * val;
      }
    };
    const std::vector<double> breaks = {omega / v, (omega - omega_cut) / v,
                                        (omega_cut - omega) / v};
    return quad::integrate_interval<double>(fq, 0.0, q_cap, inner_spec, breaks)
        .value;
  };

  auto fo = [&](std::span<const double> ws, std::span<double> out) {
    for (std::size_t i = 0; i < ws.size(); ++i) out[i] = inner(ws[i]);
  };
  quad::QuadratureSpec outer_spec;
  outer_spec.rel_tol = opt.rel_tol;
  const double omega_max = O_hi + omega_cut;
  const auto res = quad::integrate_interval<double>(
      fo, 0.0, omega_max, outer_spec, {omega_cut, O_hi});

  if (!opt.full_spectrum)
    return -(UnitSystem::hbar * particle.alpha0 * particle.alpha0 / (pi * pi)) *
           res.value;
  return -res.value / pi;
}

}  // namespace qfric
