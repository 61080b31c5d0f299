// Acceptance gate for the drag solver: every primary correctness criterion,
// exercised end to end at its stated tolerance, with one [PASS]/[FAIL] line
// per criterion. Run all criteria (no arguments) or one:
//
//   qfric_acceptance [--criterion N]      N in 1..8
//
// Exit status is 0 only if every criterion that was run passed. Criteria 4
// and 6 are known, quantified shortfalls of the coarse target bands rather
// than defects of the solver; they fail honestly and print the analysis.

#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qfric/forces.hpp"
#include "qfric/greens.hpp"
#include "qfric/spectrum.hpp"
#include "qfric/units.hpp"

using namespace qfric;

namespace {

constexpr double pi = std::numbers::pi;
const UnitSystem kUnits;

double rel_dev(double computed, double expected) {
  return std::abs(computed / expected - 1.0);
}

void line(int n, bool pass, const char* name, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, name,
              detail.c_str());
}

void note(const char* text) { std::printf("    note: %s\n", text); }

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

CavityGeometry symmetric_cavity(double w, double z_a) {
  CavityGeometry g;
  g.half_width = w;
  g.z_a = z_a;
  g.plate1 = ReflectionModel{1.0, 1.0, false};
  g.plate2 = g.plate1;
  return g;
}

CavityGeometry plane(double z_a, double rho) {
  CavityGeometry g;
  g.single_plane = true;
  g.z_a = z_a;
  g.plate1 = ReflectionModel{1.0, rho, false};
  return g;
}

ParticleModel particle_iso() {
  ParticleModel p;
  p.dissipation = InternalDissipationModel{1.0, 1.0, 1.0};
  return p;
}

const MotionSpec kMotion{1.0};

// --------------------------------------------------------------------------
// 1. Internal-dissipation channel: at the center of a symmetric cavity the
//    nonadditive enhancement is exactly pi^6/960 = 1.00144708 (tol 1e-4),
//    and across z_a/w in [0.2, 1.8] it stays inside (1, center].
// --------------------------------------------------------------------------
bool criterion1() {
  const double expected = std::pow(pi, 6) / 960.0;
  const double w = 0.5;
  const ParticleModel part = particle_iso();

  const ForceReport center =
      force_cavity(symmetric_cavity(w, w), part, kMotion, kUnits);
  const double dev = rel_dev(center.eta_int, expected);
  const bool center_ok = dev <= 1e-4;

  bool bound_ok = true;
  double min_excess = 1e300, max_eta = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double u = 0.2 + 1.6 * k / 19.0;
    const ForceReport r =
        force_cavity(symmetric_cavity(w, u * w), part, kMotion, kUnits);
    min_excess = std::min(min_excess, r.eta_int - 1.0);
    max_eta = std::max(max_eta, r.eta_int);
    bound_ok = bound_ok && r.eta_int > 1.0 &&
               r.eta_int <= center.eta_int + 1e-6;
  }

  const bool pass = center_ok && bound_ok;
  line(1, pass,
       "midgap eta_int equals pi^6/960 and the profile stays in (1, center]",
       fmt("center=%.10f expected=%.10f rel_dev=%.2e tol=1e-04; over "
           "z_a/w in [0.2,1.8]: min(eta-1)=%.2e max(eta)=%.10f %s",
           center.eta_int, expected, dev, min_excess, max_eta,
           bound_ok ? "within (1, center]" : "BOUND VIOLATED"));
  return pass;
}

// --------------------------------------------------------------------------
// 2. Field channel: midgap eta_rad = (13249/56700)(pi/2)^8 = 8.6608 within
//    1%, and across [0.2, 1.8] the profile stays in (1-1e-4, center+1e-4].
// --------------------------------------------------------------------------
bool criterion2() {
  const double expected = (13249.0 / 56700.0) * std::pow(pi / 2.0, 8);
  const double w = 0.5;
  const ParticleModel part = particle_iso();

  const ForceReport center =
      force_cavity(symmetric_cavity(w, w), part, kMotion, kUnits);
  const double dev = rel_dev(center.eta_rad, expected);
  const bool center_ok = dev <= 1e-2;

  bool bound_ok = true;
  double min_eta = 1e300, max_eta = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double u = 0.2 + 1.6 * k / 19.0;
    const ForceReport r =
        force_cavity(symmetric_cavity(w, u * w), part, kMotion, kUnits);
    min_eta = std::min(min_eta, r.eta_rad);
    max_eta = std::max(max_eta, r.eta_rad);
    bound_ok = bound_ok && r.eta_rad > 1.0 - 1e-4 &&
               r.eta_rad <= center.eta_rad + 1e-4;
  }

  const bool pass = center_ok && bound_ok;
  line(2, pass,
       "midgap eta_rad equals (13249/56700)(pi/2)^8 and the profile is "
       "bounded by it",
       fmt("center=%.8f expected=%.8f rel_dev=%.2e tol=1e-02; profile range "
           "[%.6f, %.6f] %s",
           center.eta_rad, expected, dev, min_eta, max_eta,
           bound_ok ? "within bounds" : "BOUND VIOLATED"));
  return pass;
}

// --------------------------------------------------------------------------
// 3. A particle centered between two plates at distance w from each feels
//    2 * eta_rad(center) = 17.32 times the single-plate field drag at the
//    same distance (tol 2%).
// --------------------------------------------------------------------------
bool criterion3() {
  const double expected = 2.0 * (13249.0 / 56700.0) * std::pow(pi / 2.0, 8);
  const double w = 0.5;
  const ParticleModel part = particle_iso();
  const ForceReport cav =
      force_cavity(symmetric_cavity(w, w), part, kMotion, kUnits);
  const double single =
      force_rad_plane_closed(w, 1.0, part, kMotion, kUnits);
  const double ratio = cav.f_rad / single;
  const double dev = rel_dev(ratio, expected);
  const bool pass = dev <= 2e-2;
  line(3, pass, "center-cavity f_rad is 2 eta_rad times the one-plate value",
       fmt("ratio=%.6f expected=%.6f rel_dev=%.2e tol=2e-02", ratio, expected,
           dev));
  return pass;
}

// --------------------------------------------------------------------------
// 4. The eta_rad(z_a/w) profile vs the empirical two-parameter Lorentzian
//    1 + Lambda^2/((1-u)^2 + Gamma^2), Lambda=0.42, Gamma=0.15: required
//    agreement 10% for |1-u| <= 0.5 and 20% out to |1-u| <= 0.9.
//
//    KNOWN SHORTFALL: the computed profile has a broader mid-gap shoulder
//    than any Lorentzian of this width; the deviation peaks near |1-u| ~
//    0.6 at ~22%. The numbers below quantify it point by point.
// --------------------------------------------------------------------------
bool criterion4() {
  const CavityGeometry g = symmetric_cavity(0.5, 0.5);
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-7;
  const NonadditivityCurve curve =
      eta_curve(g, particle_iso(), kMotion, kUnits, 19, 0.1, 1.9, spec);

  bool pass = true;
  double worst = 0.0, worst_u = 0.0;
  std::vector<std::string> rows;
  for (const auto& p : curve.points) {
    const double u = p.z_a_over_w;
    const double d = std::abs(1.0 - u);
    const double lor = curve.lorentz(u);
    const double dev = std::abs(p.eta / lor - 1.0);
    const double limit = d <= 0.5 + 1e-12 ? 0.10 : 0.20;
    const bool in_scope = d <= 0.9 + 1e-12;
    const bool ok = !in_scope || dev <= limit;
    pass = pass && ok;
    if (in_scope && dev > worst) {
      worst = dev;
      worst_u = u;
    }
    rows.push_back(fmt("u=%.2f |1-u|=%.2f eta=%.4f lorentz=%.4f dev=%5.1f%% "
                       "limit=%.0f%% %s",
                       u, d, p.eta, lor, 100.0 * dev, 100.0 * limit,
                       ok ? "ok" : "EXCEEDED"));
  }

  line(4, pass, "eta_rad profile tracks the empirical Lorentzian",
       fmt("worst deviation %.1f%% at u=%.2f against limits 10%% "
           "(|1-u|<=0.5) / 20%% (|1-u|<=0.9)",
           100.0 * worst, worst_u));
  for (const auto& r : rows) std::printf("    %s\n", r.c_str());
  if (!pass) {
    note("the Lorentzian (Lambda=0.42, Gamma=0.15) is an empirical summary "
         "of the curve, fitted to the peak;");
    note("it matches the computed profile at the center (dev ~2%) and in "
         "the wings (|1-u| >= 0.8),");
    note("but the true profile has a broader mid-gap shoulder, so the "
         "deviation peaks at ~22% near |1-u| = 0.6.");
    note("The computed eta_rad itself is validated independently of this "
         "profile shape: at the center against");
    note("the closed-form constant (criterion 2) and in the far-plate "
         "additive limit (criterion 8).");
  }
  return pass;
}

// --------------------------------------------------------------------------
// 5. The general q-integral route (analytic frequency-derivative kernels
//    integrated directly) reproduces the single-plane closed forms for both
//    channels to 1e-5 over z_a in {0.5, 1, 2} x rho in {0.1, 1} with an
//    anisotropic internal-dissipation tensor.
// --------------------------------------------------------------------------
bool criterion5() {
  ParticleModel part;
  part.dissipation = InternalDissipationModel{0.9, 1.2, 0.5};

  bool pass = true;
  double worst = 0.0;
  std::vector<std::string> rows;
  for (double z_a : {0.5, 1.0, 2.0}) {
    for (double rho : {0.1, 1.0}) {
      const CavityGeometry g = plane(z_a, rho);
      quad::QuadratureSpec spec;
      spec.rel_tol = 1e-7;
      spec.decay_scale = 1.0 / (2.0 * z_a);
      const KernelProvider kp = cavity_kernel_provider(g, kUnits);
      const double fi =
          force_int_general(kp, part.dissipation, kMotion, part, kUnits, spec);
      const RadForce fr = force_rad_general(kp, kMotion, part, kUnits, spec);
      const double ci = force_int_plane_closed(z_a, rho, part, kMotion, kUnits);
      const double cr = force_rad_plane_closed(z_a, rho, part, kMotion, kUnits);
      const double di = rel_dev(fi, ci);
      const double dr = rel_dev(fr.total, cr);
      worst = std::max({worst, di, dr});
      const bool ok = di <= 1e-5 && dr <= 1e-5;
      pass = pass && ok;
      rows.push_back(fmt("z_a=%.1f rho=%.1f: f_int dev=%.2e f_rad dev=%.2e %s",
                         z_a, rho, di, dr, ok ? "ok" : "EXCEEDED"));
    }
  }
  line(5, pass,
       "general-route forces reproduce the single-plane closed forms",
       fmt("worst rel dev %.2e tol=1e-05 across 6 (z_a, rho) combinations",
           worst));
  for (const auto& r : rows) std::printf("    %s\n", r.c_str());
  return pass;
}

// --------------------------------------------------------------------------
// 6. Anisotropic internal dissipation at the cavity center: in-plane
//    damping (mu = diag(1,1,0)) should suppress eta_int to ~0.98 and
//    perpendicular damping (mu = diag(0,0,1)) should enhance it to ~1.02,
//    both bands +-0.5 percentage points.
//
//    KNOWN SHORTFALL: the exact in-plane constant is 31 pi^6/30240 =
//    0.9855511, a 1.445% suppression; the band [0.975, 0.985] asks for at
//    least 1.5%, which the true value cannot meet. The perpendicular
//    constant pi^6/945 = 1.0173431 passes its band.
// --------------------------------------------------------------------------
bool criterion6() {
  const CavityGeometry g = symmetric_cavity(0.5, 0.5);
  const auto [inplane, perp] = anisotropy_shift(g, kMotion, kUnits);
  const bool in_ok = inplane >= 0.975 && inplane <= 0.985;
  const bool perp_ok = perp >= 1.015 && perp <= 1.025;
  const bool pass = in_ok && perp_ok;
  line(6, pass,
       "anisotropic dissipation shifts midgap eta_int to ~0.98 / ~1.02",
       fmt("in-plane=%.7f band [0.975,0.985] %s; perpendicular=%.7f band "
           "[1.015,1.025] %s",
           inplane, in_ok ? "inside" : "OUTSIDE", perp,
           perp_ok ? "inside" : "OUTSIDE"));
  if (!pass) {
    note(fmt("the computed in-plane value matches the exact constant "
             "31 pi^6/30240 = %.10f to %.1e,",
             31.0 * std::pow(pi, 6) / 30240.0,
             rel_dev(inplane, 31.0 * std::pow(pi, 6) / 30240.0))
             .c_str());
    note("i.e. a 1.445% suppression; the target band encodes 'about 2%' as "
         "[0.975, 0.985] (at least 1.5%),");
    note("which is tighter than the true constant allows, so this half of "
         "the check cannot pass.");
    note(fmt("the perpendicular value matches pi^6/945 = %.10f and passes "
             "its band.",
             std::pow(pi, 6) / 945.0)
             .c_str());
  }
  return pass;
}

// --------------------------------------------------------------------------
// 7. For a single Ohmic plane the field drag splits into a Sigma part and a
//    spin part with sigma_term/total = 63/18 = 3.5 (band [3.2, 3.8]).
// --------------------------------------------------------------------------
bool criterion7() {
  const ForceReport r =
      force_cavity(plane(0.5, 1.0), particle_iso(), kMotion, kUnits);
  const double phi = r.rad_sigma_term / r.f_rad;
  const bool pass = phi >= 3.2 && phi <= 3.8;
  line(7, pass,
       "single-plane f_rad splits 3.5 : -2.5 between Sigma and spin parts",
       fmt("sigma_term/total=%.6f band [3.2, 3.8]; spin term opposes drag: "
           "%.6f > 0 %s",
           phi, r.rad_spin_term, r.rad_spin_term > 0.0 ? "yes" : "NO"));
  return pass && r.rad_spin_term > 0.0;
}

// --------------------------------------------------------------------------
// 8. Structural property suite; every sub-check must pass.
// --------------------------------------------------------------------------
bool criterion8() {
  const ParticleModel part = particle_iso();
  bool pass = true;
  auto sub = [&pass](bool ok, const std::string& text) {
    std::printf("    [%s] %s\n", ok ? "ok" : "BAD", text.c_str());
    pass = pass && ok;
  };

  // v^3 scaling of both channels.
  {
    const CavityGeometry g = plane(0.5, 1.0);
    const ForceReport a = force_cavity(g, part, MotionSpec{1.0}, kUnits);
    const ForceReport b = force_cavity(g, part, MotionSpec{2.0}, kUnits);
    const double ri = b.f_int / a.f_int, rr = b.f_rad / a.f_rad;
    sub(std::abs(ri - 8.0) <= 1e-12 && std::abs(rr - 8.0) <= 1e-12,
        fmt("v^3 scaling: F(2v)/F(v) = %.14f (int), %.14f (rad); expected 8 "
            "tol 1e-12",
            ri, rr));
  }

  // Mirror symmetry of an asymmetric cavity under z_a -> 2w - z_a with the
  // plates swapped.
  {
    CavityGeometry g;
    g.half_width = 0.55;
    g.z_a = 0.7;
    g.plate1 = ReflectionModel{0.8, 1.3, false};
    g.plate2 = ReflectionModel{0.6, 0.4, false};
    CavityGeometry m = g;
    m.z_a = 2.0 * g.half_width - g.z_a;
    std::swap(m.plate1, m.plate2);
    const ForceReport a = force_cavity(g, part, kMotion, kUnits);
    const ForceReport b = force_cavity(m, part, kMotion, kUnits);
    const double dev = std::max(rel_dev(b.f_int, a.f_int),
                                rel_dev(b.f_rad, a.f_rad));
    sub(dev <= 1e-8, fmt("mirror symmetry: worst rel dev %.2e tol 1e-8", dev));

    // q-parity of the kernels: Sigma even, s_y odd.
    double worst = 0.0;
    for (double q : {0.7, 1.3}) {
      const GreenSample gp = green_q(q, g, 0.3, kUnits);
      const GreenSample gm = green_q(-q, g, 0.3, kUnits);
      const SigmaSpin dp = sigma_s_decompose(gp);
      const SigmaSpin dm = sigma_s_decompose(gm);
      const double scale = 1.0 + dp.sigma.cwiseAbs().maxCoeff();
      worst = std::max(worst,
                       (dp.sigma - dm.sigma).cwiseAbs().maxCoeff() / scale);
      worst = std::max(worst, std::abs(dp.s_perp(1) + dm.s_perp(1)) / scale);
    }
    sub(worst <= 1e-8,
        fmt("kernel parity (Sigma even, s_y odd): worst %.2e tol 1e-8",
            worst));

    // Sigma positive semidefinite at positive frequency.
    double most_neg = 0.0;
    for (double q : {0.5, 1.1}) {
      for (double w : {0.2, 0.45}) {
        const SigmaSpin d = sigma_s_decompose(green_q(q, g, w, kUnits));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(d.sigma);
        const double norm = std::max(1e-300, d.sigma.cwiseAbs().maxCoeff());
        most_neg = std::max(most_neg, -es.eigenvalues().minCoeff() / norm);
      }
    }
    sub(most_neg <= 1e-12,
        fmt("Sigma PSD: most negative eigenvalue %.2e (relative) tol 1e-12",
            most_neg));
  }

  // Isotropic dissipation removes the cavity R-moment from f_int.
  {
    const CavityGeometry g = symmetric_cavity(0.5, 0.7);
    const ForceReport r = force_cavity(g, part, kMotion, kUnits);
    const CavityMoments m = cavity_moments(g);
    const double pref = kUnits.hbar * part.alpha0 / (48.0 * pi * pi * pi);
    const double a_plus = (pi / 8.0) * (5.0 + 1.0 + 6.0);
    const double manual = -pref * a_plus * m.P6;
    sub(rel_dev(r.f_int, manual) <= 1e-12 && m.R6 != 0.0,
        fmt("isotropic R-cancellation: f_int dev from -pref A+ P6 is %.2e "
            "(R6=%.3e nonzero) tol 1e-12",
            rel_dev(r.f_int, manual), m.R6));

    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    spec.decay_scale = 1.0 / (2.0 * 0.3);  // z_min = 2w - z_a = 0.3
    const double fi = force_int_general(cavity_kernel_provider(g, kUnits),
                                        part.dissipation, kMotion, part,
                                        kUnits, spec);
    sub(rel_dev(fi, r.f_int) <= 1e-6,
        fmt("general q-route agrees with the radial route: rel dev %.2e tol "
            "1e-6",
            rel_dev(fi, r.f_int)));
  }

  // Spin-channel factorization on an analytic odd kernel.
  {
    const auto [lhs, rhs] =
        spin_factorization_check([](double q) { return q * std::exp(-std::abs(q)); });
    sub(rel_dev(lhs, rhs) <= 1e-8 && rel_dev(rhs, 768.0) <= 1e-10,
        fmt("spin factorization: lhs=%.10f rhs=%.10f (exact 768) rel dev "
            "%.2e tol 1e-8",
            lhs, rhs, rel_dev(lhs, rhs)));
  }

  // Far-plate additive limit: at w = 100 z_a both eta factors -> 1.
  {
    const ForceReport r =
        force_cavity(symmetric_cavity(50.0, 0.5), part, kMotion, kUnits);
    const double di = std::abs(r.eta_int - 1.0);
    const double dr = std::abs(r.eta_rad - 1.0);
    sub(di <= 1e-3 && dr <= 1e-3,
        fmt("additive limit (w = 100 z_a): |eta_int-1|=%.2e |eta_rad-1|=%.2e "
            "tol 1e-3",
            di, dr));
  }

  // A perfectly reflecting far plate strictly enhances the drag.
  {
    const ForceReport single =
        force_cavity(plane(0.5, 1.0), part, kMotion, kUnits);
    CavityGeometry g = plane(0.5, 1.0);
    g.single_plane = false;
    g.half_width = 0.5;
    g.plate2 = ReflectionModel{1.0, 0.0, true};
    const ForceReport cav = force_cavity(g, part, kMotion, kUnits);
    sub(cav.f_int < single.f_int && single.f_int < 0.0,
        fmt("perfect-conductor far plate enhances: f_int %.8f -> %.8f",
            single.f_int, cav.f_int));
  }

  // The full force functional reduces to the leading v^3 coefficient.
  {
    const CavityGeometry g = plane(0.5, 1.0);
    const MotionSpec slow{0.05};
    const ForceReport lead = force_cavity(g, part, slow, kUnits);
    FullForceOptions opt;
    opt.rel_tol = 1e-4;
    opt.cheb_nodes = 33;
    const double full = force_full(g, part, slow, kUnits, opt);
    const double coeff_full = full / (slow.v * slow.v * slow.v);
    const double coeff_lead =
        (lead.f_int + lead.f_rad) / (slow.v * slow.v * slow.v);
    const double dev = rel_dev(coeff_full, coeff_lead);
    sub(dev <= 0.10,
        fmt("force functional / v^3 = %.6f vs leading coefficient %.6f, rel "
            "dev %.2e tol 0.10",
            coeff_full, coeff_lead, dev));
  }

  line(8, pass, "structural property suite",
       pass ? std::string("all sub-checks passed")
            : std::string("at least one sub-check failed; see lines above"));
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > 8) {
        std::fprintf(stderr, "criterion must be 1..8, got '%s'\n", argv[i]);
        return 2;
      }
      which.push_back(n);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};

  bool (*const table[8])() = {criterion1, criterion2, criterion3, criterion4,
                              criterion5, criterion6, criterion7, criterion8};
  int passed = 0, failed = 0;
  for (int n : which) {
    if (table[n - 1]()) {
      ++passed;
    } else {
      ++failed;
    }
  }
  if (which.size() > 1)
    std::printf("%d/%zu criteria passed\n", passed, which.size());
  return failed == 0 ? 0 : 1;
}
