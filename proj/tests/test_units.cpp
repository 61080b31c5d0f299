#include <cmath>
#include <complex>

#include <doctest.h>

#include "qfric/units.hpp"

using namespace qfric;
using doctest::Approx;

TEST_SUITE("units") {

TEST_CASE("ohmic reflection is linear in frequency") {
  ReflectionModel m{0.8, 1.3, false};
  const auto r = reflection_at(m, 0.37);
  CHECK(r.real() == 0.8);
  CHECK(r.imag() == Approx(2.0 * 1.3 * 0.37).epsilon(1e-15));
  const auto rneg = reflection_at(m, -0.37);
  CHECK(rneg == std::conj(r));
  CHECK(reflection_at(m, 0.0) == std::complex<double>(0.8, 0.0));
}

TEST_CASE("perfect conductor reflects unity at every frequency") {
  ReflectionModel pc{0.4, 0.0, true};  // r0 ignored once the flag is set
  for (double w : {-3.0, -0.1, 0.0, 0.7, 12.0})
    CHECK(reflection_at(pc, w) == std::complex<double>(1.0, 0.0));
  CHECK(static_reflection(pc) == 1.0);
  CHECK(static_reflection(ReflectionModel{0.4, 0.2, false}) == 0.4);
}

TEST_CASE("mu tensor is diagonal and frequency flat") {
  InternalDissipationModel mu{0.9, 1.2, 0.5};
  for (double w : {0.0, 0.3, -2.0}) {
    const auto m = mu_tensor(mu, w);
    CHECK(m(0, 0) == std::complex<double>(0.9, 0.0));
    CHECK(m(1, 1) == std::complex<double>(1.2, 0.0));
    CHECK(m(2, 2) == std::complex<double>(0.5, 0.0));
    CHECK(m(0, 1) == std::complex<double>(0.0, 0.0));
    CHECK(m(2, 0) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("alpha_mu matches the closed form at omega_a/sqrt(2)") {
  ParticleModel p;
  p.alpha0 = 1.0;
  p.omega_a = 10.0;
  p.dissipation = InternalDissipationModel{0.3, 0.3, 0.3};
  const double w = 10.0 / std::sqrt(2.0);
  const auto a = alpha_mu(p, w);
  // 1 / (0.5 - i w 0.3), frozen:
  CHECK(a(0, 0).real() == Approx(0.10526315789473684).epsilon(1e-14));
  CHECK(a(0, 0).imag() == Approx(0.44659375653887212).epsilon(1e-14));
  CHECK(a(1, 1) == a(0, 0));
  CHECK(a(2, 2) == a(0, 0));
  CHECK(a(0, 1) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("alpha_mu is the static polarizability at omega = 0") {
  ParticleModel p;
  p.alpha0 = 2.5;
  p.dissipation = InternalDissipationModel{0.7, 0.0, 3.0};
  const auto a = alpha_mu(p, 0.0);
  for (int i = 0; i < 3; ++i) CHECK(a(i, i) == std::complex<double>(2.5, 0.0));
}

TEST_CASE("alpha_mu crossing relation alpha(-w) = conj(alpha(w))") {
  ParticleModel p;
  p.alpha0 = 0.8;
  p.omega_a = 2.0;
  p.dissipation = InternalDissipationModel{0.1, 0.4, 0.9};
  for (double w : {0.3, 1.1, 1.9, 5.0}) {
    const auto a = alpha_mu(p, w);
    const auto b = alpha_mu(p, -w);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(b(i, i) - std::conj(a(i, i))) <= 1e-15);
  }
}

TEST_CASE("alpha_mu anisotropic axes differ") {
  ParticleModel p;
  p.omega_a = 3.0;
  p.dissipation = InternalDissipationModel{0.2, 0.0, 1.5};
  const auto a = alpha_mu(p, 1.0);
  CHECK(a(0, 0) != a(1, 1));
  CHECK(a(1, 1).imag() == Approx(0.0));  // mu_yy = 0: purely reactive axis
  CHECK(a(2, 2).imag() > a(0, 0).imag());
}

TEST_CASE("alpha_mu throws on undamped resonance") {
  ParticleModel p;  // mu = 0
  p.omega_a = 1.0;
  CHECK_THROWS_AS((void)alpha_mu(p, 1.0), std::domain_error);
  // A damped axis at resonance stays regular.
  p.dissipation = InternalDissipationModel{0.3, 0.3, 0.3};
  CHECK_NOTHROW((void)alpha_mu(p, 1.0));
}

TEST_CASE("reflection model validation") {
  CHECK(!validate(ReflectionModel{1.0, 0.0, false}));
  CHECK(!validate(ReflectionModel{0.0, 2.0, false}));
  CHECK(validate(ReflectionModel{-0.1, 0.0, false}).has_value());
  CHECK(validate(ReflectionModel{1.2, 0.0, false}).has_value());
  CHECK(validate(ReflectionModel{1.0, -0.5, false}).has_value());
  // perfect conductor: rho must be exactly zero
  CHECK(!validate(ReflectionModel{1.0, 0.0, true}));
  CHECK(validate(ReflectionModel{1.0, 0.1, true}).has_value());
}

TEST_CASE("particle and motion validation") {
  ParticleModel p;
  CHECK(!validate(p));
  p.alpha0 = 0.0;
  CHECK(validate(p).has_value());
  p.alpha0 = 1.0;
  p.omega_a = -2.0;
  CHECK(validate(p).has_value());
  p.omega_a = 1.0;
  p.dissipation.mu_yy = -0.1;
  CHECK(validate(p).has_value());

  CHECK(!validate(MotionSpec{0.5}));
  CHECK(validate(MotionSpec{0.0}).has_value());
  CHECK(validate(MotionSpec{-1.0}).has_value());
}

TEST_CASE("geometry validation") {
  CavityGeometry g;  // w=1, z_a=0.5: valid
  CHECK(!validate(g));
  g.z_a = 2.0;  // strictly inside (0, 2w) required
  CHECK(validate(g).has_value());
  g.z_a = 2.5;
  CHECK(validate(g).has_value());
  g.z_a = 0.0;
  CHECK(validate(g).has_value());

  g.z_a = 0.5;
  g.half_width = 0.0;
  CHECK(validate(g).has_value());

  // single plane ignores w and plate2 entirely
  g.single_plane = true;
  g.plate2.rho = -5.0;
  CHECK(!validate(g));
  g.z_a = -0.1;
  CHECK(validate(g).has_value());

  g.z_a = 0.5;
  g.plate1.r0 = 7.0;
  const auto err = validate(g);
  REQUIRE(err.has_value());
  CHECK(err->find("plate1") != std::string::npos);
}

TEST_CASE("require_valid throws ValidationError with the message") {
  CavityGeometry g;
  g.z_a = -1.0;
  CHECK_THROWS_AS(require_valid(g), ValidationError);
  try {
    require_valid(g);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("z_a") != std::string::npos);
  }
  CHECK_NOTHROW(require_valid(CavityGeometry{}));
}

TEST_CASE("reduced unit constants") {
  CHECK(UnitSystem::hbar == 1.0);
  CHECK(UnitSystem::eps0 == 1.0);
  CHECK(UnitSystem{}.length_unit == 1.0);
}

}  // TEST_SUITE
