#pragma once
// Reduced-unit system, material response models, and their validation.
//
// Internal convention: hbar = eps0 = 1. Lengths are measured in an arbitrary
// reference length l0; times in l0 (c plays no role in the quasistatic
// regime), so velocities are reduced lengths per reduced time. Every
// dimensionless output (eta factors, ratios) is independent of l0.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qfric {

struct UnitSystem {
  // Meters per reduced length; used only when converting reports, never in
  // the internal computation.
  double length_unit = 1.0;
  static constexpr double hbar = 1.0;
  static constexpr double eps0 = 1.0;
};

// Low-frequency TM reflection of one plate: r(w) = r0 + 2i*eps0*rho*w.
struct ReflectionModel {
  double r0 = 1.0;               // static reflection amplitude, in [0, 1]
  double rho = 0.0;              // Ohmic slope, >= 0 (passivity)
  bool perfect_conductor = false;  // forces r0 = 1, rho = 0
};

// Diagonal, frequency-flat (Ohmic) internal dissipation kernel mu.
struct InternalDissipationModel {
  double mu_xx = 0.0;
  double mu_yy = 0.0;
  double mu_zz = 0.0;
};

struct ParticleModel {
  double alpha0 = 1.0;   // static polarizability, > 0
  double omega_a = 1.0;  // internal transition frequency, > 0
  InternalDissipationModel dissipation;
};

// Plates at z = 0 (plate1) and z = 2w (plate2); particle at z = z_a moving
// along x. With single_plane set, plate2 is ignored (w -> infinity limit).
struct CavityGeometry {
  double half_width = 1.0;  // w
  double z_a = 0.5;
  ReflectionModel plate1;
  ReflectionModel plate2;
  bool single_plane = false;
};

struct MotionSpec {
  double v = 1.0;  // constant speed parallel to the plates, > 0
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// r(omega) for the given plate. Perfect conductors return exactly 1.
std::complex<double> reflection_at(const ReflectionModel& model, double omega);

// Effective static reflection (1 for a perfect conductor regardless of r0).
double static_reflection(const ReflectionModel& model);

// mu(omega): diagonal, real, frequency-flat in this model.
Eigen::Matrix3cd mu_tensor(const InternalDissipationModel& model, double omega);

// Intrinsically damped polarizability
//   alpha_mu(w) = alpha0 * [ (1 - w^2/w_a^2) I - i*eps0*w*mu(w) ]^{-1}.
// Throws std::domain_error when the denominator matrix is singular
// (resonance w = w_a with vanishing mu).
Eigen::Matrix3cd alpha_mu(const ParticleModel& particle, double omega);

// Each validate returns std::nullopt when the model satisfies its
// invariants, otherwise a descriptive error message.
std::optional<std::string> validate(const ReflectionModel& model);
std::optional<std::string> validate(const InternalDissipationModel& model);
std::optional<std::string> validate(const ParticleModel& particle);
std::optional<std::string> validate(const CavityGeometry& geom);
std::optional<std::string> validate(const MotionSpec& motion);

// Throws ValidationError with the message from validate() on violation.
template <class Model>
void require_valid(const Model& m) {
  if (auto err = validate(m)) throw ValidationError(*err);
}

}  // namespace qfric
