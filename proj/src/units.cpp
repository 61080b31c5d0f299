#include "qfric/units.hpp"

#include <cmath>
#include <sstream>

namespace qfric {

std::complex<double> reflection_at(const ReflectionModel& model, double omega) {
  if (model.perfect_conductor) return {1.0, 0.0};
  return {model.r0, 2.0 * UnitSystem::eps0 * model.rho * omega};
}

double static_reflection(const ReflectionModel& model) {
  return model.perfect_conductor ? 1.0 : model.r0;
}

Eigen::Matrix3cd mu_tensor(const InternalDissipationModel& model, double /*omega*/) {
  Eigen::Matrix3cd mu = Eigen::Matrix3cd::Zero();
  mu(0, 0) = model.mu_xx;
  mu(1, 1) = model.mu_yy;
  mu(2, 2) = model.mu_zz;
  return mu;
}

Eigen::Matrix3cd alpha_mu(const ParticleModel& particle, double omega) {
  const double wa = particle.omega_a;
  const std::complex<double> iw(0.0, UnitSystem::eps0 * omega);
  const Eigen::Matrix3cd mu = mu_tensor(particle.dissipation, omega);
  Eigen::Matrix3cd den =
      (1.0 - omega * omega / (wa * wa)) * Eigen::Matrix3cd::Identity() - iw * mu;
  // The denominator is diagonal for this model; check entrywise regularity.
  for (int i = 0; i < 3; ++i) {
    if (std::abs(den(i, i)) < 1e-300) {
      std::ostringstream os;
      os << "alpha_mu: singular denominator at omega=" << omega
         << " (axis " << i << "); resonance with vanishing internal dissipation";
      throw std::domain_error(os.str());
    }
  }
  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; ++i) out(i, i) = particle.alpha0 / den(i, i);
  return out;
}

std::optional<std::string> validate(const ReflectionModel& model) {
  if (!std::isfinite(model.r0) || !std::isfinite(model.rho))
    return "reflection model has non-finite parameters";
  if (model.rho < 0.0)
    return "passivity violated: Ohmic slope rho must be nonnegative, got rho=" +
           std::to_string(model.rho);
  if (model.perfect_conductor) {
    if (model.rho != 0.0)
      return "perfect conductor requires rho = 0 exactly, got rho=" +
             std::to_string(model.rho);
    return std::nullopt;
  }
  if (model.r0 < 0.0 || model.r0 > 1.0)
    return "static reflection r0 must lie in [0, 1], got r0=" +
           std::to_string(model.r0);
  return std::nullopt;
}

std::optional<std::string> validate(const InternalDissipationModel& model) {
  if (!(model.mu_xx >= 0.0) || !(model.mu_yy >= 0.0) || !(model.mu_zz >= 0.0))
    return "internal dissipation mu must be positive semidefinite "
           "(all diagonal entries nonnegative)";
  return std::nullopt;
}

std::optional<std::string> validate(const ParticleModel& particle) {
  if (!(particle.alpha0 > 0.0)) return "alpha0 must be positive";
  if (!(particle.omega_a > 0.0)) return "omega_a must be positive";
  return validate(particle.dissipation);
}

std::optional<std::string> validate(const CavityGeometry& geom) {
  if (auto err = validate(geom.plate1)) return "plate1: " + *err;
  if (geom.single_plane) {
    if (!(geom.z_a > 0.0))
      return "position on plate: z_a must be positive, got z_a=" +
             std::to_string(geom.z_a);
    return std::nullopt;
  }
  if (auto err = validate(geom.plate2)) return "plate2: " + *err;
  if (!(geom.half_width > 0.0)) return "half_width w must be positive";
  if (!(geom.z_a > 0.0) || !(geom.z_a < 2.0 * geom.half_width))
    return "position on plate: z_a must lie strictly between 0 and 2w, got z_a=" +
           std::to_string(geom.z_a);
  return std::nullopt;
}

std::optional<std::string> validate(const MotionSpec& motion) {
  if (!(motion.v > 0.0)) return "speed v must be positive";
  return std::nullopt;
}

}  // namespace qfric
