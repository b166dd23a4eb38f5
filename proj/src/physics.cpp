#include "wepsim/physics.hpp"

#include <cmath>
#include <stdexcept>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"

namespace wepsim {

namespace c = constants;

void SpeciesState::validate() const {
  if (!(inertial_mass > 0.0))
    throw ConfigError("species '" + isotope_label + "': inertial_mass must be > 0");
  if (!(effective_wave_vector > 0.0))
    throw ConfigError("species '" + isotope_label + "': effective_wave_vector must be > 0");
  if (!(internal_energy >= 0.0))
    throw ConfigError("species '" + isotope_label + "': internal_energy must be >= 0");
  if (hyperfine_F < 0)
    throw ConfigError("species '" + isotope_label + "': hyperfine_F must be >= 0");
  if (std::abs(magnetic_mF) > hyperfine_F)
    throw ConfigError("species '" + isotope_label + "': |mF| must not exceed F");
}

void ViolationModel::validate() const {
  for (double v : {eta_mass, eta_internal, coupling_kinetic, coupling_dilation,
                   coupling_mass_potential}) {
    if (!std::isfinite(v))
      throw ConfigError("violation model coefficients must be finite");
  }
}

void EnvironmentModel::validate() const {
  if (!(local_g > 0.0)) throw ConfigError("environment: local_g must be > 0");
  if (!(local_g_uncertainty >= 0.0))
    throw ConfigError("environment: local_g_uncertainty must be >= 0");
  for (double v : {local_g, gravity_gradient, rotation_rate}) {
    if (!std::isfinite(v))
      throw ConfigError("environment fields must be finite");
  }
}

double gravitational_mass(const SpeciesState& state, const ViolationModel& model) {
  return state.inertial_mass + model.eta_mass * state.inertial_mass +
         model.eta_internal * state.internal_energy / c::c_squared;
}

double free_fall_acceleration(const SpeciesState& state,
                              const ViolationModel& model,
                              const EnvironmentModel& env, double velocity,
                              double height) {
  if (std::abs(velocity) >= 1e3)
    throw ConfigError("free_fall_acceleration: |velocity| must be < 1e3 m/s");

  const double g_local = env.local_g + env.gravity_gradient * height;
  const double mass_ratio = gravitational_mass(state, model) / state.inertial_mass;

  // Coupling channels, each scaled to its declared reference point.
  const double eps_int =
      state.internal_energy / (state.inertial_mass * c::c_squared);
  const double phi = env.local_g * height;                       // J/kg
  const double phi_ref = env.local_g * c::reference_height;
  const double v_ratio_sq = (velocity / c::reference_velocity) *
                            (velocity / c::reference_velocity);

  double anomaly = 0.0;
  anomaly += model.coupling_kinetic * eps_int * v_ratio_sq;
  anomaly += model.coupling_dilation * eps_int * (phi_ref != 0.0 ? phi / phi_ref : 0.0);
  anomaly += model.coupling_mass_potential * (phi / c::c_squared) * v_ratio_sq;

  return g_local * (mass_ratio + anomaly);
}

double eta_from_accelerations(double a1, double a2, double epsilon) {
  return std::abs(eta_from_accelerations_signed(a1, a2, epsilon));
}

double eta_from_accelerations_signed(double a1, double a2, double epsilon) {
  const double sum = a1 + a2;
  if (std::abs(sum) < epsilon)
    throw NumericalError("eta_from_accelerations: |a1 + a2| below epsilon");
  return 2.0 * (a1 - a2) / sum;
}

double interferometer_phase(const SpeciesState& state, double acceleration,
                            double chirp_rate, double T, int diffraction_order) {
  if (!(T > 0.0)) throw ConfigError("interferometer_phase: T must be > 0");
  if (diffraction_order != 1 && diffraction_order != 2)
    throw ConfigError("interferometer_phase: diffraction_order must be 1 or 2");
  return diffraction_order *
         (state.effective_wave_vector * acceleration - chirp_rate) * T * T;
}

}  // namespace wepsim
