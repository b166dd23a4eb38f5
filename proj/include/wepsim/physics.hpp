#ifndef WEPSIM_PHYSICS_HPP
#define WEPSIM_PHYSICS_HPP

#include <string>

namespace wepsim {

// One isotope prepared in one hyperfine level. internal_energy is the
// hyperfine energy of the chosen F level above the isotope's lower
// hyperfine level, so it is zero for the lower level by construction.
struct SpeciesState {
  std::string isotope_label;
  double inertial_mass = 0.0;        // kg
  int hyperfine_F = 0;
  int magnetic_mF = 0;
  double internal_energy = 0.0;      // J
  double effective_wave_vector = 0.0;  // rad/m, two-photon Raman k_eff

  void validate() const;  // throws ConfigError on violated invariants
};

// Anomaly coefficients turning mass and internal energy into extra
// gravitational response. All zero means the equivalence principle holds
// exactly. Channels are normalized so a coefficient of 1 contributes a
// fractional acceleration anomaly of exactly E_int/(m c^2) (kinetic and
// dilation channels) or phi/c^2 (mass-potential channel) at the reference
// velocity and potential declared in constants.hpp.
struct ViolationModel {
  double eta_mass = 0.0;
  double eta_internal = 0.0;
  double coupling_kinetic = 0.0;
  double coupling_dilation = 0.0;
  double coupling_mass_potential = 0.0;

  bool all_zero() const {
    return eta_mass == 0.0 && eta_internal == 0.0 && coupling_kinetic == 0.0 &&
           coupling_dilation == 0.0 && coupling_mass_potential == 0.0;
  }
  void validate() const;  // all coefficients finite
};

struct EnvironmentModel {
  double local_g = 9.8;             // m/s^2
  double local_g_uncertainty = 1.0e-4;  // m/s^2, drives the wave-vector entry
  double gravity_gradient = 0.0;    // 1/s^2, vertical gradient Gamma
  double rotation_rate = 0.0;       // rad/s, Coriolis-relevant component

  void validate() const;  // local_g > 0
};

// m_g = m_i + eta_mass*m_i + eta_internal*E_int/c^2 (the channels carried
// by ViolationModel; the coupling_* knobs act on acceleration, not mass).
double gravitational_mass(const SpeciesState& state, const ViolationModel& model);

// Free-fall acceleration of one species at a given vertical velocity and
// height above the launch point. Includes the local gradient term
// g + Gamma*h and the internal-energy coupling channels. The potential is
// referenced to the launch point, phi = g*h.
double free_fall_acceleration(const SpeciesState& state,
                              const ViolationModel& model,
                              const EnvironmentModel& env, double velocity,
                              double height);

// Eotvos parameter from two accelerations, 2|a1-a2|/|a1+a2|.
// Throws NumericalError when |a1+a2| < epsilon.
double eta_from_accelerations(double a1, double a2, double epsilon = 1e-30);

// Signed variant, 2*(a1-a2)/(a1+a2); the budget arithmetic is signed.
double eta_from_accelerations_signed(double a1, double a2,
                                     double epsilon = 1e-30);

// Mach-Zehnder phase, Phi = order*(k_eff*a - chirp_rate)*T^2. The
// double-diffraction scheme used here corresponds to order 2.
double interferometer_phase(const SpeciesState& state, double acceleration,
                            double chirp_rate, double T, int diffraction_order);

}  // namespace wepsim

#endif  // WEPSIM_PHYSICS_HPP
