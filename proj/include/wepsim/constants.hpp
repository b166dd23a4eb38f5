#ifndef WEPSIM_CONSTANTS_HPP
#define WEPSIM_CONSTANTS_HPP

namespace wepsim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// SI defining constants (CODATA 2018, exact).
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double c_squared = speed_of_light * speed_of_light;

// Atomic mass constant, CODATA 2018.
inline constexpr double atomic_mass_kg = 1.66053906660e-27;  // kg

// Rubidium atomic masses (AME2020 atomic mass evaluation).
inline constexpr double rb87_mass_u = 86.909180531;
inline constexpr double rb85_mass_u = 84.911789738;
inline constexpr double rb87_mass_kg = rb87_mass_u * atomic_mass_kg;
inline constexpr double rb85_mass_kg = rb85_mass_u * atomic_mass_kg;

// Ground-state hyperfine splittings (Steck alkali D line data; the 87Rb
// value is the defining microwave standard for that isotope).
inline constexpr double rb87_hyperfine_hz = 6.834682610904290e9;
inline constexpr double rb85_hyperfine_hz = 3.0357324390e9;

// D2 line center frequencies (Steck). The 87Rb line doubles as the common
// Raman reference frequency for both isotopes: all four Raman beams sit a
// common detuning away from it, so the per-species two-photon wave vector
// is k_eff = 2*pi*(2*f_ref + nu_hfs)/c and the species difference reduces
// to the hyperfine-splitting difference.
inline constexpr double rb87_d2_frequency_hz = 384.2304844685e12;
inline constexpr double rb85_d2_frequency_hz = 384.230406373e12;
inline constexpr double raman_reference_frequency_hz = rb87_d2_frequency_hz;

inline constexpr double keff_from_hyperfine(double hyperfine_hz) {
  return two_pi * (2.0 * raman_reference_frequency_hz + hyperfine_hz) /
         speed_of_light;
}

inline constexpr double rb87_keff_rad_per_m = keff_from_hyperfine(rb87_hyperfine_hz);
inline constexpr double rb85_keff_rad_per_m = keff_from_hyperfine(rb85_hyperfine_hz);

// Normalization references for the internal-energy coupling channels:
// a coupling coefficient of 1 produces its nominal fractional anomaly at
// this velocity and at the potential reached 1 m above the launch point.
inline constexpr double reference_velocity = 1.0;   // m/s
inline constexpr double reference_height = 1.0;     // m

}  // namespace wepsim::constants

#endif  // WEPSIM_CONSTANTS_HPP
