#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/physics.hpp"
#include "wepsim/species_table.hpp"
#include "test_util.hpp"

using namespace wepsim;
namespace c = constants;

namespace {

SpeciesState rb87_f2() {
  return SpeciesTable::builtin().resolve({"87Rb", 2, 0});
}
SpeciesState rb87_f1() {
  return SpeciesTable::builtin().resolve({"87Rb", 1, 0});
}
SpeciesState rb85_f2() {
  return SpeciesTable::builtin().resolve({"85Rb", 2, 0});
}

}  // namespace

TEST_CASE("gravitational mass: zero model returns the inertial mass") {
  const ViolationModel zero;
  for (const auto& s : {rb87_f1(), rb87_f2(), rb85_f2()})
    CHECK(gravitational_mass(s, zero) == s.inertial_mass);
}

TEST_CASE("gravitational mass: internal-energy channel matches h*nu/c^2") {
  ViolationModel model;
  model.eta_internal = 1.0;
  const auto s = rb87_f2();
  const double expected_shift = c::planck * c::rb87_hyperfine_hz / c::c_squared;
  CHECK(expected_shift == doctest::Approx(5.04e-41).epsilon(2e-3));
  const double shift = gravitational_mass(s, model) - s.inertial_mass;
  // The shift sits ~16 orders below the mass; recover it to the ulp floor.
  CHECK(std::abs(shift - expected_shift) < 2e-41);
  CHECK(gravitational_mass(s, model) ==
        doctest::Approx(s.inertial_mass + expected_shift).epsilon(1e-15));
}

TEST_CASE("gravitational mass: mass-channel scaling") {
  ViolationModel model;
  model.eta_mass = 1e-9;
  const auto s = rb85_f2();
  CHECK(gravitational_mass(s, model) ==
        doctest::Approx(s.inertial_mass * (1.0 + 1e-9)).epsilon(1e-15));
}

TEST_CASE("gravitational mass is affine in eta_internal (finite difference)") {
  const auto s = rb87_f2();
  // Large step keeps the difference far above the mass's ulp; affinity
  // makes the finite difference exact.
  const double h = 1e16;
  ViolationModel up, down;
  up.eta_internal = h;
  down.eta_internal = -h;
  const double slope =
      (gravitational_mass(s, up) - gravitational_mass(s, down)) / (2.0 * h);
  const double expected = s.internal_energy / c::c_squared;
  CHECK(slope == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("free fall: trivial cases") {
  const ViolationModel zero;
  EnvironmentModel env;
  env.local_g = 9.8;
  const auto s = rb87_f1();

  CHECK(free_fall_acceleration(s, zero, env, 0.0, 0.0) == 9.8);

  env.gravity_gradient = 3.1e-6;
  CHECK(free_fall_acceleration(s, zero, env, 0.0, 1.0) ==
        doctest::Approx(9.8 + 3.1e-6).epsilon(1e-15));

  env.gravity_gradient = 0.0;
  ViolationModel mass_only;
  mass_only.eta_mass = 1e-9;
  CHECK(free_fall_acceleration(s, mass_only, env, 0.0, 0.0) ==
        doctest::Approx(9.8 * (1.0 + 1e-9)).epsilon(1e-15));
}

TEST_CASE("free fall: coupling channels hit their declared normalization") {
  EnvironmentModel env;
  env.local_g = 9.8;
  const auto s = rb87_f2();
  const double eps = s.internal_energy / (s.inertial_mass * c::c_squared);

  ViolationModel kinetic;
  kinetic.coupling_kinetic = 1.0;
  // At the reference velocity the fractional anomaly is exactly eps.
  const double a_kin =
      free_fall_acceleration(s, kinetic, env, c::reference_velocity, 0.0);
  CHECK(a_kin / 9.8 - 1.0 == doctest::Approx(eps).epsilon(1e-6));

  ViolationModel dilation;
  dilation.coupling_dilation = 1.0;
  const double a_dil =
      free_fall_acceleration(s, dilation, env, 0.0, c::reference_height);
  CHECK(a_dil / 9.8 - 1.0 == doctest::Approx(eps).epsilon(1e-6));

  ViolationModel mass_potential;
  mass_potential.coupling_mass_potential = 1.0;
  const double h = 2.0;
  const double a_mp = free_fall_acceleration(s, mass_potential, env,
                                             c::reference_velocity, h);
  const double phi = env.local_g * h;
  CHECK(a_mp / 9.8 - 1.0 == doctest::Approx(phi / c::c_squared).epsilon(1e-6));
}

TEST_CASE("free fall: velocity precondition") {
  const auto s = rb87_f1();
  CHECK_THROWS_AS(free_fall_acceleration(s, {}, {}, 1e3, 0.0), ConfigError);
}

TEST_CASE("eta from accelerations: examples") {
  CHECK(eta_from_accelerations(9.8, 9.8) == 0.0);
  CHECK(eta_from_accelerations(3.0, 1.0) == 1.0);
  CHECK(eta_from_accelerations_signed(1.0, 3.0) == -1.0);

  // First-order expansion; the 9.8-scale subtraction floors the error at
  // the ulp level, a few 1e-17.
  const double a1 = 9.8 + 9.8 * 5e-10;
  CHECK(std::abs(eta_from_accelerations(a1, 9.8) - 5e-10) < 2e-16);
}

TEST_CASE("eta from accelerations: swap symmetry") {
  const double pairs[][2] = {{9.8, 9.80000001}, {1.0, 2.0}, {5.5, 3.3}};
  for (const auto& p : pairs) {
    CHECK(eta_from_accelerations(p[0], p[1]) ==
          eta_from_accelerations(p[1], p[0]));
    CHECK(eta_from_accelerations_signed(p[0], p[1]) ==
          -eta_from_accelerations_signed(p[1], p[0]));
  }
}

TEST_CASE("eta from accelerations: degenerate denominator") {
  CHECK_THROWS_AS(eta_from_accelerations(1.0, -1.0), NumericalError);
}

TEST_CASE("zero violation model gives eta exactly zero for any pair") {
  const ViolationModel zero;
  EnvironmentModel env;
  env.local_g = 9.80123;
  const double a1 = free_fall_acceleration(rb87_f1(), zero, env, 2.0, 0.0);
  const double a2 = free_fall_acceleration(rb85_f2(), zero, env, 2.0, 0.0);
  CHECK(eta_from_accelerations(a1, a2) == 0.0);
}

TEST_CASE("interferometer phase: examples") {
  auto s = rb87_f1();

  SUBCASE("Doppler-compensated dark fringe") {
    const double chirp = s.effective_wave_vector * 9.8;
    CHECK(interferometer_phase(s, 9.8, chirp, 0.203, 2) == 0.0);
  }
  SUBCASE("direct arithmetic") {
    s.effective_wave_vector = 1.6e7;
    const double phi = interferometer_phase(s, 9.8, 0.0, 0.203, 2);
    CHECK(phi ==
          doctest::Approx(2.0 * 1.6e7 * 9.8 * 0.203 * 0.203).epsilon(1e-15));
    CHECK(phi == doctest::Approx(1.292e7).epsilon(1e-3));
  }
  SUBCASE("diffraction order ratio is exactly 2") {
    const double p1 = interferometer_phase(s, 9.8, 1e5, 0.203, 1);
    const double p2 = interferometer_phase(s, 9.8, 1e5, 0.203, 2);
    CHECK(p2 == 2.0 * p1);
  }
}

TEST_CASE("interferometer phase: linearity and T^2 scaling") {
  const auto s = rb87_f1();
  const double T = 0.203;

  // Linear in a and in chirp.
  const double base = interferometer_phase(s, 9.8, 0.0, T, 2);
  CHECK(interferometer_phase(s, 2.0 * 9.8, 0.0, T, 2) ==
        doctest::Approx(2.0 * base).epsilon(1e-15));
  const double with_chirp = interferometer_phase(s, 9.8, 1e6, T, 2);
  CHECK(base - with_chirp == doctest::Approx(2.0 * 1e6 * T * T).epsilon(1e-12));

  // Quadratic in T when chirp = 0.
  CHECK(interferometer_phase(s, 9.8, 0.0, 2.0 * T, 2) ==
        doctest::Approx(4.0 * base).epsilon(1e-15));

  CHECK_THROWS_AS(interferometer_phase(s, 9.8, 0.0, -1.0, 2), ConfigError);
  CHECK_THROWS_AS(interferometer_phase(s, 9.8, 0.0, T, 3), ConfigError);
}

TEST_CASE("species table: built-in invariants") {
  const auto table = SpeciesTable::builtin();
  const auto a = table.resolve({"87Rb", 1, 0});
  const auto b = table.resolve({"85Rb", 2, 0});

  CHECK(a.inertial_mass > 0.0);
  CHECK(b.inertial_mass > 0.0);
  CHECK(a.effective_wave_vector > 0.0);
  // The paper pair: both in the lower hyperfine level, zero internal energy.
  CHECK(a.internal_energy == 0.0);
  CHECK(b.internal_energy == 0.0);
  // The two species must differ in k_eff (the Table-1 wave-vector row).
  CHECK(a.effective_wave_vector != b.effective_wave_vector);
  const double rel = (a.effective_wave_vector - b.effective_wave_vector) /
                     (0.5 * (a.effective_wave_vector + b.effective_wave_vector));
  CHECK(rel == doctest::Approx(4.9436e-6).epsilon(1e-3));

  // Upper levels carry the hyperfine energy.
  CHECK(table.resolve({"87Rb", 2, 0}).internal_energy ==
        doctest::Approx(c::planck * c::rb87_hyperfine_hz));
  CHECK(table.resolve({"85Rb", 3, 0}).internal_energy ==
        doctest::Approx(c::planck * c::rb85_hyperfine_hz));
}

TEST_CASE("species table: selector parsing and errors") {
  const auto sel = StateSelector::parse("87Rb F=2 mF=-1");
  CHECK(sel.isotope == "87Rb");
  CHECK(sel.hyperfine_F == 2);
  CHECK(sel.magnetic_mF == -1);

  CHECK_THROWS_AS(StateSelector::parse("87Rb"), ConfigError);
  CHECK_THROWS_AS(StateSelector::parse("87Rb F=x"), ConfigError);

  const auto table = SpeciesTable::builtin();
  CHECK_THROWS_AS(table.resolve({"87Rb", 3, 0}), UnknownStateError);
  CHECK_THROWS_AS(table.resolve({"40K", 1, 0}), UnknownStateError);
  CHECK_THROWS_AS(table.resolve({"87Rb", 1, 2}), ConfigError);  // |mF| > F
}

TEST_CASE("species table: file round-trip and shipped file match built-ins") {
  const auto table = SpeciesTable::builtin();
  const auto dir = testutil::fresh_dir("species");
  const auto path = dir + "/table.txt";
  {
    std::ofstream out(path);
    out << table.serialize();
  }
  const auto loaded = SpeciesTable::from_file(path);
  REQUIRE(loaded.records().size() == table.records().size());
  for (size_t i = 0; i < table.records().size(); ++i) {
    CHECK(loaded.records()[i].isotope == table.records()[i].isotope);
    CHECK(loaded.records()[i].mass_kg == table.records()[i].mass_kg);
    CHECK(loaded.records()[i].hyperfine_energy_J ==
          table.records()[i].hyperfine_energy_J);
    CHECK(loaded.records()[i].k_eff_rad_per_m ==
          table.records()[i].k_eff_rad_per_m);
  }

  REQUIRE(std::filesystem::exists("data/species_rb.txt"));
  const auto shipped = SpeciesTable::from_file("data/species_rb.txt");
  REQUIRE(shipped.records().size() == table.records().size());
  for (size_t i = 0; i < table.records().size(); ++i)
    CHECK(shipped.records()[i].k_eff_rad_per_m ==
          table.records()[i].k_eff_rad_per_m);
}
