#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wepsim/config.hpp"
#include "wepsim/constants.hpp"
#include "wepsim/ellipse.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/sequence.hpp"
#include "test_util.hpp"

using namespace wepsim;

namespace {

// The paper pair resolved with auto chirps (both legs at kbar*g).
ResolvedRun default_run() {
  RunConfig cfg;
  cfg.seed = 99;
  return resolve_run(cfg);
}

}  // namespace

TEST_CASE("select_state: ideal selection keeps only the target level") {
  const StateSelection sel{{1, 2}, 1, 0.0};
  const auto out = select_state({{1, 0.5}, {2, 0.5}}, sel);
  CHECK(out.at(1) == 1.0);
  CHECK(out.at(2) == 0.0);
}

TEST_CASE("select_state: leakage fraction survives in the wrong level") {
  const StateSelection sel{{1, 2}, 1, 0.02};
  const auto out = select_state({{1, 0.5}, {2, 0.5}}, sel);
  // Detected atoms: 0.5 target + 0.02*0.5 leaked.
  CHECK(out.at(1) == doctest::Approx(0.5 / 0.51).epsilon(1e-12));
  CHECK(out.at(2) == doctest::Approx(0.01 / 0.51).epsilon(1e-12));
  CHECK(out.at(1) == doctest::Approx(0.98).epsilon(1e-2));
  CHECK(out.at(2) == doctest::Approx(0.02).epsilon(2e-2));
}

TEST_CASE("select_state: empty input stays empty") {
  CHECK(select_state({}, {{1, 2}, 1, 0.0}).empty());
}

TEST_CASE("select_state: nothing in the target level") {
  // All atoms start in the wrong level: with zero leakage nothing is
  // detected; with leakage only wrong-state atoms remain.
  const auto none = select_state({{1, 0.0}, {2, 1.0}}, {{1, 2}, 1, 0.0});
  CHECK(none.at(1) == 0.0);
  CHECK(none.at(2) == 0.0);

  const auto leaked = select_state({{1, 0.0}, {2, 1.0}}, {{1, 2}, 1, 0.02});
  CHECK(leaked.at(1) == 0.0);
  CHECK(leaked.at(2) == 1.0);
}

TEST_CASE("select_state: unknown labels and bad fractions") {
  const StateSelection sel{{1, 2}, 1, 0.0};
  CHECK_THROWS_AS(select_state({{3, 0.5}}, sel), UnknownStateError);
  CHECK_THROWS_AS(select_state({{1, 0.5}}, {{1, 2}, 4, 0.0}), UnknownStateError);
  CHECK_THROWS_AS(select_state({{1, -0.1}}, sel), DataError);
  CHECK_THROWS_AS(select_state({{1, 0.9}, {2, 0.9}}, sel), DataError);
}

TEST_CASE("fringe_population: readout examples") {
  CHECK(fringe_population(0.0, 1.0, 0.5) == 1.0);
  CHECK(fringe_population(constants::pi, 1.0, 0.5) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fringe_population(constants::pi / 2.0, 0.3, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-15));

  bool clamped = false;
  CHECK(fringe_population(0.0, 1.0, 0.8, &clamped) == 1.0);
  CHECK(clamped);
}

TEST_CASE("simulate_shot: noiseless fringe traces the scan phase") {
  auto run = default_run();
  // Chirp matched to species a: its interferometer phase vanishes and the
  // population follows offset + (c/2)cos(scan) exactly.
  const ViolationModel zero;
  const double a_accel =
      free_fall_acceleration(run.pair.species_a, zero, run.pair.environment,
                             run.config.sequence.launch_velocity, 0.0);
  run.pair.chirp_rate_a = run.pair.species_a.effective_wave_vector * a_accel;

  NoiseConfig noise;  // all zero sigmas, contrast/offset 0.5
  for (int j = 0; j < 10; ++j) {
    const auto rec =
        simulate_shot(run.config.sequence, noise, run.pair, 7, 0, j);
    const double expected = 0.5 + 0.25 * std::cos(rec.scan_phase);
    CHECK(rec.pop_a == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("simulate_shot: determinism in (seed, indices)") {
  const auto run = default_run();
  NoiseConfig noise;
  noise.vibration_phase_sigma = 2.0;
  noise.detection_sigma = 0.05;
  const auto r1 = simulate_shot(run.config.sequence, noise, run.pair, 123, 4, 7);
  const auto r2 = simulate_shot(run.config.sequence, noise, run.pair, 123, 4, 7);
  CHECK(r1.pop_a == r2.pop_a);
  CHECK(r1.pop_b == r2.pop_b);
  const auto r3 = simulate_shot(run.config.sequence, noise, run.pair, 124, 4, 7);
  CHECK(r1.pop_a != r3.pop_a);
}

TEST_CASE("simulate_shot: noiseless points lie on the predicted ellipse") {
  const auto run = default_run();
  NoiseConfig noise;
  const double phi_d =
      std::abs(std::remainder(predicted_differential_phase(run.config.sequence,
                                                           run.pair),
                              constants::two_pi));

  // Closed form: x = ox + (cx/2)cos(t), y = oy + (cy/2)cos(t + phi_d)
  // where t is the scan phase plus the species-a physics phase.
  const ViolationModel zero;
  const double a_accel =
      free_fall_acceleration(run.pair.species_a, zero, run.pair.environment,
                             run.config.sequence.launch_velocity, 0.0);
  const double T = run.effective_T();
  const double phase_a0 =
      interferometer_phase(run.pair.species_a, a_accel, run.pair.chirp_rate_a,
                           T, run.config.sequence.diffraction_order);
  const double phase_b0 =
      interferometer_phase(run.pair.species_b,
                           free_fall_acceleration(run.pair.species_b, zero,
                                                  run.pair.environment,
                                                  run.config.sequence.launch_velocity,
                                                  0.0),
                           run.pair.chirp_rate_b, T,
                           run.config.sequence.diffraction_order);

  for (int j = 0; j < 40; ++j) {
    const auto rec =
        simulate_shot(run.config.sequence, noise, run.pair, 99, 0, j);
    const double xa = 0.5 + 0.25 * std::cos(phase_a0 + rec.scan_phase);
    const double yb = 0.5 + 0.25 * std::cos(phase_b0 + rec.scan_phase);
    CHECK(rec.pop_a == doctest::Approx(xa).epsilon(1e-12));
    CHECK(rec.pop_b == doctest::Approx(yb).epsilon(1e-12));
    // Same point expressed through the differential phase.
    const double t = phase_a0 + rec.scan_phase;
    CHECK(rec.pop_b ==
          doctest::Approx(0.5 + 0.25 * std::cos(t - (phase_a0 - phase_b0)))
              .epsilon(1e-12));
  }
  // Auto chirps put the differential phase at the pi/2 operating point
  // (to the chirp arithmetic's ulp, a few nrad).
  CHECK(std::abs(phi_d - M_PI / 2.0) < 1e-8);
}

TEST_CASE("simulate_campaign: paper configuration dimensions") {
  auto run = default_run();
  run.config.sequence.num_ellipses = 520;
  run.config.sequence.shots_per_ellipse = 40;
  const auto campaign = simulate_campaign(run.config.sequence, run.config.noise,
                                          run.pair, 5);
  CHECK(campaign.records.size() == 20800);
  // Timestamps advance by 3.5 s within an ellipse; the campaign spans
  // 520 periods of 140 s = 72800 s.
  CHECK(campaign.records[1].timestamp - campaign.records[0].timestamp ==
        doctest::Approx(3.5));
  const double last = campaign.records.back().timestamp;
  CHECK(last == doctest::Approx(519 * 140.0 + 39 * 3.5));
  CHECK(last + 3.5 == doctest::Approx(72800.0));

  for (size_t i = 1; i < 200; ++i)
    CHECK(campaign.records[i].timestamp > campaign.records[i - 1].timestamp);
}

TEST_CASE("simulate_campaign: single group and minimal group warning") {
  auto run = default_run();
  run.config.sequence.num_ellipses = 1;
  run.config.sequence.shots_per_ellipse = 40;
  const auto one = simulate_campaign(run.config.sequence, run.config.noise,
                                     run.pair, 5);
  CHECK(one.records.size() == 40);
  CHECK(one.diagnostics.warnings.empty());

  run.config.sequence.shots_per_ellipse = 5;
  const auto minimal = simulate_campaign(run.config.sequence, run.config.noise,
                                         run.pair, 5);
  CHECK(minimal.records.size() == 5);
  REQUIRE(minimal.diagnostics.warnings.size() == 1);

  run.config.sequence.shots_per_ellipse = 4;
  CHECK_THROWS_AS(simulate_campaign(run.config.sequence, run.config.noise,
                                    run.pair, 5),
                  ConfigError);
}

TEST_CASE("simulate_campaign: populations stay in [0,1] and clamps are counted") {
  auto run = default_run();
  run.config.sequence.num_ellipses = 10;
  NoiseConfig noise;
  noise.detection_sigma = 0.5;  // drives many samples out of range
  noise.offset_a = 0.9;
  noise.contrast_a = 1.0;
  const auto campaign =
      simulate_campaign(run.config.sequence, noise, run.pair, 31);
  for (const auto& r : campaign.records) {
    CHECK(r.pop_a >= 0.0);
    CHECK(r.pop_a <= 1.0);
    CHECK(r.pop_b >= 0.0);
    CHECK(r.pop_b <= 1.0);
  }
  CHECK(campaign.diagnostics.clamp_count > 0);
}

TEST_CASE("simulate_campaign: bitwise reproducibility and thread independence") {
  auto run = default_run();
  run.config.sequence.num_ellipses = 12;
  NoiseConfig noise;
  noise.vibration_phase_sigma = 1.5;
  noise.detection_sigma = 0.01;

  const auto c1 = simulate_campaign(run.config.sequence, noise, run.pair, 2024, 1);
  const auto c2 = simulate_campaign(run.config.sequence, noise, run.pair, 2024, 1);
  const auto c4 = simulate_campaign(run.config.sequence, noise, run.pair, 2024, 4);
  REQUIRE(c1.records.size() == c2.records.size());
  REQUIRE(c1.records.size() == c4.records.size());
  for (size_t i = 0; i < c1.records.size(); ++i) {
    CHECK(c1.records[i].pop_a == c2.records[i].pop_a);
    CHECK(c1.records[i].pop_b == c2.records[i].pop_b);
    CHECK(c1.records[i].pop_a == c4.records[i].pop_a);
    CHECK(c1.records[i].pop_b == c4.records[i].pop_b);
  }
}

TEST_CASE("common-mode rejection: equal k keeps the cloud on one exact ellipse") {
  auto run = default_run();
  run.pair.species_b.effective_wave_vector =
      run.pair.species_a.effective_wave_vector;
  run.config.sequence.num_ellipses = 1;
  NoiseConfig noise;
  noise.vibration_phase_sigma = 3.0;

  const auto campaign =
      simulate_campaign(run.config.sequence, noise, run.pair, 77);
  // With k_b/k_a = 1 the vibration phase is common to both species: every
  // point satisfies the same two-channel parametrization with a constant
  // differential phase, whatever the vibration draw.
  const double phi_d = predicted_differential_phase(run.config.sequence, run.pair);
  for (const auto& r : campaign.records) {
    // Invert x for the common phase (up to cos ambiguity), then check y.
    const double cx = (r.pop_a - 0.5) / 0.25;
    REQUIRE(std::abs(cx) <= 1.0);
    const double t = std::acos(cx);
    const double y_plus = 0.5 + 0.25 * std::cos(t - phi_d);
    const double y_minus = 0.5 + 0.25 * std::cos(-t - phi_d);
    const bool on_ellipse = std::abs(r.pop_b - y_plus) < 1e-9 ||
                            std::abs(r.pop_b - y_minus) < 1e-9;
    CHECK(on_ellipse);
  }
}

TEST_CASE("state-prep leakage dilutes contrast and shifts the offset") {
  auto run = default_run();
  NoiseConfig noise;
  noise.state_prep_leakage = 0.1;
  // Purity 1/(1+0.1): contrast*purity, offset pulled toward 1/2.
  const double purity = 1.0 / 1.1;
  const ViolationModel zero;
  const double a_accel =
      free_fall_acceleration(run.pair.species_a, zero, run.pair.environment,
                             run.config.sequence.launch_velocity, 0.0);
  run.pair.chirp_rate_a = run.pair.species_a.effective_wave_vector * a_accel;
  const auto rec = simulate_shot(run.config.sequence, noise, run.pair, 7, 0, 0);
  const double expected =
      (0.5 * purity + 0.5 * (1.0 - purity)) + 0.5 * 0.5 * purity * 1.0;
  CHECK(rec.pop_a == doctest::Approx(expected).epsilon(1e-12));
}
