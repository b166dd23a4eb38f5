#ifndef WEPSIM_SEQUENCE_HPP
#define WEPSIM_SEQUENCE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wepsim/physics.hpp"

namespace wepsim {

struct SequenceConfig {
  double launch_velocity = 2.0;     // m/s
  double T_free_evolution = 0.203;  // s
  double pulse_timing_offset = 0.0; // s, shifts the effective T
  int shots_per_ellipse = 40;
  double ellipse_period = 140.0;    // s
  int num_ellipses = 520;
  double scan_phase_step = 0.0;     // rad; 0 means 2*pi/shots_per_ellipse
  int diffraction_order = 2;

  double resolved_scan_step() const;
  double shot_cycle_time() const { return ellipse_period / shots_per_ellipse; }
  void validate() const;
};

struct NoiseConfig {
  double vibration_phase_sigma = 0.0;  // rad, common mirror phase per shot
  double detection_sigma = 0.0;        // additive population noise per species
  double contrast_a = 0.5;
  double contrast_b = 0.5;
  double offset_a = 0.5;
  double offset_b = 0.5;
  double state_prep_leakage = 0.0;     // fraction surviving blow-away wrongly

  void validate() const;
};

// Everything simulate_shot needs from physics-core, resolved once.
// Species a is the reference leg: the common vibration phase is defined at
// its k_eff and scales onto species b by k_b/k_a. partner_F_* is the other
// hyperfine level of each isotope, used by the state-selection filter.
struct InterferometerPair {
  SpeciesState species_a;
  SpeciesState species_b;
  ViolationModel violation_a;
  ViolationModel violation_b;
  EnvironmentModel environment;
  double chirp_rate_a = 0.0;  // rad/s^2 equivalent (k*a units)
  double chirp_rate_b = 0.0;
  int partner_F_a = 0;
  int partner_F_b = 0;
};

struct ShotRecord {
  long ellipse_index = 0;
  long shot_index = 0;  // global, strictly increasing across the campaign
  double timestamp = 0.0;
  double scan_phase = 0.0;
  double pop_a = 0.0;  // written as pop_87 for the default pair
  double pop_b = 0.0;  // written as pop_85
};

struct CampaignDiagnostics {
  long clamp_count = 0;  // population samples clipped into [0,1]
  std::vector<std::string> warnings;
};

struct Campaign {
  std::vector<ShotRecord> records;
  CampaignDiagnostics diagnostics;
};

// Per-F population fractions of one isotope.
using PopulationMap = std::map<int, double>;

struct StateSelection {
  std::vector<int> levels;  // hyperfine levels of the isotope
  int target_F = 0;
  double leakage = 0.0;
};

// pi + blow-away + pi + repump state selection acting on level populations:
// the target level's sample is shelved through the blow-away, every other
// level keeps only `leakage` of its population, and the result is
// renormalized over the detected atoms. Empty input stays empty.
PopulationMap select_state(const PopulationMap& initial,
                           const StateSelection& selection);

// Two-port Mach-Zehnder readout, offset + (contrast/2)*cos(phase), clamped
// to [0,1]. clamped (optional) reports whether clipping happened.
double fringe_population(double total_phase, double contrast, double offset,
                         bool* clamped = nullptr);

// One interferometer shot. Deterministic in (seed, ellipse_index,
// shot_in_ellipse); execution order never matters.
ShotRecord simulate_shot(const SequenceConfig& cfg, const NoiseConfig& noise,
                         const InterferometerPair& pair, uint64_t seed,
                         long ellipse_index, long shot_in_ellipse,
                         CampaignDiagnostics* diagnostics = nullptr);

// Full campaign: num_ellipses groups of shots_per_ellipse records,
// timestamps advancing by ellipse_period/shots_per_ellipse. Fan-out over
// ellipses is allowed because every shot owns its own noise stream; the
// result is identical for any n_threads.
Campaign simulate_campaign(const SequenceConfig& cfg, const NoiseConfig& noise,
                           const InterferometerPair& pair, uint64_t seed,
                           int n_threads = 1);

// Differential phase (phase_a - phase_b) the pair produces for a
// noiseless, violation-free shot; the branch-lifting prediction.
double predicted_differential_phase(const SequenceConfig& cfg,
                                    const InterferometerPair& pair);

}  // namespace wepsim

#endif  // WEPSIM_SEQUENCE_HPP
