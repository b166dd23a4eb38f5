#include "wepsim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/rng.hpp"

namespace wepsim {

namespace c = constants;

double SequenceConfig::resolved_scan_step() const {
  return scan_phase_step > 0.0 ? scan_phase_step
                               : c::two_pi / shots_per_ellipse;
}

void SequenceConfig::validate() const {
  if (shots_per_ellipse < 5)
    throw ConfigError("sequence: shots_per_ellipse must be >= 5 (conic minimum)");
  if (!(T_free_evolution > 0.0))
    throw ConfigError("sequence: free evolution time must be > 0");
  if (!(T_free_evolution + pulse_timing_offset > 0.0))
    throw ConfigError("sequence: pulse timing offset cancels the free evolution time");
  if (num_ellipses < 1) throw ConfigError("sequence: num_ellipses must be >= 1");
  if (!(ellipse_period > 0.0))
    throw ConfigError("sequence: ellipse_period must be > 0");
  if (diffraction_order != 1 && diffraction_order != 2)
    throw ConfigError("sequence: diffraction_order must be 1 or 2");
  if (scan_phase_step < 0.0)
    throw ConfigError("sequence: scan_phase_step must be >= 0");
}

void NoiseConfig::validate() const {
  if (vibration_phase_sigma < 0.0 || detection_sigma < 0.0)
    throw ConfigError("noise: sigmas must be >= 0");
  for (double contrast : {contrast_a, contrast_b})
    if (!(contrast > 0.0 && contrast <= 1.0))
      throw ConfigError("noise: contrasts must lie in (0,1]");
  for (double offset : {offset_a, offset_b})
    if (!(offset >= 0.0 && offset <= 1.0))
      throw ConfigError("noise: offsets must lie in [0,1]");
  if (!(state_prep_leakage >= 0.0 && state_prep_leakage < 1.0))
    throw ConfigError("noise: state_prep_leakage must lie in [0,1)");
}

PopulationMap select_state(const PopulationMap& initial,
                           const StateSelection& selection) {
  if (initial.empty()) return {};

  double total = 0.0;
  for (const auto& [level, fraction] : initial) {
    if (std::find(selection.levels.begin(), selection.levels.end(), level) ==
        selection.levels.end())
      throw UnknownStateError("select_state: unknown hyperfine level F=" +
                              std::to_string(level));
    if (fraction < 0.0)
      throw DataError("select_state: population fractions must be >= 0");
    total += fraction;
  }
  if (total > 1.0 + 1e-12)
    throw DataError("select_state: population fractions must sum to <= 1");
  if (std::find(selection.levels.begin(), selection.levels.end(),
                selection.target_F) == selection.levels.end())
    throw UnknownStateError("select_state: unknown target level F=" +
                            std::to_string(selection.target_F));

  // pi pulse shelves the target sample; blow-away clears the addressed
  // level(s) down to the leakage fraction; the second pi returns the
  // sample; repump has nothing left to move in a two-level manifold.
  PopulationMap after = initial;
  double shelved = 0.0;
  if (auto it = after.find(selection.target_F); it != after.end()) {
    shelved = it->second;
    it->second = 0.0;
  }
  for (auto& [level, fraction] : after) fraction *= selection.leakage;
  after[selection.target_F] = shelved;

  double detected = 0.0;
  for (const auto& [level, fraction] : after) detected += fraction;
  if (detected > 0.0)
    for (auto& [level, fraction] : after) fraction /= detected;
  return after;
}

double fringe_population(double total_phase, double contrast, double offset,
                         bool* clamped) {
  const double raw = offset + 0.5 * contrast * std::cos(total_phase);
  const double result = std::clamp(raw, 0.0, 1.0);
  if (clamped) *clamped = (result != raw);
  return result;
}

namespace {

struct ReadoutParams {
  double contrast;
  double offset;
};

// Atoms leaking through the blow-away in the wrong F state fluoresce but
// do not interfere; they dilute the contrast and pull the offset toward
// their mean detected level of 1/2.
ReadoutParams fold_state_prep(double contrast, double offset, double purity) {
  return {contrast * purity, offset * purity + 0.5 * (1.0 - purity)};
}

double prep_purity(const NoiseConfig& noise, int target_F, int partner_F) {
  if (noise.state_prep_leakage == 0.0 || target_F == partner_F) return 1.0;
  const StateSelection sel{{std::min(target_F, partner_F),
                            std::max(target_F, partner_F)},
                           target_F,
                           noise.state_prep_leakage};
  // Launched clouds are split evenly across the two hyperfine levels.
  const PopulationMap after =
      select_state({{target_F, 0.5}, {partner_F, 0.5}}, sel);
  return after.at(target_F);
}

}  // namespace

ShotRecord simulate_shot(const SequenceConfig& cfg, const NoiseConfig& noise,
                         const InterferometerPair& pair, uint64_t seed,
                         long ellipse_index, long shot_in_ellipse,
                         CampaignDiagnostics* diagnostics) {
  const double T = cfg.T_free_evolution + cfg.pulse_timing_offset;
  const double accel_a =
      free_fall_acceleration(pair.species_a, pair.violation_a, pair.environment,
                             cfg.launch_velocity, 0.0);
  const double accel_b =
      free_fall_acceleration(pair.species_b, pair.violation_b, pair.environment,
                             cfg.launch_velocity, 0.0);
  const double phase_a = interferometer_phase(pair.species_a, accel_a,
                                              pair.chirp_rate_a, T,
                                              cfg.diffraction_order);
  const double phase_b = interferometer_phase(pair.species_b, accel_b,
                                              pair.chirp_rate_b, T,
                                              cfg.diffraction_order);

  const double scan = shot_in_ellipse * cfg.resolved_scan_step();

  ShotRng rng(seed, static_cast<uint64_t>(ellipse_index),
              static_cast<uint64_t>(shot_in_ellipse));
  // Fixed draw order: vibration, detection a, detection b.
  const double vibration = rng.normal() * noise.vibration_phase_sigma;
  const double det_a = rng.normal() * noise.detection_sigma;
  const double det_b = rng.normal() * noise.detection_sigma;

  const double k_ref = pair.species_a.effective_wave_vector;
  const double total_a = phase_a + scan + vibration;
  const double total_b =
      phase_b + scan +
      vibration * (pair.species_b.effective_wave_vector / k_ref);

  const double purity_a =
      prep_purity(noise, pair.species_a.hyperfine_F, pair.partner_F_a);
  const double purity_b =
      prep_purity(noise, pair.species_b.hyperfine_F, pair.partner_F_b);
  const auto readout_a = fold_state_prep(noise.contrast_a, noise.offset_a, purity_a);
  const auto readout_b = fold_state_prep(noise.contrast_b, noise.offset_b, purity_b);

  bool clamped_fringe_a = false, clamped_fringe_b = false;
  double pop_a = fringe_population(total_a, readout_a.contrast,
                                   readout_a.offset, &clamped_fringe_a);
  double pop_b = fringe_population(total_b, readout_b.contrast,
                                   readout_b.offset, &clamped_fringe_b);

  long clamps = (clamped_fringe_a ? 1 : 0) + (clamped_fringe_b ? 1 : 0);
  const double noisy_a = pop_a + det_a;
  const double noisy_b = pop_b + det_b;
  pop_a = std::clamp(noisy_a, 0.0, 1.0);
  pop_b = std::clamp(noisy_b, 0.0, 1.0);
  clamps += (pop_a != noisy_a ? 1 : 0) + (pop_b != noisy_b ? 1 : 0);
  if (diagnostics) diagnostics->clamp_count += clamps;

  ShotRecord rec;
  rec.ellipse_index = ellipse_index;
  rec.shot_index = ellipse_index * cfg.shots_per_ellipse + shot_in_ellipse;
  rec.timestamp = ellipse_index * cfg.ellipse_period +
                  shot_in_ellipse * cfg.shot_cycle_time();
  rec.scan_phase = scan;
  rec.pop_a = pop_a;
  rec.pop_b = pop_b;
  return rec;
}

Campaign simulate_campaign(const SequenceConfig& cfg, const NoiseConfig& noise,
                           const InterferometerPair& pair, uint64_t seed,
                           int n_threads) {
  cfg.validate();
  noise.validate();
  pair.species_a.validate();
  pair.species_b.validate();
  pair.violation_a.validate();
  pair.violation_b.validate();
  pair.environment.validate();
  if (n_threads < 1) throw ConfigError("simulate_campaign: n_threads must be >= 1");

  Campaign campaign;
  const long total = static_cast<long>(cfg.num_ellipses) * cfg.shots_per_ellipse;
  campaign.records.resize(static_cast<size_t>(total));

  if (cfg.shots_per_ellipse < 10)
    campaign.diagnostics.warnings.push_back(
        "shots_per_ellipse=" + std::to_string(cfg.shots_per_ellipse) +
        " is close to the 5-point conic minimum; fits will be fragile");

  const int workers = std::min<long>(n_threads, cfg.num_ellipses);
  auto run_range = [&](long first, long last, CampaignDiagnostics* diag) {
    for (long e = first; e < last; ++e)
      for (int j = 0; j < cfg.shots_per_ellipse; ++j)
        campaign.records[static_cast<size_t>(e) * cfg.shots_per_ellipse + j] =
            simulate_shot(cfg, noise, pair, seed, e, j, diag);
  };

  if (workers <= 1) {
    run_range(0, cfg.num_ellipses, &campaign.diagnostics);
  } else {
    std::vector<CampaignDiagnostics> worker_diag(workers);
    std::vector<std::thread> pool;
    const long chunk = (cfg.num_ellipses + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long first = w * chunk;
      const long last = std::min<long>(first + chunk, cfg.num_ellipses);
      pool.emplace_back(run_range, first, last, &worker_diag[w]);
    }
    for (auto& t : pool) t.join();
    for (const auto& d : worker_diag)
      campaign.diagnostics.clamp_count += d.clamp_count;
  }
  return campaign;
}

double predicted_differential_phase(const SequenceConfig& cfg,
                                    const InterferometerPair& pair) {
  const ViolationModel null_model;
  const double T = cfg.T_free_evolution + cfg.pulse_timing_offset;
  const double g_a = free_fall_acceleration(pair.species_a, null_model,
                                            pair.environment,
                                            cfg.launch_velocity, 0.0);
  const double g_b = free_fall_acceleration(pair.species_b, null_model,
                                            pair.environment,
                                            cfg.launch_velocity, 0.0);
  return interferometer_phase(pair.species_a, g_a, pair.chirp_rate_a, T,
                              cfg.diffraction_order) -
         interferometer_phase(pair.species_b, g_b, pair.chirp_rate_b, T,
                              cfg.diffraction_order);
}

}  // namespace wepsim
