#ifndef WEPSIM_CONFIG_HPP
#define WEPSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "wepsim/budget.hpp"
#include "wepsim/physics.hpp"
#include "wepsim/sequence.hpp"
#include "wepsim/species_table.hpp"

namespace wepsim {

// Per-leg overrides on top of the shared violation coefficients. A single
// shared model shifts both species identically and cancels in the
// differential, so injecting a nonzero Eotvos parameter requires telling
// the legs apart.
struct ViolationOverrides {
  std::optional<double> eta_mass;
  std::optional<double> eta_internal;
  std::optional<double> coupling_kinetic;
  std::optional<double> coupling_dilation;
  std::optional<double> coupling_mass_potential;

  bool operator==(const ViolationOverrides&) const = default;
  ViolationModel apply(ViolationModel base) const;
};

struct BudgetConfig {
  std::string file;  // budget table path; may be overridden by --budget
  bool use_computed_wave_vector = true;
  bool use_computed_gravity_gradient = false;
  TrajectoryOffsets gradient_offsets{1.0e-3, 3.638964e-3};
  double gradient_uncertainty = 1.2e-10;

  bool operator==(const BudgetConfig&) const = default;
};

struct RunConfig {
  std::optional<uint64_t> seed;  // must be set explicitly before simulating
  std::string output_dir = "out";
  int threads = 1;

  std::string species_table_file;  // empty -> built-in table
  StateSelector state_a{"87Rb", 1, 0};
  StateSelector state_b{"85Rb", 2, 0};

  SequenceConfig sequence;
  NoiseConfig noise;
  ViolationModel violation;          // shared coefficients
  ViolationOverrides violation_a;    // per-leg overrides
  ViolationOverrides violation_b;
  EnvironmentModel environment;
  BudgetConfig budget;

  // nullopt -> auto: both legs chirped at kbar*g, so the chirp difference
  // is zero and the raw eta carries the full wave-vector offset.
  std::optional<double> chirp_rate_a;
  std::optional<double> chirp_rate_b;

  uint64_t require_seed() const;  // throws ConfigError when unset
};

bool operator==(const StateSelector& a, const StateSelector& b);
bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig parse_run_config(const std::string& text, const std::string& origin = "");
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

// Selectors resolved against the table, chirps resolved, partner levels
// attached: everything the simulation and analysis stages share.
struct ResolvedRun {
  RunConfig config;
  SpeciesTable table;
  InterferometerPair pair;

  double effective_T() const {
    return config.sequence.T_free_evolution +
           config.sequence.pulse_timing_offset;
  }
  double chirp_difference() const {
    return pair.chirp_rate_a - pair.chirp_rate_b;
  }
};

ResolvedRun resolve_run(const RunConfig& cfg);

}  // namespace wepsim

#endif  // WEPSIM_CONFIG_HPP
