#ifndef WEPSIM_BUDGET_HPP
#define WEPSIM_BUDGET_HPP

#include <string>
#include <vector>

#include "wepsim/physics.hpp"

namespace wepsim {

enum class EntryKind { raw_measurement, correction_term };

// One row of the systematic error budget. Values are plain dimensionless
// eta; the 1e-10 scaling appears only in the file format and reports.
struct BudgetEntry {
  std::string name;
  double correction = 0.0;
  double uncertainty = 0.0;
  EntryKind kind = EntryKind::correction_term;
};

struct EtaEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
  std::vector<BudgetEntry> entries;  // provenance, in combination order
};

// value = raw - sum(corrections); uncertainty = root-sum-square of every
// entry's uncertainty including the raw statistical one. Exactly one
// raw_measurement entry is required (MissingRawError / DuplicateRawError).
EtaEstimate combine_budget(const std::vector<BudgetEntry>& entries);

// Pass-through constructor for rows evaluated empirically in the lab
// (detector difference, Coriolis, wave-front, ac Stark, quadratic Zeeman,
// "Others"). Rejects negative uncertainties.
BudgetEntry static_entry(const std::string& name, double correction,
                         double uncertainty);

// Apparent eta a null-violation world produces because the two species
// carry different Raman wave vectors: (k1 - k2)/kbar. Its uncertainty is
// driven by the local-gravity uncertainty used in the subtraction.
BudgetEntry wave_vector_correction(const SpeciesState& species_a,
                                   const SpeciesState& species_b,
                                   const EnvironmentModel& env);

// Per-species launch-point mismatches for the gradient systematic.
struct TrajectoryOffsets {
  double delta_z0 = 0.0;  // m, initial position mismatch between species
  double delta_v0 = 0.0;  // m/s, initial velocity mismatch
};

// Leading gradient term: the species sample the gradient at positions
// separated by delta_z0 + delta_v0*T, giving an apparent
// eta = -Gamma*(delta_z0 + delta_v0*T)/g.
BudgetEntry gravity_gradient_correction(const EnvironmentModel& env,
                                        const TrajectoryOffsets& offsets,
                                        double T, double uncertainty);

// Plain-text budget file, one row per line:
//   name | correction_e-10 | uncertainty_e-10 | kind
// Doubles are serialized shortest-round-trip so read-back is bit exact.
std::vector<BudgetEntry> parse_budget(const std::string& text,
                                      const std::string& origin = "");
std::vector<BudgetEntry> load_budget(const std::string& path);
std::string serialize_budget(const std::vector<BudgetEntry>& entries);

// Aligned text table mirroring the budget layout, values in 1e-10 units
// rounded to one decimal at presentation only.
std::string format_budget_report(const EtaEstimate& estimate);

// One decimal in 1e-10 units, e.g. -4.4; presentation rounding only.
std::string format_eta_e10(double eta);

}  // namespace wepsim

#endif  // WEPSIM_BUDGET_HPP
