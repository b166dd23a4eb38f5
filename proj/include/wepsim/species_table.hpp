#ifndef WEPSIM_SPECIES_TABLE_HPP
#define WEPSIM_SPECIES_TABLE_HPP

#include <string>
#include <vector>

#include "wepsim/physics.hpp"

namespace wepsim {

// Parsed "87Rb F=1 mF=0" selector. mF defaults to 0 when omitted.
struct StateSelector {
  std::string isotope;
  int hyperfine_F = 0;
  int magnetic_mF = 0;

  static StateSelector parse(const std::string& text);
  std::string to_string() const;
};

struct SpeciesRecord {
  std::string isotope;
  int hyperfine_F = 0;
  double mass_kg = 0.0;
  double hyperfine_energy_J = 0.0;
  double k_eff_rad_per_m = 0.0;
};

// Table of isotope/F records. Ships with the rubidium constants built in;
// a plain-text key-value file can replace or extend them.
class SpeciesTable {
public:
  static SpeciesTable builtin();
  static SpeciesTable from_file(const std::string& path);

  // Resolves a selector to a full state. Throws UnknownStateError when the
  // isotope/F pair has no record.
  SpeciesState resolve(const StateSelector& sel) const;

  const std::vector<SpeciesRecord>& records() const { return records_; }

  // One [isotope F=..] section per record, in table order.
  std::string serialize() const;

private:
  std::vector<SpeciesRecord> records_;
};

// Labels used by the isotope's state-selection sequence: the two hyperfine
// F values of the isotope's ground manifold, in the table.
std::vector<int> hyperfine_levels(const SpeciesTable& table,
                                  const std::string& isotope);

}  // namespace wepsim

#endif  // WEPSIM_SPECIES_TABLE_HPP
