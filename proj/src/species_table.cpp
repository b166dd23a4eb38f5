#include "wepsim/species_table.hpp"

#include <algorithm>
#include <sstream>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/ini.hpp"

namespace wepsim {

namespace c = constants;

StateSelector StateSelector::parse(const std::string& text) {
  StateSelector sel;
  std::istringstream in(text);
  std::string token;
  bool have_f = false;
  while (in >> token) {
    if (token.rfind("F=", 0) == 0) {
      sel.hyperfine_F = static_cast<int>(ini_to_int("F", token.substr(2)));
      have_f = true;
    } else if (token.rfind("mF=", 0) == 0) {
      sel.magnetic_mF = static_cast<int>(ini_to_int("mF", token.substr(3)));
    } else if (sel.isotope.empty()) {
      sel.isotope = token;
    } else {
      throw ConfigError("state selector '" + text + "': unexpected token '" +
                        token + "'");
    }
  }
  if (sel.isotope.empty() || !have_f)
    throw ConfigError("state selector '" + text +
                      "': expected '<isotope> F=<n> [mF=<n>]'");
  return sel;
}

std::string StateSelector::to_string() const {
  return isotope + " F=" + std::to_string(hyperfine_F) +
         " mF=" + std::to_string(magnetic_mF);
}

SpeciesTable SpeciesTable::builtin() {
  SpeciesTable t;
  t.records_ = {
      // masses: AME2020; splittings and D2 reference: Steck alkali data.
      {"87Rb", 1, c::rb87_mass_kg, 0.0, c::rb87_keff_rad_per_m},
      {"87Rb", 2, c::rb87_mass_kg, c::planck * c::rb87_hyperfine_hz,
       c::rb87_keff_rad_per_m},
      {"85Rb", 2, c::rb85_mass_kg, 0.0, c::rb85_keff_rad_per_m},
      {"85Rb", 3, c::rb85_mass_kg, c::planck * c::rb85_hyperfine_hz,
       c::rb85_keff_rad_per_m},
  };
  return t;
}

SpeciesTable SpeciesTable::from_file(const std::string& path) {
  const IniDocument doc = load_ini(path);
  SpeciesTable t;
  for (const auto& sec : doc.sections) {
    // Section names look like "87Rb F=1".
    std::istringstream in(sec.name);
    SpeciesRecord rec;
    std::string ftoken;
    if (!(in >> rec.isotope >> ftoken) || ftoken.rfind("F=", 0) != 0)
      throw ConfigError(path + ": section '[" + sec.name +
                        "]' must be '[<isotope> F=<n>]'");
    rec.hyperfine_F = static_cast<int>(ini_to_int("F", ftoken.substr(2)));

    for (const char* key : {"mass_kg", "hyperfine_energy_J", "k_eff_rad_per_m"})
      if (!sec.has(key))
        throw ConfigError(path + ": section '[" + sec.name + "]' missing key '" +
                          std::string(key) + "'");
    rec.mass_kg = ini_to_double("mass_kg", *sec.find("mass_kg"));
    rec.hyperfine_energy_J =
        ini_to_double("hyperfine_energy_J", *sec.find("hyperfine_energy_J"));
    rec.k_eff_rad_per_m =
        ini_to_double("k_eff_rad_per_m", *sec.find("k_eff_rad_per_m"));
    t.records_.push_back(rec);
  }
  if (t.records_.empty()) throw ConfigError(path + ": species table is empty");
  return t;
}

SpeciesState SpeciesTable::resolve(const StateSelector& sel) const {
  for (const auto& rec : records_) {
    if (rec.isotope == sel.isotope && rec.hyperfine_F == sel.hyperfine_F) {
      SpeciesState s;
      s.isotope_label = rec.isotope;
      s.inertial_mass = rec.mass_kg;
      s.hyperfine_F = rec.hyperfine_F;
      s.magnetic_mF = sel.magnetic_mF;
      s.internal_energy = rec.hyperfine_energy_J;
      s.effective_wave_vector = rec.k_eff_rad_per_m;
      s.validate();
      return s;
    }
  }
  throw UnknownStateError("no species record for '" + sel.to_string() + "'");
}

std::string SpeciesTable::serialize() const {
  IniDocument doc;
  for (const auto& rec : records_) {
    IniSection sec;
    sec.name = rec.isotope + " F=" + std::to_string(rec.hyperfine_F);
    sec.set("mass_kg", format_double(rec.mass_kg));
    sec.set("hyperfine_energy_J", format_double(rec.hyperfine_energy_J));
    sec.set("k_eff_rad_per_m", format_double(rec.k_eff_rad_per_m));
    doc.sections.push_back(std::move(sec));
  }
  return serialize_ini(doc);
}

std::vector<int> hyperfine_levels(const SpeciesTable& table,
                                  const std::string& isotope) {
  std::vector<int> levels;
  for (const auto& rec : table.records())
    if (rec.isotope == isotope) levels.push_back(rec.hyperfine_F);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty())
    throw UnknownStateError("no species records for isotope '" + isotope + "'");
  return levels;
}

}  // namespace wepsim
