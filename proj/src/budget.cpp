#include "wepsim/budget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wepsim/errors.hpp"
#include "wepsim/ini.hpp"

namespace wepsim {

EtaEstimate combine_budget(const std::vector<BudgetEntry>& entries) {
  const BudgetEntry* raw = nullptr;
  for (const auto& entry : entries) {
    if (entry.uncertainty < 0.0)
      throw DataError("budget entry '" + entry.name +
                      "': uncertainty must be >= 0");
    if (entry.kind == EntryKind::raw_measurement) {
      if (raw != nullptr)
        throw DuplicateRawError("budget has more than one raw_measurement entry ('" +
                                raw->name + "' and '" + entry.name + "')");
      raw = &entry;
    }
  }
  if (raw == nullptr)
    throw MissingRawError("budget has no raw_measurement entry");

  EtaEstimate estimate;
  estimate.entries = entries;

  // Sum in sorted order so the result is independent of row order.
  std::vector<double> corrections, variances;
  for (const auto& entry : entries) {
    variances.push_back(entry.uncertainty * entry.uncertainty);
    if (entry.kind == EntryKind::correction_term)
      corrections.push_back(entry.correction);
  }
  std::sort(corrections.begin(), corrections.end());
  std::sort(variances.begin(), variances.end());

  estimate.value = raw->correction;
  for (const double correction : corrections) estimate.value -= correction;
  double variance = 0.0;
  for (const double v : variances) variance += v;
  estimate.uncertainty = std::sqrt(variance);
  return estimate;
}

BudgetEntry static_entry(const std::string& name, double correction,
                         double uncertainty) {
  if (uncertainty < 0.0)
    throw DataError("budget entry '" + name + "': uncertainty must be >= 0");
  return BudgetEntry{name, correction, uncertainty, EntryKind::correction_term};
}

BudgetEntry wave_vector_correction(const SpeciesState& species_a,
                                   const SpeciesState& species_b,
                                   const EnvironmentModel& env) {
  const double k1 = species_a.effective_wave_vector;
  const double k2 = species_b.effective_wave_vector;
  if (!(k1 > 0.0 && k2 > 0.0))
    throw ConfigError("wave_vector_correction: wave vectors must be > 0");
  const double k_mean = 0.5 * (k1 + k2);
  const double correction = (k1 - k2) / k_mean;
  const double uncertainty =
      std::abs(correction) * env.local_g_uncertainty / env.local_g;
  return BudgetEntry{"Effective wave vector", correction, uncertainty,
                     EntryKind::correction_term};
}

BudgetEntry gravity_gradient_correction(const EnvironmentModel& env,
                                        const TrajectoryOffsets& offsets,
                                        double T, double uncertainty) {
  if (!(T > 0.0))
    throw ConfigError("gravity_gradient_correction: T must be > 0");
  if (uncertainty < 0.0)
    throw DataError("gravity_gradient_correction: uncertainty must be >= 0");
  const double correction = -env.gravity_gradient *
                            (offsets.delta_z0 + offsets.delta_v0 * T) /
                            env.local_g;
  return BudgetEntry{"Gravity gradient", correction, uncertainty,
                     EntryKind::correction_term};
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

EntryKind parse_kind(const std::string& text, const std::string& where) {
  if (text == "raw_measurement") return EntryKind::raw_measurement;
  if (text == "correction_term") return EntryKind::correction_term;
  throw DataError(where + ": unknown entry kind '" + text + "'");
}

}  // namespace

std::vector<BudgetEntry> parse_budget(const std::string& text,
                                      const std::string& origin) {
  std::vector<BudgetEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const std::string prefix = origin.empty() ? "" : origin + ": ";
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = prefix + "line " + std::to_string(lineno);

    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const auto bar = line.find('|', start);
      fields.push_back(trim(line.substr(start, bar - start)));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (fields.size() != 4)
      throw DataError(where +
                      ": expected 'name | correction_e-10 | uncertainty_e-10 | kind'");
    BudgetEntry entry;
    entry.name = fields[0];
    if (entry.name.empty()) throw DataError(where + ": empty entry name");
    try {
      entry.correction = ini_to_double("correction", fields[1]) * 1e-10;
      entry.uncertainty = ini_to_double("uncertainty", fields[2]) * 1e-10;
    } catch (const ConfigError& err) {
      throw DataError(where + ": " + err.what());
    }
    if (entry.uncertainty < 0.0)
      throw DataError(where + ": uncertainty must be >= 0");
    entry.kind = parse_kind(fields[3], where);
    entries.push_back(entry);
  }
  if (entries.empty())
    throw DataError(prefix + "budget file contains no entries");
  return entries;
}

std::vector<BudgetEntry> load_budget(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open budget file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_budget(buf.str(), path);
}

std::string serialize_budget(const std::vector<BudgetEntry>& entries) {
  std::string out =
      "# systematic error budget; correction and uncertainty in 1e-10 eta units\n";
  for (const auto& entry : entries) {
    out += entry.name + " | " + format_double(entry.correction * 1e10) + " | " +
           format_double(entry.uncertainty * 1e10) + " | " +
           (entry.kind == EntryKind::raw_measurement ? "raw_measurement"
                                                     : "correction_term") +
           "\n";
  }
  return out;
}

std::string format_eta_e10(double eta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", eta * 1e10);
  // Avoid the "-0.0" artifact at presentation.
  if (std::string(buf) == "-0.0") return "0.0";
  return buf;
}

std::string format_budget_report(const EtaEstimate& estimate) {
  std::ostringstream out;
  out << std::left << std::setw(26) << "Parameters" << std::right
      << std::setw(14) << "eta (1e-10)" << std::setw(20)
      << "Uncertainty (1e-10)" << "\n";
  out << std::string(60, '-') << "\n";
  for (const auto& entry : estimate.entries) {
    out << std::left << std::setw(26) << entry.name << std::right
        << std::setw(14) << format_eta_e10(entry.correction) << std::setw(20)
        << format_eta_e10(entry.uncertainty) << "\n";
    if (entry.kind == EntryKind::raw_measurement)
      out << std::string(60, '-') << "\n";
  }
  out << std::string(60, '-') << "\n";
  out << std::left << std::setw(26) << "Total" << std::right << std::setw(14)
      << format_eta_e10(estimate.value) << std::setw(20)
      << format_eta_e10(estimate.uncertainty) << "\n";
  return out.str();
}

}  // namespace wepsim
