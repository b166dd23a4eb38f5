#ifndef WEPSIM_PIPELINE_HPP
#define WEPSIM_PIPELINE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wepsim/allan.hpp"
#include "wepsim/budget.hpp"
#include "wepsim/config.hpp"
#include "wepsim/csv.hpp"
#include "wepsim/ellipse.hpp"
#include "wepsim/sequence.hpp"

namespace wepsim {

struct EllipseAnalysis {
  long ellipse_index = 0;
  double timestamp = 0.0;  // s, first shot of the group
  EllipseFit fit;
  double eta_raw = 0.0;    // signed, wave-vector offset still included
};

struct AnalysisResult {
  std::vector<EllipseAnalysis> per_ellipse;
  EtaSeries series;
  AllanResult allan;
  std::optional<TauSlopeFit> slope;
  double mean_raw_eta = 0.0;
  // Statistical uncertainty of the mean raw eta, read off the Allan curve
  // at the largest octave tau not exceeding N/8 samples (the curve is still
  // well determined there); SEM fallback for very short series.
  double stat_uncertainty = 0.0;
  double stat_tau = 0.0;  // s; 0 means the SEM fallback was used

  std::vector<EtaSample> eta_samples() const;
};

// Groups shots by ellipse, fits every group, converts phases to raw eta,
// and attaches Allan statistics. Records are sorted by shot_index first so
// the result is independent of input order.
AnalysisResult analyze_records(std::span<const ShotRecord> records,
                               const ResolvedRun& run);

// simulate: writes shots.csv, fits.json, eta_series.csv, summary.json.
// The analysis is computed from the re-read CSV, so rerunning `analyze`
// on shots.csv reproduces eta_series.csv byte for byte.
AnalysisResult run_simulate(const ResolvedRun& run, const std::string& out_dir);

// analyze: reads a shot CSV and writes fits.json, eta_series.csv,
// allan.csv, allan_fit.json.
AnalysisResult run_analyze(const std::string& shot_csv, const ResolvedRun& run,
                           const std::string& out_dir);

// budget: combines a budget file, optionally overriding the raw
// measurement row (values in plain eta units). Writes budget_report.txt
// and budget_report.json when out_dir is nonempty.
EtaEstimate run_budget(const std::string& budget_file,
                       std::optional<double> raw_value,
                       std::optional<double> raw_uncertainty,
                       const std::string& out_dir);

struct E2EResult {
  AnalysisResult analysis;
  EtaEstimate estimate;
};

// e2e: simulate -> fit -> eta series -> budget combine -> final report,
// plus plot-data CSVs (ellipse points/fit samples, Allan log-log pairs).
// The budget's raw row is replaced by the simulated mean raw eta with its
// statistical uncertainty; the wave-vector row (and optionally the
// gravity-gradient row) is recomputed from the resolved species pair.
E2EResult run_e2e(const ResolvedRun& run, const std::string& budget_file,
                  const std::string& out_dir);

// Report bodies, exposed for the CLI's --format handling.
std::string analysis_to_json(const AnalysisResult& analysis);
std::string budget_to_json(const EtaEstimate& estimate);
std::string allan_fit_to_json(const AnalysisResult& analysis);

}  // namespace wepsim

#endif  // WEPSIM_PIPELINE_HPP
