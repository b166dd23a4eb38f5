#include "wepsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/eta.hpp"

namespace wepsim {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<EtaSample> AnalysisResult::eta_samples() const {
  std::vector<EtaSample> samples;
  samples.reserve(per_ellipse.size());
  for (const auto& e : per_ellipse)
    samples.push_back({e.ellipse_index, e.timestamp, e.eta_raw});
  return samples;
}

AnalysisResult analyze_records(std::span<const ShotRecord> records,
                               const ResolvedRun& run) {
  if (records.empty()) throw DataError("analyze: no shot records");

  std::vector<ShotRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ShotRecord& a, const ShotRecord& b) {
              return a.shot_index < b.shot_index;
            });

  std::map<long, std::vector<const ShotRecord*>> groups;
  for (const auto& r : sorted) groups[r.ellipse_index].push_back(&r);

  AnalysisResult result;
  const double T = run.effective_T();
  const int order = run.config.sequence.diffraction_order;
  const double g = run.config.environment.local_g;
  const double chirp_diff = run.chirp_difference();

  for (const auto& [index, shots] : groups) {
    if (shots.size() < 5)
      throw DataError("analyze: ellipse " + std::to_string(index) +
                      " has only " + std::to_string(shots.size()) +
                      " shots (need >= 5)");
    std::vector<PointXY> points;
    points.reserve(shots.size());
    for (const auto* s : shots) points.push_back({s->pop_a, s->pop_b});

    EllipseAnalysis ea;
    ea.ellipse_index = index;
    ea.timestamp = shots.front()->timestamp;
    ea.fit = fit_ellipse(points);
    ea.eta_raw = phase_to_eta(ea.fit, run.pair.species_a, run.pair.species_b,
                              T, order, g, chirp_diff);
    result.per_ellipse.push_back(std::move(ea));
  }

  result.series.sample_interval = run.config.sequence.ellipse_period;
  for (const auto& e : result.per_ellipse)
    result.series.values.push_back(e.eta_raw);

  const auto n = static_cast<double>(result.series.values.size());
  double mean = 0.0;
  for (double v : result.series.values) mean += v;
  result.mean_raw_eta = mean / n;

  if (result.series.values.size() >= 2) {
    const auto taus = octave_taus(result.series);
    result.allan = allan_deviation(result.series, taus);
    if (result.allan.points.size() >= 3) {
      try {
        result.slope = fit_tau_slope(result.allan.points);
      } catch (const DegenerateInput&) {
        result.slope.reset();  // e.g. an exactly constant series
      }
    }
  }

  // Statistical uncertainty of the campaign mean: Allan point at the
  // largest power-of-two m with m <= N/8 (N=520 lands on tau=8960 s).
  long m_stat = 0;
  for (long m = 1; m <= static_cast<long>(n) / 8; m *= 2) m_stat = m;
  const double tau_stat = m_stat * result.series.sample_interval;
  result.stat_tau = 0.0;
  if (m_stat >= 1) {
    for (const auto& p : result.allan.points) {
      if (std::abs(p.tau - tau_stat) < 1e-9 * tau_stat) {
        result.stat_uncertainty = p.deviation;
        result.stat_tau = p.tau;
      }
    }
  }
  if (result.stat_tau == 0.0) {
    double var = 0.0;
    for (double v : result.series.values)
      var += (v - result.mean_raw_eta) * (v - result.mean_raw_eta);
    result.stat_uncertainty =
        n > 1.0 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  }
  return result;
}

namespace {

ordered_json fit_to_json(const EllipseAnalysis& e) {
  ordered_json j;
  j["ellipse_index"] = e.ellipse_index;
  j["timestamp_s"] = e.timestamp;
  j["eta_raw"] = e.eta_raw;
  j["differential_phase_rad"] = e.fit.differential_phase;
  j["conic"] = e.fit.conic;
  j["contrast_x"] = e.fit.contrast_x;
  j["contrast_y"] = e.fit.contrast_y;
  j["center_x"] = e.fit.center_x;
  j["center_y"] = e.fit.center_y;
  j["rms_residual"] = e.fit.rms_residual;
  j["n_points"] = e.fit.n_points;
  j["non_ellipse_warning"] = e.fit.non_ellipse_warning;
  return j;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " +
                          ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_analysis_outputs(const AnalysisResult& analysis,
                            const std::string& out_dir, bool with_allan) {
  std::string fits = "[\n";
  for (size_t i = 0; i < analysis.per_ellipse.size(); ++i) {
    fits += fit_to_json(analysis.per_ellipse[i]).dump(2);
    fits += (i + 1 < analysis.per_ellipse.size()) ? ",\n" : "\n";
  }
  fits += "]\n";
  write_text_file(join(out_dir, "fits.json"), fits);

  const auto samples = analysis.eta_samples();
  write_eta_csv(join(out_dir, "eta_series.csv"), samples);

  if (with_allan) {
    write_allan_csv(join(out_dir, "allan.csv"), analysis.allan.points);
    write_text_file(join(out_dir, "allan_fit.json"),
                    allan_fit_to_json(analysis));
  }
}

}  // namespace

std::string allan_fit_to_json(const AnalysisResult& analysis) {
  ordered_json j;
  j["available"] = analysis.slope.has_value();
  if (analysis.slope) {
    j["exponent"] = analysis.slope->exponent;
    j["coefficient"] = analysis.slope->coefficient;
  }
  j["n_points"] = analysis.allan.points.size();
  j["warnings"] = analysis.allan.warnings;
  return j.dump(2) + "\n";
}

std::string analysis_to_json(const AnalysisResult& analysis) {
  ordered_json j;
  j["n_ellipses"] = analysis.per_ellipse.size();
  j["mean_raw_eta"] = analysis.mean_raw_eta;
  j["stat_uncertainty"] = analysis.stat_uncertainty;
  j["stat_tau_s"] = analysis.stat_tau;
  if (analysis.slope) {
    j["allan_slope_exponent"] = analysis.slope->exponent;
    j["allan_slope_coefficient"] = analysis.slope->coefficient;
  }
  return j.dump(2) + "\n";
}

std::string budget_to_json(const EtaEstimate& estimate) {
  ordered_json j;
  ordered_json entries = ordered_json::array();
  for (const auto& e : estimate.entries) {
    ordered_json row;
    row["name"] = e.name;
    row["correction_e10"] = e.correction * 1e10;
    row["uncertainty_e10"] = e.uncertainty * 1e10;
    row["kind"] = e.kind == EntryKind::raw_measurement ? "raw_measurement"
                                                       : "correction_term";
    entries.push_back(row);
  }
  j["entries"] = entries;
  j["value"] = estimate.value;
  j["uncertainty"] = estimate.uncertainty;
  j["value_e10"] = estimate.value * 1e10;
  j["uncertainty_e10"] = estimate.uncertainty * 1e10;
  j["value_e10_rounded"] = format_eta_e10(estimate.value);
  j["uncertainty_e10_rounded"] = format_eta_e10(estimate.uncertainty);
  return j.dump(2) + "\n";
}

AnalysisResult run_simulate(const ResolvedRun& run, const std::string& out_dir) {
  ensure_dir(out_dir);
  const uint64_t seed = run.config.require_seed();
  const Campaign campaign =
      simulate_campaign(run.config.sequence, run.config.noise, run.pair, seed,
                        run.config.threads);
  write_shot_csv(join(out_dir, "shots.csv"), campaign.records);

  // Analyze what was persisted, not the in-memory records, so analyze
  // reruns reproduce these outputs exactly.
  const auto reread = read_shot_csv(join(out_dir, "shots.csv"));
  AnalysisResult analysis = analyze_records(reread, run);
  write_analysis_outputs(analysis, out_dir, /*with_allan=*/false);

  ordered_json summary;
  summary["seed"] = seed;
  summary["species_a"] = run.config.state_a.to_string();
  summary["species_b"] = run.config.state_b.to_string();
  summary["n_shots"] = campaign.records.size();
  summary["n_ellipses"] = run.config.sequence.num_ellipses;
  summary["clamp_count"] = campaign.diagnostics.clamp_count;
  summary["warnings"] = campaign.diagnostics.warnings;
  summary["predicted_differential_phase_rad"] =
      predicted_differential_phase(run.config.sequence, run.pair);
  summary["mean_raw_eta"] = analysis.mean_raw_eta;
  summary["stat_uncertainty"] = analysis.stat_uncertainty;
  summary["stat_tau_s"] = analysis.stat_tau;
  write_text_file(join(out_dir, "summary.json"), summary.dump(2) + "\n");
  return analysis;
}

AnalysisResult run_analyze(const std::string& shot_csv, const ResolvedRun& run,
                           const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto records = read_shot_csv(shot_csv);
  AnalysisResult analysis = analyze_records(records, run);
  write_analysis_outputs(analysis, out_dir, /*with_allan=*/true);
  return analysis;
}

EtaEstimate run_budget(const std::string& budget_file,
                       std::optional<double> raw_value,
                       std::optional<double> raw_uncertainty,
                       const std::string& out_dir) {
  std::vector<BudgetEntry> entries = load_budget(budget_file);
  if (raw_value || raw_uncertainty) {
    BudgetEntry* raw = nullptr;
    for (auto& e : entries)
      if (e.kind == EntryKind::raw_measurement) {
        if (raw) throw DuplicateRawError("budget has more than one raw_measurement entry");
        raw = &e;
      }
    if (!raw) throw MissingRawError("budget has no raw_measurement entry to override");
    if (raw_value) raw->correction = *raw_value;
    if (raw_uncertainty) raw->uncertainty = *raw_uncertainty;
  }
  const EtaEstimate estimate = combine_budget(entries);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text_file(join(out_dir, "budget_report.txt"),
                    format_budget_report(estimate));
    write_text_file(join(out_dir, "budget_report.json"),
                    budget_to_json(estimate));
  }
  return estimate;
}

E2EResult run_e2e(const ResolvedRun& run, const std::string& budget_file,
                  const std::string& out_dir) {
  E2EResult result;
  result.analysis = run_simulate(run, out_dir);

  // Allan products belong to the analysis stage; the e2e run emits them too.
  write_allan_csv(join(out_dir, "allan.csv"), result.analysis.allan.points);
  write_text_file(join(out_dir, "allan_fit.json"),
                  allan_fit_to_json(result.analysis));

  std::vector<BudgetEntry> entries = load_budget(budget_file);
  int raw_count = 0;
  for (auto& e : entries) {
    if (e.kind == EntryKind::raw_measurement) {
      ++raw_count;
      e.correction = result.analysis.mean_raw_eta;
      e.uncertainty = result.analysis.stat_uncertainty;
    }
  }
  if (raw_count > 1)
    throw DuplicateRawError("budget has more than one raw_measurement entry");
  if (raw_count == 0)
    entries.insert(entries.begin(),
                   BudgetEntry{"Experimental data", result.analysis.mean_raw_eta,
                               result.analysis.stat_uncertainty,
                               EntryKind::raw_measurement});

  if (run.config.budget.use_computed_wave_vector) {
    const BudgetEntry computed = wave_vector_correction(
        run.pair.species_a, run.pair.species_b, run.config.environment);
    bool replaced = false;
    for (auto& e : entries)
      if (e.kind == EntryKind::correction_term && e.name == computed.name) {
        e.correction = computed.correction;
        e.uncertainty = computed.uncertainty;
        replaced = true;
      }
    if (!replaced) entries.push_back(computed);
  }
  if (run.config.budget.use_computed_gravity_gradient) {
    const BudgetEntry computed = gravity_gradient_correction(
        run.config.environment, run.config.budget.gradient_offsets,
        run.effective_T(), run.config.budget.gradient_uncertainty);
    bool replaced = false;
    for (auto& e : entries)
      if (e.kind == EntryKind::correction_term && e.name == computed.name) {
        e.correction = computed.correction;
        e.uncertainty = computed.uncertainty;
        replaced = true;
      }
    if (!replaced) entries.push_back(computed);
  }

  result.estimate = combine_budget(entries);
  write_text_file(join(out_dir, "final_report.txt"),
                  format_budget_report(result.estimate));
  write_text_file(join(out_dir, "final_report.json"),
                  budget_to_json(result.estimate));

  // Plot data: first ellipse's point cloud, samples along its fitted
  // ellipse, and the Allan curve as log-log pairs.
  if (!result.analysis.per_ellipse.empty()) {
    const auto& first = result.analysis.per_ellipse.front();
    const auto records = read_shot_csv(join(out_dir, "shots.csv"));
    std::string points = "pop_87,pop_85\n";
    for (const auto& r : records)
      if (r.ellipse_index == first.ellipse_index)
        points += format_sig12(r.pop_a) + "," + format_sig12(r.pop_b) + "\n";
    write_text_file(join(out_dir, "plot_ellipse_points.csv"), points);

    std::string curve = "pop_87,pop_85\n";
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
      const double theta = constants::two_pi * i / samples;
      const double x = first.fit.center_x +
                       0.5 * first.fit.contrast_x * std::cos(theta);
      const double y =
          first.fit.center_y +
          0.5 * first.fit.contrast_y *
              std::cos(theta + first.fit.differential_phase);
      curve += format_sig12(x) + "," + format_sig12(y) + "\n";
    }
    write_text_file(join(out_dir, "plot_ellipse_fit.csv"), curve);
  }
  {
    std::string loglog = "log10_tau_s,log10_adev\n";
    for (const auto& p : result.analysis.allan.points)
      if (p.deviation > 0.0)
        loglog += format_sig12(std::log10(p.tau)) + "," +
                  format_sig12(std::log10(p.deviation)) + "\n";
    write_text_file(join(out_dir, "plot_allan.csv"), loglog);
  }
  return result;
}

}  // namespace wepsim
