#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wepsim/errors.hpp"
#include "wepsim/pipeline.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string budget_path;
  std::string format = "text";
  std::optional<int> threads;
};

wepsim::RunConfig load_config(const GlobalOptions& opt) {
  wepsim::RunConfig cfg;
  std::string path = opt.config_path;
  if (path.empty()) {
    // The environment can supply the config path, nothing else.
    if (const char* env = std::getenv("WEPSIM_CONFIG")) path = env;
  }
  if (!path.empty()) cfg = wepsim::load_run_config(path);
  if (opt.seed) cfg.seed = opt.seed;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (!opt.budget_path.empty()) cfg.budget.file = opt.budget_path;
  if (opt.threads) cfg.threads = *opt.threads;
  if (cfg.budget.file.empty()) cfg.budget.file = "data/budget_table1.txt";
  return cfg;
}

void add_global_options(CLI::App* cmd, GlobalOptions& opt) {
  cmd->add_option("--config", opt.config_path,
                  "Run configuration file (or set WEPSIM_CONFIG)");
  cmd->add_option("--seed", opt.seed, "Root seed, overrides the config");
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--budget", opt.budget_path, "Budget table file");
  cmd->add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--threads", opt.threads, "Worker threads for simulation");
}

void print_analysis(const wepsim::AnalysisResult& analysis,
                    const std::string& format) {
  if (format == "json") {
    std::cout << wepsim::analysis_to_json(analysis);
    return;
  }
  std::cout << "ellipses fitted:     " << analysis.per_ellipse.size() << "\n";
  std::cout << "mean raw eta:        "
            << wepsim::format_eta_e10(analysis.mean_raw_eta) << "e-10\n";
  std::cout << "stat uncertainty:    "
            << wepsim::format_eta_e10(analysis.stat_uncertainty) << "e-10";
  if (analysis.stat_tau > 0.0)
    std::cout << "  (Allan deviation at tau=" << analysis.stat_tau << " s)";
  std::cout << "\n";
  if (analysis.slope)
    std::cout << "Allan log-log slope: " << analysis.slope->exponent << "\n";
}

void print_estimate(const wepsim::EtaEstimate& estimate,
                    const std::string& format) {
  if (format == "json")
    std::cout << wepsim::budget_to_json(estimate);
  else
    std::cout << wepsim::format_budget_report(estimate)
              << "\neta = (" << wepsim::format_eta_e10(estimate.value) << " +- "
              << wepsim::format_eta_e10(estimate.uncertainty) << ") x 1e-10\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-species atom-interferometer equivalence-principle "
               "test: simulation, ellipse-fit analysis, and error budget"};
  app.require_subcommand(1);

  GlobalOptions opt;
  std::string shots_csv;
  std::optional<double> raw_e10, raw_unc_e10;

  auto* simulate = app.add_subcommand(
      "simulate", "Simulate a measurement campaign and fit every ellipse");
  add_global_options(simulate, opt);

  auto* analyze = app.add_subcommand(
      "analyze", "Ellipse-fit + Allan analysis of a shot CSV");
  analyze->add_option("shots", shots_csv, "Campaign shot CSV")->required();
  add_global_options(analyze, opt);

  auto* budget = app.add_subcommand(
      "budget", "Combine a systematic error budget table");
  budget->add_option("--raw", raw_e10,
                     "Override the raw measurement (1e-10 eta units)");
  budget->add_option("--raw-unc", raw_unc_e10,
                     "Override the raw uncertainty (1e-10 eta units)");
  add_global_options(budget, opt);

  auto* e2e = app.add_subcommand(
      "e2e", "Full pipeline: simulate, fit, Allan, budget, final report");
  add_global_options(e2e, opt);

  auto* species = app.add_subcommand("species", "Dump the species table");
  add_global_options(species, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(wepsim::ExitCode::config);
  }

  try {
    const wepsim::RunConfig cfg = load_config(opt);

    if (species->parsed()) {
      const auto table = cfg.species_table_file.empty()
                             ? wepsim::SpeciesTable::builtin()
                             : wepsim::SpeciesTable::from_file(
                                   cfg.species_table_file);
      std::cout << table.serialize();
      return static_cast<int>(wepsim::ExitCode::ok);
    }
    if (budget->parsed()) {
      const auto estimate = wepsim::run_budget(
          cfg.budget.file,
          raw_e10 ? std::optional<double>(*raw_e10 * 1e-10) : std::nullopt,
          raw_unc_e10 ? std::optional<double>(*raw_unc_e10 * 1e-10)
                      : std::nullopt,
          cfg.output_dir);
      print_estimate(estimate, opt.format);
      return static_cast<int>(wepsim::ExitCode::ok);
    }

    const wepsim::ResolvedRun run = wepsim::resolve_run(cfg);
    if (simulate->parsed()) {
      const auto analysis = wepsim::run_simulate(run, cfg.output_dir);
      print_analysis(analysis, opt.format);
    } else if (analyze->parsed()) {
      const auto analysis = wepsim::run_analyze(shots_csv, run, cfg.output_dir);
      print_analysis(analysis, opt.format);
    } else if (e2e->parsed()) {
      const auto result = wepsim::run_e2e(run, cfg.budget.file, cfg.output_dir);
      print_analysis(result.analysis, opt.format);
      std::cout << "\n";
      print_estimate(result.estimate, opt.format);
    }
    return static_cast<int>(wepsim::ExitCode::ok);
  } catch (const wepsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(wepsim::ExitCode::config);
  } catch (const wepsim::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return static_cast<int>(wepsim::ExitCode::data);
  } catch (const wepsim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return static_cast<int>(wepsim::ExitCode::numerical);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(wepsim::ExitCode::internal);
  }
}
