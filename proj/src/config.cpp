#include "wepsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/ini.hpp"

namespace wepsim {

ViolationModel ViolationOverrides::apply(ViolationModel base) const {
  if (eta_mass) base.eta_mass = *eta_mass;
  if (eta_internal) base.eta_internal = *eta_internal;
  if (coupling_kinetic) base.coupling_kinetic = *coupling_kinetic;
  if (coupling_dilation) base.coupling_dilation = *coupling_dilation;
  if (coupling_mass_potential)
    base.coupling_mass_potential = *coupling_mass_potential;
  return base;
}

uint64_t RunConfig::require_seed() const {
  if (!seed)
    throw ConfigError(
        "seed must be set explicitly ([run] seed = ... or --seed); "
        "time-derived defaults are not supported");
  return *seed;
}

bool operator==(const StateSelector& a, const StateSelector& b) {
  return a.isotope == b.isotope && a.hyperfine_F == b.hyperfine_F &&
         a.magnetic_mF == b.magnetic_mF;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  auto seq_eq = [](const SequenceConfig& x, const SequenceConfig& y) {
    return x.launch_velocity == y.launch_velocity &&
           x.T_free_evolution == y.T_free_evolution &&
           x.pulse_timing_offset == y.pulse_timing_offset &&
           x.shots_per_ellipse == y.shots_per_ellipse &&
           x.ellipse_period == y.ellipse_period &&
           x.num_ellipses == y.num_ellipses &&
           x.scan_phase_step == y.scan_phase_step &&
           x.diffraction_order == y.diffraction_order;
  };
  auto noise_eq = [](const NoiseConfig& x, const NoiseConfig& y) {
    return x.vibration_phase_sigma == y.vibration_phase_sigma &&
           x.detection_sigma == y.detection_sigma &&
           x.contrast_a == y.contrast_a && x.contrast_b == y.contrast_b &&
           x.offset_a == y.offset_a && x.offset_b == y.offset_b &&
           x.state_prep_leakage == y.state_prep_leakage;
  };
  auto viol_eq = [](const ViolationModel& x, const ViolationModel& y) {
    return x.eta_mass == y.eta_mass && x.eta_internal == y.eta_internal &&
           x.coupling_kinetic == y.coupling_kinetic &&
           x.coupling_dilation == y.coupling_dilation &&
           x.coupling_mass_potential == y.coupling_mass_potential;
  };
  auto env_eq = [](const EnvironmentModel& x, const EnvironmentModel& y) {
    return x.local_g == y.local_g &&
           x.local_g_uncertainty == y.local_g_uncertainty &&
           x.gravity_gradient == y.gravity_gradient &&
           x.rotation_rate == y.rotation_rate;
  };
  auto off_eq = [](const TrajectoryOffsets& x, const TrajectoryOffsets& y) {
    return x.delta_z0 == y.delta_z0 && x.delta_v0 == y.delta_v0;
  };
  return a.seed == b.seed && a.output_dir == b.output_dir &&
         a.threads == b.threads &&
         a.species_table_file == b.species_table_file &&
         a.state_a == b.state_a && a.state_b == b.state_b &&
         seq_eq(a.sequence, b.sequence) && noise_eq(a.noise, b.noise) &&
         viol_eq(a.violation, b.violation) &&
         a.violation_a == b.violation_a && a.violation_b == b.violation_b &&
         env_eq(a.environment, b.environment) &&
         a.budget.file == b.budget.file &&
         a.budget.use_computed_wave_vector == b.budget.use_computed_wave_vector &&
         a.budget.use_computed_gravity_gradient ==
             b.budget.use_computed_gravity_gradient &&
         off_eq(a.budget.gradient_offsets, b.budget.gradient_offsets) &&
         a.budget.gradient_uncertainty == b.budget.gradient_uncertainty &&
         a.chirp_rate_a == b.chirp_rate_a && a.chirp_rate_b == b.chirp_rate_b;
}

namespace {

class SectionReader {
public:
  SectionReader(const IniSection& sec, const std::string& origin)
      : sec_(sec), origin_(origin) {}

  ~SectionReader() = default;

  bool has(const std::string& key) {
    seen_.push_back(key);
    return sec_.has(key);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    return v ? *v : fallback;
  }
  double number(const std::string& key, double fallback) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    return v ? ini_to_double(where(key), *v) : fallback;
  }
  long long integer(const std::string& key, long long fallback) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    return v ? ini_to_int(where(key), *v) : fallback;
  }
  unsigned long long unsigned_integer(const std::string& key,
                                      unsigned long long fallback) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    return v ? ini_to_uint(where(key), *v) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    return v ? ini_to_bool(where(key), *v) : fallback;
  }
  std::optional<double> optional_number(const std::string& key) {
    seen_.push_back(key);
    const auto* v = sec_.find(key);
    if (!v || *v == "auto") return std::nullopt;
    return ini_to_double(where(key), *v);
  }

  void reject_unknown() const {
    for (const auto& [k, v] : sec_.entries) {
      bool known = false;
      for (const auto& s : seen_)
        if (s == k) known = true;
      if (!known)
        throw ConfigError(origin_ + "[" + sec_.name + "]: unknown key '" + k + "'");
    }
  }

private:
  std::string where(const std::string& key) const {
    return origin_ + "[" + sec_.name + "] " + key;
  }
  const IniSection& sec_;
  std::string origin_;
  std::vector<std::string> seen_;
};

void read_violation(SectionReader& r, ViolationModel& shared,
                    ViolationOverrides& a, ViolationOverrides& b) {
  shared.eta_mass = r.number("eta_mass", shared.eta_mass);
  shared.eta_internal = r.number("eta_internal", shared.eta_internal);
  shared.coupling_kinetic = r.number("coupling_kinetic", shared.coupling_kinetic);
  shared.coupling_dilation =
      r.number("coupling_dilation", shared.coupling_dilation);
  shared.coupling_mass_potential =
      r.number("coupling_mass_potential", shared.coupling_mass_potential);
  a.eta_mass = r.optional_number("eta_mass_a");
  b.eta_mass = r.optional_number("eta_mass_b");
  a.eta_internal = r.optional_number("eta_internal_a");
  b.eta_internal = r.optional_number("eta_internal_b");
  a.coupling_kinetic = r.optional_number("coupling_kinetic_a");
  b.coupling_kinetic = r.optional_number("coupling_kinetic_b");
  a.coupling_dilation = r.optional_number("coupling_dilation_a");
  b.coupling_dilation = r.optional_number("coupling_dilation_b");
  a.coupling_mass_potential = r.optional_number("coupling_mass_potential_a");
  b.coupling_mass_potential = r.optional_number("coupling_mass_potential_b");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  const IniDocument doc = parse_ini(text, origin);
  const std::string prefix = origin.empty() ? "" : origin + ": ";
  RunConfig cfg;

  for (const auto& sec : doc.sections) {
    SectionReader r(sec, prefix);
    if (sec.name == "run") {
      if (r.has("seed"))
        cfg.seed = static_cast<uint64_t>(r.unsigned_integer("seed", 0));
      cfg.output_dir = r.text("output_dir", cfg.output_dir);
      cfg.threads = static_cast<int>(r.integer("threads", cfg.threads));
    } else if (sec.name == "species") {
      cfg.species_table_file = r.text("table_file", cfg.species_table_file);
      if (r.has("state_a"))
        cfg.state_a = StateSelector::parse(r.text("state_a", ""));
      if (r.has("state_b"))
        cfg.state_b = StateSelector::parse(r.text("state_b", ""));
    } else if (sec.name == "sequence") {
      auto& s = cfg.sequence;
      s.launch_velocity = r.number("launch_velocity_m_per_s", s.launch_velocity);
      s.T_free_evolution = r.number("free_evolution_time_s", s.T_free_evolution);
      s.pulse_timing_offset =
          r.number("pulse_timing_offset_s", s.pulse_timing_offset);
      s.shots_per_ellipse =
          static_cast<int>(r.integer("shots_per_ellipse", s.shots_per_ellipse));
      s.ellipse_period = r.number("ellipse_period_s", s.ellipse_period);
      s.num_ellipses = static_cast<int>(r.integer("num_ellipses", s.num_ellipses));
      s.scan_phase_step = r.number("scan_phase_step_rad", s.scan_phase_step);
      s.diffraction_order =
          static_cast<int>(r.integer("diffraction_order", s.diffraction_order));
      cfg.chirp_rate_a = r.optional_number("chirp_rate_a");
      cfg.chirp_rate_b = r.optional_number("chirp_rate_b");
    } else if (sec.name == "noise") {
      auto& n = cfg.noise;
      n.vibration_phase_sigma =
          r.number("vibration_phase_sigma_rad", n.vibration_phase_sigma);
      n.detection_sigma = r.number("detection_sigma", n.detection_sigma);
      n.contrast_a = r.number("contrast_a", n.contrast_a);
      n.contrast_b = r.number("contrast_b", n.contrast_b);
      n.offset_a = r.number("offset_a", n.offset_a);
      n.offset_b = r.number("offset_b", n.offset_b);
      n.state_prep_leakage = r.number("state_prep_leakage", n.state_prep_leakage);
    } else if (sec.name == "violation") {
      read_violation(r, cfg.violation, cfg.violation_a, cfg.violation_b);
    } else if (sec.name == "environment") {
      auto& e = cfg.environment;
      e.local_g = r.number("local_g_m_per_s2", e.local_g);
      e.local_g_uncertainty =
          r.number("local_g_uncertainty_m_per_s2", e.local_g_uncertainty);
      e.gravity_gradient = r.number("gravity_gradient_per_s2", e.gravity_gradient);
      e.rotation_rate = r.number("rotation_rate_rad_per_s", e.rotation_rate);
    } else if (sec.name == "budget") {
      auto& b = cfg.budget;
      b.file = r.text("file", b.file);
      b.use_computed_wave_vector =
          r.boolean("use_computed_wave_vector", b.use_computed_wave_vector);
      b.use_computed_gravity_gradient = r.boolean(
          "use_computed_gravity_gradient", b.use_computed_gravity_gradient);
      b.gradient_offsets.delta_z0 =
          r.number("gradient_delta_z0_m", b.gradient_offsets.delta_z0);
      b.gradient_offsets.delta_v0 =
          r.number("gradient_delta_v0_m_per_s", b.gradient_offsets.delta_v0);
      b.gradient_uncertainty =
          r.number("gradient_uncertainty_e10", b.gradient_uncertainty * 1e10) *
          1e-10;
    } else {
      throw ConfigError(prefix + "unknown section [" + sec.name + "]");
    }
    r.reject_unknown();
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

std::string serialize_run_config(const RunConfig& cfg) {
  IniDocument doc;
  auto& run = doc.get_or_add("run");
  if (cfg.seed) run.set("seed", std::to_string(*cfg.seed));
  run.set("output_dir", cfg.output_dir);
  run.set("threads", std::to_string(cfg.threads));

  auto& species = doc.get_or_add("species");
  if (!cfg.species_table_file.empty())
    species.set("table_file", cfg.species_table_file);
  species.set("state_a", cfg.state_a.to_string());
  species.set("state_b", cfg.state_b.to_string());

  auto& seq = doc.get_or_add("sequence");
  seq.set("launch_velocity_m_per_s", format_double(cfg.sequence.launch_velocity));
  seq.set("free_evolution_time_s", format_double(cfg.sequence.T_free_evolution));
  seq.set("pulse_timing_offset_s",
          format_double(cfg.sequence.pulse_timing_offset));
  seq.set("shots_per_ellipse", std::to_string(cfg.sequence.shots_per_ellipse));
  seq.set("ellipse_period_s", format_double(cfg.sequence.ellipse_period));
  seq.set("num_ellipses", std::to_string(cfg.sequence.num_ellipses));
  seq.set("scan_phase_step_rad", format_double(cfg.sequence.scan_phase_step));
  seq.set("diffraction_order", std::to_string(cfg.sequence.diffraction_order));
  seq.set("chirp_rate_a",
          cfg.chirp_rate_a ? format_double(*cfg.chirp_rate_a) : "auto");
  seq.set("chirp_rate_b",
          cfg.chirp_rate_b ? format_double(*cfg.chirp_rate_b) : "auto");

  auto& noise = doc.get_or_add("noise");
  noise.set("vibration_phase_sigma_rad",
            format_double(cfg.noise.vibration_phase_sigma));
  noise.set("detection_sigma", format_double(cfg.noise.detection_sigma));
  noise.set("contrast_a", format_double(cfg.noise.contrast_a));
  noise.set("contrast_b", format_double(cfg.noise.contrast_b));
  noise.set("offset_a", format_double(cfg.noise.offset_a));
  noise.set("offset_b", format_double(cfg.noise.offset_b));
  noise.set("state_prep_leakage", format_double(cfg.noise.state_prep_leakage));

  auto& viol = doc.get_or_add("violation");
  viol.set("eta_mass", format_double(cfg.violation.eta_mass));
  viol.set("eta_internal", format_double(cfg.violation.eta_internal));
  viol.set("coupling_kinetic", format_double(cfg.violation.coupling_kinetic));
  viol.set("coupling_dilation", format_double(cfg.violation.coupling_dilation));
  viol.set("coupling_mass_potential",
           format_double(cfg.violation.coupling_mass_potential));
  auto set_override = [&viol](const char* key, const std::optional<double>& v) {
    if (v) viol.set(key, format_double(*v));
  };
  set_override("eta_mass_a", cfg.violation_a.eta_mass);
  set_override("eta_mass_b", cfg.violation_b.eta_mass);
  set_override("eta_internal_a", cfg.violation_a.eta_internal);
  set_override("eta_internal_b", cfg.violation_b.eta_internal);
  set_override("coupling_kinetic_a", cfg.violation_a.coupling_kinetic);
  set_override("coupling_kinetic_b", cfg.violation_b.coupling_kinetic);
  set_override("coupling_dilation_a", cfg.violation_a.coupling_dilation);
  set_override("coupling_dilation_b", cfg.violation_b.coupling_dilation);
  set_override("coupling_mass_potential_a",
               cfg.violation_a.coupling_mass_potential);
  set_override("coupling_mass_potential_b",
               cfg.violation_b.coupling_mass_potential);

  auto& env = doc.get_or_add("environment");
  env.set("local_g_m_per_s2", format_double(cfg.environment.local_g));
  env.set("local_g_uncertainty_m_per_s2",
          format_double(cfg.environment.local_g_uncertainty));
  env.set("gravity_gradient_per_s2",
          format_double(cfg.environment.gravity_gradient));
  env.set("rotation_rate_rad_per_s", format_double(cfg.environment.rotation_rate));

  auto& budget = doc.get_or_add("budget");
  if (!cfg.budget.file.empty()) budget.set("file", cfg.budget.file);
  budget.set("use_computed_wave_vector",
             cfg.budget.use_computed_wave_vector ? "true" : "false");
  budget.set("use_computed_gravity_gradient",
             cfg.budget.use_computed_gravity_gradient ? "true" : "false");
  budget.set("gradient_delta_z0_m",
             format_double(cfg.budget.gradient_offsets.delta_z0));
  budget.set("gradient_delta_v0_m_per_s",
             format_double(cfg.budget.gradient_offsets.delta_v0));
  budget.set("gradient_uncertainty_e10",
             format_double(cfg.budget.gradient_uncertainty * 1e10));

  return serialize_ini(doc);
}

ResolvedRun resolve_run(const RunConfig& cfg) {
  ResolvedRun run;
  run.config = cfg;
  run.table = cfg.species_table_file.empty()
                  ? SpeciesTable::builtin()
                  : SpeciesTable::from_file(cfg.species_table_file);

  cfg.environment.validate();
  cfg.sequence.validate();
  cfg.noise.validate();

  auto& pair = run.pair;
  pair.species_a = run.table.resolve(cfg.state_a);
  pair.species_b = run.table.resolve(cfg.state_b);
  pair.violation_a = cfg.violation_a.apply(cfg.violation);
  pair.violation_b = cfg.violation_b.apply(cfg.violation);
  pair.violation_a.validate();
  pair.violation_b.validate();
  pair.environment = cfg.environment;

  const double k_mean = 0.5 * (pair.species_a.effective_wave_vector +
                               pair.species_b.effective_wave_vector);
  const double g = cfg.environment.local_g;
  pair.chirp_rate_a = cfg.chirp_rate_a.value_or(k_mean * g);
  if (cfg.chirp_rate_b) {
    pair.chirp_rate_b = *cfg.chirp_rate_b;
  } else {
    // Auto rule: trim leg b's chirp so the predicted differential phase
    // lands exactly on the nearest 2*pi*m + pi/2, the operating point
    // where the ellipse-fit bias vanishes by symmetry. The trim is tiny
    // (it changes the phase by well under a radian), so the raw eta still
    // carries the full wave-vector offset.
    const double dk = pair.species_a.effective_wave_vector -
                      pair.species_b.effective_wave_vector;
    const double T = cfg.sequence.T_free_evolution +
                     cfg.sequence.pulse_timing_offset;
    const double nT2 = cfg.sequence.diffraction_order * T * T;
    const double half_pi = constants::pi / 2.0;
    const double phase0 = nT2 * dk * g;
    const double target =
        constants::two_pi * std::round((phase0 - half_pi) / constants::two_pi) +
        half_pi;
    pair.chirp_rate_b = pair.chirp_rate_a - dk * g + target / nT2;
  }

  auto partner_of = [&](const StateSelector& sel) {
    for (int level : hyperfine_levels(run.table, sel.isotope))
      if (level != sel.hyperfine_F) return level;
    return sel.hyperfine_F;  // single-level isotope: no wrong state
  };
  pair.partner_F_a = partner_of(cfg.state_a);
  pair.partner_F_b = partner_of(cfg.state_b);
  return run;
}

}  // namespace wepsim
