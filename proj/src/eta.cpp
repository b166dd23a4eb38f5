#include "wepsim/eta.hpp"

#include <cmath>

#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"

namespace wepsim {

namespace c = constants;

double resolve_phase_branch(double fitted_phase, double predicted_phase) {
  const double base = std::round(predicted_phase / c::two_pi);
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int dm = -1; dm <= 1; ++dm) {
    const double offset = (base + dm) * c::two_pi;
    for (const double candidate : {offset + fitted_phase, offset - fitted_phase}) {
      const double dist = std::abs(candidate - predicted_phase);
      if (dist < best_dist) {
        best_dist = dist;
        best = candidate;
      }
    }
  }
  if (best_dist > c::pi / 2.0)
    throw BranchAmbiguityError(
        "resolve_phase_branch: fitted and predicted phases differ by " +
        std::to_string(best_dist) + " rad (> pi/2); cannot lift branch");
  return best;
}

double predicted_pair_phase(const SpeciesState& species_a,
                            const SpeciesState& species_b, double T,
                            int diffraction_order, double mean_g,
                            double chirp_difference) {
  const double dk =
      species_a.effective_wave_vector - species_b.effective_wave_vector;
  return diffraction_order * T * T * (dk * mean_g - chirp_difference);
}

double phase_to_eta(const EllipseFit& fit, const SpeciesState& species_a,
                    const SpeciesState& species_b, double T,
                    int diffraction_order, double mean_g,
                    double chirp_difference) {
  if (!(T > 0.0)) throw ConfigError("phase_to_eta: T must be > 0");
  if (!(mean_g > 0.0)) throw ConfigError("phase_to_eta: mean_g must be > 0");

  const double predicted = predicted_pair_phase(
      species_a, species_b, T, diffraction_order, mean_g, chirp_difference);
  const double resolved =
      resolve_phase_branch(fit.differential_phase, predicted);

  const double k_mean = 0.5 * (species_a.effective_wave_vector +
                               species_b.effective_wave_vector);
  const double accel_difference =
      (resolved / (diffraction_order * T * T) + chirp_difference) / k_mean;
  return accel_difference / mean_g;
}

}  // namespace wepsim
