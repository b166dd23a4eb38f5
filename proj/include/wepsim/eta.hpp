#ifndef WEPSIM_ETA_HPP
#define WEPSIM_ETA_HPP

#include "wepsim/ellipse.hpp"
#include "wepsim/physics.hpp"

namespace wepsim {

// Lift a fitted phase in (0, pi) onto the real line. The conic is
// invariant under phi -> -phi and phi -> phi + 2*pi*m, so the true phase
// is recovered as the candidate 2*pi*m +/- fitted closest to the physics
// prediction. Throws BranchAmbiguityError when the nearest candidate is
// more than pi/2 away.
double resolve_phase_branch(double fitted_phase, double predicted_phase);

// Differential phase the species pair is predicted to produce under exact
// equivalence (used for branch lifting): order*T^2*(dk*g - chirp_diff).
double predicted_pair_phase(const SpeciesState& species_a,
                            const SpeciesState& species_b, double T,
                            int diffraction_order, double mean_g,
                            double chirp_difference = 0.0);

// Fitted differential phase -> raw signed Eotvos parameter. The resolved
// phase maps to an apparent differential acceleration through the mean
// wave vector, delta_a = phi/(order*kbar*T^2); the raw eta still contains
// the wave-vector offset dk/kbar that the budget later subtracts.
// chirp_difference restores a deliberate chirp split between the legs.
double phase_to_eta(const EllipseFit& fit, const SpeciesState& species_a,
                    const SpeciesState& species_b, double T,
                    int diffraction_order, double mean_g,
                    double chirp_difference = 0.0);

}  // namespace wepsim

#endif  // WEPSIM_ETA_HPP
