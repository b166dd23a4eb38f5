#ifndef WEPSIM_ALLAN_HPP
#define WEPSIM_ALLAN_HPP

#include <span>
#include <string>
#include <vector>

namespace wepsim {

// Eotvos-parameter series, one value per ellipse at a uniform interval.
struct EtaSeries {
  std::vector<double> values;
  double sample_interval = 0.0;  // s

  void validate() const;
};

struct AllanPoint {
  double tau = 0.0;        // s
  double deviation = 0.0;
  long n_clusters = 0;     // overlapping pairs averaged into this point
};

struct AllanResult {
  std::vector<AllanPoint> points;
  std::vector<std::string> warnings;  // taus omitted for insufficient data
};

// Overlapping Allan deviation at the requested averaging times. Each tau
// must be an integer multiple of the sample interval; taus needing more
// data than the series holds are omitted with a warning.
AllanResult allan_deviation(const EtaSeries& series,
                            std::span<const double> tau_list);

// interval * {1, 2, 4, ...} up to half the series length.
std::vector<double> octave_taus(const EtaSeries& series);

struct TauSlopeFit {
  double exponent = 0.0;     // slope of log(sigma) vs log(tau)
  double coefficient = 0.0;  // sigma(tau) ~ coefficient * tau^exponent
};

// Least-squares line through (log tau, log sigma). Needs at least three
// strictly positive points.
TauSlopeFit fit_tau_slope(std::span<const AllanPoint> points);

}  // namespace wepsim

#endif  // WEPSIM_ALLAN_HPP
