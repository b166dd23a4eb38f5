#include "wepsim/allan.hpp"

#include <cmath>

#include "wepsim/errors.hpp"

namespace wepsim {

void EtaSeries::validate() const {
  if (values.empty()) throw DataError("eta series: empty");
  if (!(sample_interval > 0.0))
    throw DataError("eta series: sample_interval must be > 0");
}

AllanResult allan_deviation(const EtaSeries& series,
                            std::span<const double> tau_list) {
  series.validate();
  const auto n = static_cast<long>(series.values.size());

  // Direct summation: clusters over identical data produce bitwise
  // identical means, so a constant series yields exactly zero.
  auto cluster_mean = [&](long start, long m) {
    double sum = 0.0;
    for (long i = start; i < start + m; ++i)
      sum += series.values[static_cast<size_t>(i)];
    return sum / static_cast<double>(m);
  };

  AllanResult result;
  for (const double tau : tau_list) {
    if (!(tau > 0.0)) throw DataError("allan_deviation: tau must be > 0");
    const double ratio = tau / series.sample_interval;
    const long m = std::lround(ratio);
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9)
      throw DataError("allan_deviation: tau=" + std::to_string(tau) +
                      " is not an integer multiple of the sample interval");
    const long clusters = n - 2 * m + 1;
    if (clusters < 1) {
      result.warnings.push_back("tau=" + std::to_string(tau) +
                                " omitted: series too short (need >= " +
                                std::to_string(2 * m) + " samples)");
      continue;
    }
    double sum = 0.0;
    for (long j = 0; j < clusters; ++j) {
      const double diff = cluster_mean(j + m, m) - cluster_mean(j, m);
      sum += diff * diff;
    }
    AllanPoint point;
    point.tau = tau;
    point.deviation = std::sqrt(sum / (2.0 * static_cast<double>(clusters)));
    point.n_clusters = clusters;
    result.points.push_back(point);
  }
  return result;
}

std::vector<double> octave_taus(const EtaSeries& series) {
  series.validate();
  std::vector<double> taus;
  const auto n = static_cast<long>(series.values.size());
  for (long m = 1; 2 * m <= n; m *= 2)
    taus.push_back(static_cast<double>(m) * series.sample_interval);
  return taus;
}

TauSlopeFit fit_tau_slope(std::span<const AllanPoint> points) {
  if (points.size() < 3)
    throw DegenerateInput("fit_tau_slope: need at least 3 Allan points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    if (!(p.tau > 0.0) || !(p.deviation > 0.0))
      throw DegenerateInput("fit_tau_slope: taus and deviations must be > 0");
    const double x = std::log(p.tau);
    const double y = std::log(p.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0))
    throw DegenerateInput("fit_tau_slope: all taus identical");
  TauSlopeFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
  return fit;
}

}  // namespace wepsim
