#ifndef WEPSIM_CSV_HPP
#define WEPSIM_CSV_HPP

#include <span>
#include <string>
#include <vector>

#include "wepsim/allan.hpp"
#include "wepsim/sequence.hpp"

namespace wepsim {

// Campaign shot schema, floats at 12 significant digits:
//   ellipse_index,shot_index,timestamp_s,scan_phase_rad,pop_87,pop_85
extern const char* const kShotCsvHeader;

std::string shot_csv_to_string(std::span<const ShotRecord> records);
void write_shot_csv(const std::string& path, std::span<const ShotRecord> records);

// Strict schema check; throws DataError naming the offending line.
std::vector<ShotRecord> read_shot_csv(const std::string& path);

struct EtaSample {
  long ellipse_index = 0;
  double timestamp = 0.0;  // s, start of the ellipse
  double eta_raw = 0.0;
};

std::string eta_csv_to_string(std::span<const EtaSample> samples);
void write_eta_csv(const std::string& path, std::span<const EtaSample> samples);

// Allan schema: tau_s,adev,n_clusters
std::string allan_csv_to_string(std::span<const AllanPoint> points);
void write_allan_csv(const std::string& path, std::span<const AllanPoint> points);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// "%.12g", the campaign float format.
std::string format_sig12(double v);

}  // namespace wepsim

#endif  // WEPSIM_CSV_HPP
