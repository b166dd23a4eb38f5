#include "wepsim/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wepsim/errors.hpp"

namespace wepsim {

const char* const kShotCsvHeader =
    "ellipse_index,shot_index,timestamp_s,scan_phase_rad,pop_87,pop_85";

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_field_double(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(where + ": cannot parse '" + text + "' as number");
  return v;
}

long parse_field_long(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(where + ": cannot parse '" + text + "' as integer");
  return v;
}

}  // namespace

std::string shot_csv_to_string(std::span<const ShotRecord> records) {
  std::string out = kShotCsvHeader;
  out += "\n";
  for (const auto& r : records) {
    out += std::to_string(r.ellipse_index) + "," + std::to_string(r.shot_index) +
           "," + format_sig12(r.timestamp) + "," + format_sig12(r.scan_phase) +
           "," + format_sig12(r.pop_a) + "," + format_sig12(r.pop_b) + "\n";
  }
  return out;
}

void write_shot_csv(const std::string& path, std::span<const ShotRecord> records) {
  write_text_file(path, shot_csv_to_string(records));
}

std::vector<ShotRecord> read_shot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open shot CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kShotCsvHeader)
    throw DataError(path + ": header mismatch; expected '" +
                    std::string(kShotCsvHeader) + "', got '" + line + "'");

  std::vector<ShotRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ": line " + std::to_string(lineno);
    const auto fields = split_csv_line(line);
    if (fields.size() != 6)
      throw DataError(where + ": expected 6 fields, got " +
                      std::to_string(fields.size()));
    ShotRecord r;
    r.ellipse_index = parse_field_long(fields[0], where);
    r.shot_index = parse_field_long(fields[1], where);
    r.timestamp = parse_field_double(fields[2], where);
    r.scan_phase = parse_field_double(fields[3], where);
    r.pop_a = parse_field_double(fields[4], where);
    r.pop_b = parse_field_double(fields[5], where);
    if (r.pop_a < 0.0 || r.pop_a > 1.0 || r.pop_b < 0.0 || r.pop_b > 1.0)
      throw DataError(where + ": populations must lie in [0,1]");
    records.push_back(r);
  }
  if (records.empty()) throw DataError(path + ": no data rows");
  return records;
}

std::string eta_csv_to_string(std::span<const EtaSample> samples) {
  std::string out = "ellipse_index,timestamp_s,eta_raw\n";
  for (const auto& s : samples)
    out += std::to_string(s.ellipse_index) + "," + format_sig12(s.timestamp) +
           "," + format_sig12(s.eta_raw) + "\n";
  return out;
}

void write_eta_csv(const std::string& path, std::span<const EtaSample> samples) {
  write_text_file(path, eta_csv_to_string(samples));
}

std::string allan_csv_to_string(std::span<const AllanPoint> points) {
  std::string out = "tau_s,adev,n_clusters\n";
  for (const auto& p : points)
    out += format_sig12(p.tau) + "," + format_sig12(p.deviation) + "," +
           std::to_string(p.n_clusters) + "\n";
  return out;
}

void write_allan_csv(const std::string& path, std::span<const AllanPoint> points) {
  write_text_file(path, allan_csv_to_string(points));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace wepsim
