#ifndef WEPSIM_INI_HPP
#define WEPSIM_INI_HPP

#include <map>
#include <string>
#include <vector>

namespace wepsim {

// Minimal sectioned key = value text format shared by the run config and
// the species table. Line comments start with '#'. Keys within a section
// keep their first-seen order so serialization is stable.

struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  const std::string* find(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
};

struct IniDocument {
  std::vector<IniSection> sections;

  IniSection* find(const std::string& name);
  const IniSection* find(const std::string& name) const;
  IniSection& get_or_add(const std::string& name);
};

// Throws ConfigError with a "line N:" prefix on malformed input.
IniDocument parse_ini(const std::string& text, const std::string& origin = "");
IniDocument load_ini(const std::string& path);
std::string serialize_ini(const IniDocument& doc);

// Value parsers; all throw ConfigError naming the key on failure.
double ini_to_double(const std::string& key, const std::string& value);
long long ini_to_int(const std::string& key, const std::string& value);
unsigned long long ini_to_uint(const std::string& key, const std::string& value);
bool ini_to_bool(const std::string& key, const std::string& value);

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

}  // namespace wepsim

#endif  // WEPSIM_INI_HPP
