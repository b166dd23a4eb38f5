#include "wepsim/ini.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wepsim/errors.hpp"

namespace wepsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

bool IniSection::has(const std::string& key) const { return find(key) != nullptr; }

const std::string* IniSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

void IniSection::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

IniSection* IniDocument::find(const std::string& name) {
  for (auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const IniSection* IniDocument::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

IniSection& IniDocument::get_or_add(const std::string& name) {
  if (auto* s = find(name)) return *s;
  sections.push_back(IniSection{name, {}});
  return sections.back();
}

IniDocument parse_ini(const std::string& text, const std::string& origin) {
  IniDocument doc;
  IniSection* current = nullptr;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const std::string where = origin.empty() ? "" : origin + ": ";

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + "line " + std::to_string(lineno) +
                          ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError(where + "line " + std::to_string(lineno) +
                          ": empty section name");
      current = &doc.get_or_add(name);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + "line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    if (current == nullptr)
      throw ConfigError(where + "line " + std::to_string(lineno) +
                        ": key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(where + "line " + std::to_string(lineno) + ": empty key");
    if (current->has(key))
      throw ConfigError(where + "line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "' in [" + current->name + "]");
    current->entries.emplace_back(key, value);
  }
  return doc;
}

IniDocument load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini(buf.str(), path);
}

std::string serialize_ini(const IniDocument& doc) {
  std::string out;
  bool first = true;
  for (const auto& sec : doc.sections) {
    if (!first) out += "\n";
    first = false;
    out += "[" + sec.name + "]\n";
    for (const auto& [k, v] : sec.entries) out += k + " = " + v + "\n";
  }
  return out;
}

double ini_to_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as number");
  return v;
}

long long ini_to_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as integer");
  return v;
}

unsigned long long ini_to_uint(const std::string& key, const std::string& value) {
  unsigned long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as unsigned integer");
  return v;
}

bool ini_to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': cannot parse '" + value + "' as bool");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace wepsim
