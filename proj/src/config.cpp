#include "mfpm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mfpm {

std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + t + "'");
    }
    auto key = trim(std::string_view(t).substr(0, eq));
    auto value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = value;
    cfg.lines_[key] = line_no;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return parse(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void KeyValueConfig::fail(const std::string& key, const std::string& what) const {
  std::string where;
  if (auto it = lines_.find(key); it != lines_.end()) where = "line " + std::to_string(it->second) + ": ";
  throw ConfigError(where + "key '" + key + "': " + what);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

namespace {

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::int64_t out{};
  if (!parse_number(*v, out)) fail(key, "expected an integer, got '" + *v + "'");
  return out;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::uint64_t out{};
  if (!parse_number(*v, out)) fail(key, "expected an unsigned integer, got '" + *v + "'");
  return out;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  double out{};
  if (!parse_number(*v, out)) fail(key, "expected a number, got '" + *v + "'");
  return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(key, "expected a boolean, got '" + *v + "'");
}

std::pair<double, double> KeyValueConfig::get_range(const std::string& key,
                                                    std::pair<double, double> fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  auto s = *v;
  // Accept "lo,hi", "(lo,hi]" and similar.
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '(' || c == ')' || c == '[' || c == ']'; }),
          s.end());
  auto parts = split_list(s, ',');
  std::pair<double, double> out;
  if (parts.size() != 2 || !parse_number(parts[0], out.first) || !parse_number(parts[1], out.second)) {
    fail(key, "expected a range 'lo,hi', got '" + *v + "'");
  }
  if (!(out.first < out.second)) fail(key, "range must satisfy lo < hi");
  return out;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  auto v = get(key);
  if (!v) return {};
  return split_list(*v, ',');
}

}  // namespace mfpm
