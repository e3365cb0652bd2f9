#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ancova::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_scalar(const std::string& text, const std::string& key,
               const std::string& origin, std::size_t line) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": key '" + key +
                      "' has malformed value '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::stringstream ss(text);
  while (std::getline(ss, part, ',')) parts.push_back(trim(part));
  return parts;
}

}  // namespace

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    if (cfg.entries_.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> Config::take(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  std::string value = it->second.value;
  entries_.erase(it);
  return value;
}

std::optional<std::uint64_t> Config::take_u64(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  const auto value =
      parse_scalar<std::uint64_t>(it->second.value, key, origin_, it->second.line);
  entries_.erase(it);
  return value;
}

std::optional<double> Config::take_double(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  const auto value =
      parse_scalar<double>(it->second.value, key, origin_, it->second.line);
  entries_.erase(it);
  return value;
}

std::optional<std::vector<std::size_t>> Config::take_size_list(
    const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  std::vector<std::size_t> values;
  for (const std::string& part : split_commas(it->second.value))
    values.push_back(parse_scalar<std::size_t>(part, key, origin_, it->second.line));
  entries_.erase(it);
  return values;
}

std::optional<std::vector<double>> Config::take_double_list(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  const Entry entry = it->second;
  entries_.erase(it);

  // Range shorthand lo:step:hi, inclusive of hi up to rounding slack.
  const std::string& text = entry.value;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(text);
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3) {
      throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" +
                        key + "' range must be lo:step:hi");
    }
    const double lo = parse_scalar<double>(parts[0], key, origin_, entry.line);
    const double step = parse_scalar<double>(parts[1], key, origin_, entry.line);
    const double hi = parse_scalar<double>(parts[2], key, origin_, entry.line);
    if (!(step > 0.0) || hi < lo) {
      throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" +
                        key + "' range is empty or decreasing");
    }
    std::vector<double> values;
    for (int i = 0;; ++i) {
      const double v = lo + step * i;
      if (v > hi + 1e-9 * step) break;
      values.push_back(v);
    }
    return values;
  }

  std::vector<double> values;
  for (const std::string& p : split_commas(text))
    values.push_back(parse_scalar<double>(p, key, origin_, entry.line));
  return values;
}

void Config::finish() const {
  if (entries_.empty()) return;
  const auto& [key, entry] = *entries_.begin();
  throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                    ": unknown key '" + key + "'");
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(origin_ + ": key '" + key + "': " + what);
}

}  // namespace ancova::cli
