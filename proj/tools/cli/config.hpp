#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cli/errors.hpp"

namespace ancova::cli {

/// Flat `key = value` config file. '#' starts a comment; keys may appear at
/// most once. Typed getters consume keys; finish() rejects leftovers so that
/// unknown or misspelled keys fail loudly.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::optional<std::string> take(const std::string& key);
  std::optional<std::uint64_t> take_u64(const std::string& key);
  std::optional<double> take_double(const std::string& key);
  std::optional<std::vector<std::size_t>> take_size_list(const std::string& key);
  std::optional<std::vector<double>> take_double_list(const std::string& key);

  /// Throws ConfigError naming the first unconsumed key.
  void finish() const;

 private:
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::string origin_;
  std::map<std::string, Entry> entries_;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

}  // namespace ancova::cli
