#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace incomedist {

/// `key = value` text, one entry per line; `#` starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& origin = "<text>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  void set(const std::string& key, double value);
  void merge_from(const KeyValueConfig& other);

  const std::map<std::string, std::string>& entries() const { return entries_; }
  std::string to_text() const;

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_ = "<text>";
};

/// Strict numeric parsing of a whole token; ParseError on trailing garbage.
double parse_double(std::string_view text, const std::string& context);
std::int64_t parse_int(std::string_view text, const std::string& context);

/// 12 significant digits.
std::string format_number(double x);
/// Shortest text that round-trips to the same double.
std::string format_exact(double x);

}  // namespace incomedist
