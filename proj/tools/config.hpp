#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nwidths::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingKey : ConfigError {
  using ConfigError::ConfigError;
};

/// Flat key=value scenario config. '#' starts a comment; later assignments win.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<text>");

  /// Applies one "key=value" override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;

  /// Rejects keys outside `allowed`.
  void check_known(const std::set<std::string>& allowed) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

double parse_number(const std::string& s, const std::string& key);
long parse_integer(const std::string& s, const std::string& key);

}  // namespace nwidths::cli
