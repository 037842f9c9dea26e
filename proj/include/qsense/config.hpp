#pragma once

#include "qsense/errors.hpp"
#include "qsense/priors.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace qsense {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// INI file with one section per command plus [prior] and [run]. Unknown
// sections and keys are rejected.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse(const std::string& text, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::optional<double> get_optional_double(const std::string& section, const std::string& key) const;
  // Relative paths resolve against the config file's directory.
  std::filesystem::path get_path(const std::string& section, const std::string& key) const;

  // FNV-1a of the canonical (sorted) key-value listing.
  std::string hash() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::filesystem::path base_dir_;
};

// [prior] family = gaussian | uniform | grid, with mean/sigma, lo/hi or path.
// Defaults to Gaussian(0, 1).
Prior prior_from_config(const RunConfig& config);

}  // namespace qsense
