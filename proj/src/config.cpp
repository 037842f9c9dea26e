#include "qsense/config.hpp"

#include "qsense/serialize.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <set>
#include <sstream>

namespace qsense {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"prior", {"family", "mean", "sigma", "lo", "hi", "path"}},
      {"run", {"seed", "threads"}},
      {"bounds", {"levels", "state", "t_max", "t_points"}},
      {"qubit-opt", {"scan_samples"}},
      {"nlevel-sweep", {"n_min", "n_max", "t_max", "t_points", "restarts"}},
      {"onthefly", {"steps", "tau", "restarts"}},
      {"sequential", {"A", "steps", "simulate_steps", "grid_points"}},
      {"two-qubit", {"restarts"}},
      {"compile", {"levels", "state", "t", "B", "cutoff", "readout", "sigma_x_shortcut", "output"}},
      {"verify-pulses", {"schedule", "tolerance"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig cfg;
  cfg.base_dir_ = base_dir;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("config: unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      cfg.values_[section][key] = trim(value.data());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return parse(text, path.parent_path());
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  return s != values_.end() && s->second.count(key);
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  if (!has(section, key)) return fallback;
  return values_.at(section).at(key);
}

double RunConfig::get_double(const std::string& section, const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = values_.at(section).at(key);
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("config: [" + section + "] " + key + " is not a number: '" + v + "'");
  return x;
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = values_.at(section).at(key);
  int x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("config: [" + section + "] " + key + " is not an integer: '" + v + "'");
  return x;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string& v = values_.at(section).at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: [" + section + "] " + key + " is not a boolean: '" + v + "'");
}

std::optional<double> RunConfig::get_optional_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return get_double(section, key, 0.0);
}

std::filesystem::path RunConfig::get_path(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("config: [" + section + "] " + key + " is required");
  std::filesystem::path p = values_.at(section).at(key);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p;
}

std::string RunConfig::hash() const {
  std::string canon;
  for (const auto& [section, body] : values_)
    for (const auto& [key, value] : body) canon += section + "." + key + "=" + value + "\n";
  return hex64(fnv1a(canon));
}

Prior prior_from_config(const RunConfig& cfg) {
  const std::string family = cfg.get_string("prior", "family", "gaussian");
  try {
    if (family == "gaussian") return Prior::gaussian(cfg.get_double("prior", "mean", 0.0), cfg.get_double("prior", "sigma", 1.0));
    if (family == "uniform") return Prior::uniform(cfg.get_double("prior", "lo", -1.0), cfg.get_double("prior", "hi", 1.0));
    if (family == "grid") return load_grid_csv(cfg.get_path("prior", "path"));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: [prior] ") + e.what());
  }
  throw ConfigError("config: unknown prior family '" + family + "'");
}

}  // namespace qsense
