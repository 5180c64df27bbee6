#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <tomlplusplus/toml.hpp>

#include "bmhd/spectral/grid.hpp"

namespace bmhd::cli {

/// Kinds a config file may name; plot is a subcommand only.
const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  toml::table params;

  bool operator==(const ExperimentConfig& o) const;
};

/// Parses TOML text. Errors are Config errors naming the field path, e.g.
/// "params.dt: expected a number".
ExperimentConfig parse_config(std::string_view text, const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path);

/// Canonical TOML; parse_config(to_toml(c)) == c.
std::string to_toml(const ExperimentConfig& c);

/// Kind recognized and seed in range. Param keys are checked by the command
/// that reads them (Params::allow_only).
void validate(const ExperimentConfig& c);

/// Typed access to the params table with defaults. Wrong types are Config
/// errors naming "params.<key>".
class Params {
 public:
  explicit Params(const toml::table& t) : t_(t) {}

  double number(std::string_view key, double def) const;
  std::int64_t integer(std::string_view key, std::int64_t def) const;
  bool boolean(std::string_view key, bool def) const;
  std::string string(std::string_view key, const std::string& def) const;
  std::vector<double> numbers(std::string_view key, const std::vector<double>& def) const;
  std::vector<std::string> strings(std::string_view key, const std::vector<std::string>& def) const;
  Vec3 vec3(std::string_view key, const Vec3& def) const;

  /// Rejects keys outside the list.
  void allow_only(std::initializer_list<std::string_view> keys, const std::string& kind) const;

 private:
  const toml::table& t_;
};

}  // namespace bmhd::cli
