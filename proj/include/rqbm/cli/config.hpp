#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rqbm/units.hpp"

namespace rqbm::cli {

/// Option values keyed by long flag name without the dashes ("k-min").
/// Lists (e.g. --input) are stored joined by kListSeparator.
using ValueMap = std::map<std::string, std::string>;

inline constexpr char kListSeparator = '\x1f';

/// Reads a YAML mapping whose keys mirror the flag names. Besides scalars it
/// accepts `input: [a, b, c]` and the shorthand `k: [min, max, steps, scale]`.
/// Errors carry file:line:column.
ValueMap load_config_file(const std::string& path, const std::set<std::string>& known_keys);

/// Flag values layered over config-file values. Every lookup that falls back
/// to a default, and every flag that overrides the file, is logged.
class Settings {
 public:
  Settings(ValueMap flags, ValueMap file);

  bool has(const std::string& key) const;

  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  std::optional<double> maybe_number(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t seed() const;
  std::vector<std::string> list(const std::string& key) const;

  /// Model and its single rate constant; a rate that belongs to another model
  /// is rejected.
  ModelParams model_params() const;

  /// --k-min/--k-max/--k-steps/--k-scale. Log spacing by default.
  std::vector<double> k_grid(double k_min, double k_max, std::size_t steps) const;

 private:
  const std::string* find(const std::string& key) const;
  void note_default(const std::string& key, const std::string& value) const;

  ValueMap values_;
};

/// Strict parsers: the whole string must be consumed.
double parse_number(const std::string& key, const std::string& text);
std::size_t parse_count(const std::string& key, const std::string& text);

}  // namespace rqbm::cli
