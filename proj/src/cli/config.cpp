#include "rqbm/cli/config.hpp"

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rqbm/errors.hpp"

namespace rqbm::cli {

namespace {

std::string where(const std::string& path, const YAML::Mark& mark) {
  if (mark.is_null()) return path;
  return path + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
}

std::string scalar(const std::string& path, const std::string& key, const YAML::Node& node) {
  if (!node.IsScalar()) {
    throw InputError(where(path, node.Mark()) + ": '" + key + "' must be a single value");
  }
  return node.Scalar();
}

std::string normalize_scale(std::string scale) {
  if (scale == "log-spaced") return "log";
  if (scale == "linear-spaced") return "linear";
  return scale;
}

}  // namespace

double parse_number(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InputError("--" + key + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("--" + key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

ValueMap load_config_file(const std::string& path, const std::set<std::string>& known_keys) {
  if (!std::filesystem::exists(path)) throw InputError("config file not found: " + path);
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw InputError(where(path, e.mark) + ": " + e.msg);
  }
  ValueMap out;
  if (root.IsNull()) return out;
  if (!root.IsMap()) throw InputError(where(path, root.Mark()) + ": expected a key-value mapping");

  for (const auto& item : root) {
    const std::string key = item.first.as<std::string>();
    const YAML::Node& value = item.second;
    if (key == "k") {
      if (!value.IsSequence() || value.size() < 3 || value.size() > 4) {
        throw InputError(where(path, value.Mark()) +
                         ": 'k' must be [min, max, steps] or [min, max, steps, scale]");
      }
      if (!known_keys.contains("k-min")) {
        throw InputError(where(path, item.first.Mark()) + ": unknown key 'k'");
      }
      out["k-min"] = scalar(path, key, value[0]);
      out["k-max"] = scalar(path, key, value[1]);
      // "200 log-spaced" arrives as one scalar.
      std::istringstream steps(scalar(path, key, value[2]));
      std::string count, scale, extra;
      steps >> count >> scale >> extra;
      if (!extra.empty() || (!scale.empty() && value.size() == 4)) {
        throw InputError(where(path, value[2].Mark()) + ": cannot read k steps '" +
                         value[2].Scalar() + "'");
      }
      out["k-steps"] = count;
      if (value.size() == 4) scale = scalar(path, key, value[3]);
      if (!scale.empty()) out["k-scale"] = normalize_scale(scale);
      continue;
    }
    if (!known_keys.contains(key)) {
      throw InputError(where(path, item.first.Mark()) + ": unknown key '" + key + "'");
    }
    if (value.IsSequence()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) joined += kListSeparator;
        joined += scalar(path, key, value[i]);
      }
      out[key] = joined;
    } else {
      out[key] = scalar(path, key, value);
    }
    if (key == "k-scale") out[key] = normalize_scale(out[key]);
  }
  return out;
}

Settings::Settings(ValueMap flags, ValueMap file) : values_(std::move(file)) {
  for (auto& [key, value] : flags) {
    const auto it = values_.find(key);
    if (it != values_.end() && it->second != value) {
      spdlog::info("--{}={} overrides config value {}", key, value, it->second);
    }
    values_[key] = std::move(value);
  }
}

const std::string* Settings::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Settings::note_default(const std::string& key, const std::string& value) const {
  spdlog::info("{} not given, using default {}", key, value);
}

bool Settings::has(const std::string& key) const { return find(key) != nullptr; }

std::string Settings::text(const std::string& key, const std::string& fallback) const {
  if (const auto* v = find(key)) return *v;
  note_default(key, fallback);
  return fallback;
}

std::string Settings::text(const std::string& key) const {
  if (const auto* v = find(key)) return *v;
  throw InputError("--" + key + " is required");
}

double Settings::number(const std::string& key, double fallback) const {
  if (const auto* v = find(key)) return parse_number(key, *v);
  note_default(key, std::to_string(fallback));
  return fallback;
}

double Settings::number(const std::string& key) const {
  return parse_number(key, text(key));
}

std::optional<double> Settings::maybe_number(const std::string& key) const {
  if (const auto* v = find(key)) return parse_number(key, *v);
  return std::nullopt;
}

std::size_t Settings::count(const std::string& key, std::size_t fallback) const {
  if (const auto* v = find(key)) return parse_count(key, *v);
  note_default(key, std::to_string(fallback));
  return fallback;
}

std::uint64_t Settings::seed() const {
  if (const auto* v = find("seed")) return parse_count("seed", *v);
  note_default("seed", "0");
  return 0;
}

std::vector<std::string> Settings::list(const std::string& key) const {
  std::vector<std::string> out;
  const auto* v = find(key);
  if (!v) return out;
  std::size_t start = 0;
  while (true) {
    const auto stop = v->find(kListSeparator, start);
    out.push_back(v->substr(start, stop - start));
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
  return out;
}

ModelParams Settings::model_params() const {
  const Model model = parse_model(text("model", "conservative"));
  ModelParams p;
  p.model = model;
  p.gamma = maybe_number("gamma");
  p.tau = maybe_number("tau");
  p.diffusion = maybe_number("diffusion");
  const auto fill = [&](std::optional<double>& slot, const char* name) {
    if (!slot) {
      slot = 1.0;
      note_default(name, "1");
    }
  };
  switch (model) {
    case Model::Conservative: break;
    case Model::Collisional: fill(p.gamma, "gamma"); break;
    case Model::Radiative: fill(p.tau, "tau"); break;
    case Model::PhaseDiffusion:
    case Model::DAlembertDiffusion: fill(p.diffusion, "diffusion"); break;
  }
  p.validate();
  return p;
}

std::vector<double> Settings::k_grid(double k_min_default, double k_max_default,
                                     std::size_t steps_default) const {
  const double k_min = number("k-min", k_min_default);
  const double k_max = number("k-max", k_max_default);
  const std::size_t steps = count("k-steps", steps_default);
  const std::string scale = text("k-scale", "log");
  if (steps == 0) throw InputError("--k-steps must be positive");
  if (k_min < 0.0) throw InputError("--k-min must be non-negative");
  if (steps == 1) {
    if (k_max != k_min) throw InputError("--k-steps 1 needs --k-min equal to --k-max");
    return {k_min};
  }
  if (!(k_max > k_min)) throw InputError("--k-max must exceed --k-min");
  std::vector<double> k(steps);
  const double span = static_cast<double>(steps - 1);
  if (scale == "log") {
    if (!(k_min > 0.0)) throw InputError("--k-scale log needs --k-min > 0");
    const double a = std::log(k_min);
    const double b = std::log(k_max);
    for (std::size_t i = 0; i < steps; ++i) k[i] = std::exp(a + (b - a) * static_cast<double>(i) / span);
    k.front() = k_min;
    k.back() = k_max;
  } else if (scale == "linear") {
    for (std::size_t i = 0; i < steps; ++i) k[i] = k_min + (k_max - k_min) * static_cast<double>(i) / span;
    k.back() = k_max;
  } else {
    throw InputError("--k-scale must be log or linear, got '" + scale + "'");
  }
  return k;
}

}  // namespace rqbm::cli
