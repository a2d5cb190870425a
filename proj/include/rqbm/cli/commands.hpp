#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "rqbm/cli/config.hpp"
#include "rqbm/cli/table.hpp"

namespace rqbm::cli {

/// A rendered file; `path` is relative to the run's --out location.
struct Output {
  std::filesystem::path path;
  std::string content;
};

/// Every subcommand computes everything before anything is written, so a
/// failed run leaves no partial files behind.
struct RunResult {
  std::filesystem::path base;  // file or directory named by --out
  std::vector<Output> files;
};

RunResult run_dispersion(const Settings& settings, Format format);
RunResult run_evolve(const Settings& settings, Format format);
RunResult run_madelung(const Settings& settings, Format format);
RunResult run_spectrum(const Settings& settings, Format format);

/// Potential on a grid from --potential (free|harmonic|box|file) and friends.
/// Shared by evolve and madelung.
std::vector<double> potential_on_grid(const Settings& settings, const std::vector<double>& x);

}  // namespace rqbm::cli
