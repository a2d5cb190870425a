#include "rqbm/cli/app.hpp"

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "rqbm/cli/commands.hpp"
#include "rqbm/errors.hpp"

namespace rqbm::cli {

namespace {

struct Flag {
  const char* name;
  const char* help;
};

const std::vector<Flag> kModelFlags{
    {"model", "conservative | collisional | radiative | phase-diffusion | dalembert-diffusion"},
    {"gamma", "collision frequency (collisional)"},
    {"tau", "radiation-reaction time (radiative)"},
    {"diffusion", "phase diffusion coefficient (phase-diffusion, dalembert-diffusion)"},
};

const std::vector<Flag> kKGridFlags{
    {"k-min", "smallest wavenumber"},
    {"k-max", "largest wavenumber"},
    {"k-steps", "number of wavenumbers"},
    {"k-scale", "log | linear"},
};

const std::vector<Flag> kOutputFlags{
    {"out", "output file (directory for evolve)"},
    {"format", "csv | json"},
    {"seed", "seed for randomized initial data"},
};

const std::vector<Flag> kPotentialFlags{
    {"potential", "free | harmonic | file (spectrum also: box)"},
    {"omega0", "harmonic frequency"},
    {"potential-file", "table with a U column, one row per grid point"},
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Flag> flags;
  RunResult (*run)(const Settings&, Format);
};

std::vector<Flag> join(std::initializer_list<std::vector<Flag>> groups) {
  std::vector<Flag> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::vector<Command> commands() {
  return {
      {"dispersion", "sweep k and write the tracked dispersion roots",
       join({kModelFlags, kKGridFlags, kOutputFlags}), &run_dispersion},
      {"evolve", "evolve a field (conservative) or density modes (dissipative)",
       join({kModelFlags, kKGridFlags, kOutputFlags, kPotentialFlags,
             {{"n", "grid points"},
              {"length", "periodic domain length"},
              {"dt", "time step"},
              {"steps", "number of steps"},
              {"method", "exact | stepper"},
              {"snapshot-stride", "steps between snapshots"},
              {"init", "gaussian | plane-wave | random | zero; density: hydrodynamic | random"},
              {"sigma", "Gaussian width"},
              {"k0", "carrier wavenumber"},
              {"x0", "Gaussian centre"}}}),
       &run_evolve},
      {"madelung", "Madelung diagnostics of three consecutive snapshots",
       join({kModelFlags, kOutputFlags, kPotentialFlags,
             {{"dt", "snapshot spacing when file names carry no time"}}}),
       &run_madelung},
      {"spectrum", "nonrelativistic eigenvalues and their relativistic images",
       join({kOutputFlags, kPotentialFlags,
             {{"n", "grid points"},
              {"length", "domain length"},
              {"width", "box width"},
              {"levels", "number of eigenvalues"}}}),
       &run_spectrum},
  };
}

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("rqbm");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("RQBM_LOG")) spdlog::cfg::helpers::load_levels(level);
}

void write(const RunResult& result) {
  for (const auto& file : result.files) {
    const auto path = file.path.empty() ? result.base : result.base / file.path;
    write_atomic(path, file.content);
    spdlog::info("wrote {}", path.string());
  }
}

}  // namespace

int run(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Relativistic quantum hydrodynamics workbench (Compton units)", "rqbm"};
  app.require_subcommand(1);

  const auto table = commands();
  struct Bound {
    CLI::App* sub;
    const Command* command;
    std::map<std::string, std::string> values;
    std::vector<std::string> inputs;
    std::string config;
  };
  std::vector<Bound> bound(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto& b = bound[i];
    b.command = &table[i];
    b.sub = app.add_subcommand(table[i].name, table[i].help);
    for (const auto& flag : table[i].flags) {
      b.sub->add_option(std::string("--") + flag.name, b.values[flag.name], flag.help);
    }
    if (std::string(table[i].name) == "madelung") {
      b.sub->add_option("--input", b.inputs, "three consecutive snapshot files");
    }
    b.sub->add_option("--config", b.config, "YAML file with keys named like the flags");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  for (auto& b : bound) {
    if (!b.sub->parsed()) continue;
    try {
      ValueMap flags;
      for (const auto& flag : b.command->flags) {
        if (b.sub->count(std::string("--") + flag.name) > 0) flags[flag.name] = b.values[flag.name];
      }
      if (!b.inputs.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < b.inputs.size(); ++i) {
          if (i > 0) joined += kListSeparator;
          joined += b.inputs[i];
        }
        flags["input"] = joined;
      }
      ValueMap file;
      if (b.sub->count("--config") > 0) {
        std::set<std::string> known;
        for (const auto& flag : b.command->flags) known.insert(flag.name);
        if (std::string(b.command->name) == "madelung") known.insert("input");
        file = load_config_file(b.config, known);
      }
      const Settings settings(std::move(flags), std::move(file));
      const Format format = parse_format(settings.text("format", "csv"));
      write(b.command->run(settings, format));
      return kExitOk;
    } catch (const InputError& e) {
      std::cerr << "rqbm " << b.command->name << ": " << e.what() << "\n";
      return kExitInput;
    } catch (const NumericalFailure& e) {
      std::cerr << "rqbm " << b.command->name << ": numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    } catch (const std::exception& e) {
      std::cerr << "rqbm " << b.command->name << ": unexpected failure: " << e.what() << "\n";
      return kExitNumerical;
    }
  }
  return kExitInput;
}

}  // namespace rqbm::cli
