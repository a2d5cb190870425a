#include <cmath>
#include <optional>
#include <regex>

#include "rqbm/cli/commands.hpp"
#include "rqbm/errors.hpp"
#include "rqbm/madelung.hpp"

namespace rqbm::cli {

namespace {

using grid::Complex;
using grid::ComplexField;
using grid::Grid1D;

struct Snapshot {
  std::vector<double> x;
  std::vector<Complex> psi;
  std::optional<double> t;  // from a snap_<t> file name
};

Snapshot read_snapshot(const std::string& path) {
  const auto table = read_numeric_table(path);
  Snapshot snap;
  snap.x = table.column("x");
  const auto re = table.column("re_psi");
  const auto im = table.column("im_psi");
  for (std::size_t j = 0; j < re.size(); ++j) snap.psi.emplace_back(re[j], im[j]);

  static const std::regex name(R"(snap_(.+)\.(csv|json))");
  std::smatch match;
  const std::string file = std::filesystem::path(path).filename().string();
  if (std::regex_match(file, match, name)) {
    try {
      snap.t = parse_number("input", match[1].str());
    } catch (const InputError&) {
    }
  }
  return snap;
}

Grid1D grid_from_positions(const std::vector<double>& x, const std::string& path) {
  if (x.size() < 8) throw InputError(path + ": too few grid points");
  const double dx = x[1] - x[0];
  for (std::size_t j = 1; j < x.size(); ++j) {
    if (std::abs((x[j] - x[j - 1]) - dx) > 1e-9 * std::abs(dx)) {
      throw InputError(path + ": x column is not uniformly spaced");
    }
  }
  return Grid1D(x.size(), dx * static_cast<double>(x.size()), x[0]);
}

}  // namespace

RunResult run_madelung(const Settings& settings, Format format) {
  const auto paths = settings.list("input");
  if (paths.size() != 3) {
    throw InputError("--input needs exactly three consecutive snapshot files, got " +
                     std::to_string(paths.size()));
  }
  std::vector<Snapshot> snaps;
  for (const auto& p : paths) snaps.push_back(read_snapshot(p));
  const Grid1D g = grid_from_positions(snaps[0].x, paths[0]);
  for (std::size_t i = 1; i < 3; ++i) {
    if (snaps[i].x != snaps[0].x) {
      throw InputError(paths[i] + ": grid differs from " + paths[0]);
    }
  }

  // Times come from snap_<t> names; otherwise --dt spaces the files from 0.
  double t0 = 0.0, dt = 0.0;
  if (snaps[0].t && snaps[1].t && snaps[2].t) {
    t0 = *snaps[0].t;
    dt = *snaps[1].t - t0;
    const double dt2 = *snaps[2].t - *snaps[1].t;
    if (!(dt > 0.0) || std::abs(dt2 - dt) > 1e-9 * std::abs(dt)) {
      throw InputError("snapshots are not consecutive: spacings " + std::to_string(dt) + " and " +
                       std::to_string(dt2));
    }
    if (const auto given = settings.maybe_number("dt");
        given && std::abs(*given - dt) > 1e-9 * dt) {
      throw InputError("--dt disagrees with the snapshot times");
    }
  } else {
    dt = settings.number("dt");
    if (!(dt > 0.0)) throw InputError("--dt must be positive");
  }

  const ComplexField a(g, snaps[0].psi), b(g, snaps[1].psi), c(g, snaps[2].psi);
  const auto history = madelung::history_from_fields(a, b, c, t0, dt);
  const auto params = settings.model_params();
  const auto U = potential_on_grid(settings, g.positions());
  const auto diag = madelung::residuals(history, params, U);
  const std::vector<std::vector<double>> levels{history[0].rho, history[1].rho, history[2].rho};
  const auto Q = madelung::quantum_potential(g, levels, dt);

  Table table;
  table.columns = {"x", "rho", "S", "Q"};
  for (std::size_t j = 0; j < g.n(); ++j) {
    table.add_row({g.x(j), history[1].rho[j], history[1].S[j],
                   std::isnan(Q[j]) ? Cell{} : Cell{Q[j]}});
  }
  table.meta = {{"t", diag.t},
                {"continuity_residual", diag.continuity_residual},
                {"hj_residual", diag.hj_residual},
                {"E", diag.E},
                {"N", diag.N},
                {"N_mod", diag.N_mod},
                {"masked_fraction", diag.masked_fraction},
                {"reconstruction_error", madelung::reconstruction_error(b, history[1])}};

  const std::filesystem::path out = settings.text("out", "madelung" + extension(format));
  return {out, {{"", render(table, format)}}};
}

}  // namespace rqbm::cli
