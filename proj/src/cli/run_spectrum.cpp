#include "rqbm/cli/commands.hpp"
#include "rqbm/errors.hpp"
#include "rqbm/spectrum.hpp"

namespace rqbm::cli {

namespace {

std::vector<double> read_potential_file(const std::string& path, std::size_t n) {
  const auto table = read_numeric_table(path);
  auto U = table.column("U");
  if (U.size() != n) {
    throw InputError(path + ": " + std::to_string(U.size()) + " potential values for " +
                     std::to_string(n) + " grid points");
  }
  return U;
}

}  // namespace

std::vector<double> potential_on_grid(const Settings& settings, const std::vector<double>& x) {
  const std::string kind = settings.text("potential", "free");
  std::vector<double> U(x.size(), 0.0);
  if (kind == "free") return U;
  if (kind == "harmonic") {
    const double w = settings.number("omega0");
    if (!(w > 0.0)) throw InputError("--omega0 must be positive");
    for (std::size_t j = 0; j < x.size(); ++j) U[j] = 0.5 * w * w * x[j] * x[j];
    return U;
  }
  if (kind == "file") return read_potential_file(settings.text("potential-file"), x.size());
  throw InputError("--potential must be free, harmonic or file here, got '" + kind + "'");
}

RunResult run_spectrum(const Settings& settings, Format format) {
  const std::string kind = settings.text("potential", "harmonic");
  const std::size_t n = settings.count("n", 1024);
  const std::size_t levels = settings.count("levels", 8);

  using spectrum::PotentialSpec;
  PotentialSpec potential;
  std::vector<double> epsilon;
  if (kind == "free") {
    const grid::Grid1D g(n, settings.number("length", 100.0));
    epsilon = spectrum::nonrel_eigen(PotentialSpec::free(), g, levels);
  } else if (kind == "harmonic" || kind == "box") {
    potential = kind == "harmonic" ? PotentialSpec::harmonic(settings.number("omega0", 0.001))
                                   : PotentialSpec::box(settings.number("width", 100.0));
    // Default domain: twenty oscillator lengths, or the box itself.
    const double fallback = kind == "harmonic" ? 20.0 / std::sqrt(potential.omega0)
                                               : potential.width;
    const auto g = grid::Grid1D::centered(n, settings.number("length", fallback));
    epsilon = spectrum::nonrel_eigen_refined(potential, g, levels);
  } else if (kind == "file") {
    const auto g = grid::Grid1D::centered(n, settings.number("length"));
    potential = PotentialSpec::tabulated(
        read_potential_file(settings.text("potential-file"), g.n()));
    epsilon = spectrum::nonrel_eigen(potential, g, levels);
  } else {
    throw InputError("--potential must be free, harmonic, box or file, got '" + kind + "'");
  }

  const auto result = spectrum::relativistic_map(epsilon);
  Table table;
  table.columns = {"n", "epsilon", "E", "E_series", "rel_gap"};
  for (std::size_t i = 0; i < result.epsilon.size(); ++i) {
    table.add_row({static_cast<long long>(i), result.epsilon[i], result.E[i], result.E_series[i],
                   result.rel_gap[i]});
  }
  const std::filesystem::path out = settings.text("out", "spectrum" + extension(format));
  return {out, {{"", render(table, format)}}};
}

}  // namespace rqbm::cli
