#include <cmath>

#include "rqbm/cli/commands.hpp"
#include "rqbm/dispersion.hpp"
#include "rqbm/errors.hpp"

namespace rqbm::cli {

RunResult run_dispersion(const Settings& settings, Format format) {
  const ModelParams params = settings.model_params();
  const auto k = settings.k_grid(0.01, 10.0, 200);
  const auto curve = dispersion::track_branches(params, k);
  const std::size_t degree = curve.branches.size();

  Table table;
  table.columns = {"model", "k"};
  for (int i = 1; i <= 4; ++i) {
    table.columns.push_back("re_w" + std::to_string(i));
    table.columns.push_back("im_w" + std::to_string(i));
  }
  for (int i = 1; i <= 4; ++i) table.columns.push_back("res" + std::to_string(i));
  for (int i = 1; i <= 4; ++i) table.columns.push_back("branch" + std::to_string(i));
  table.columns.push_back("asym_low_re");
  table.columns.push_back("asym_low_im");

  const std::string model(to_string(params.model));
  for (std::size_t j = 0; j < k.size(); ++j) {
    std::vector<Cell> row{model, k[j]};
    for (std::size_t b = 0; b < 4; ++b) {
      if (b < degree) {
        row.emplace_back(curve.branches[b][j].real());
        row.emplace_back(curve.branches[b][j].imag());
      } else {
        row.emplace_back();
        row.emplace_back();
      }
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (b < degree) {
        row.emplace_back(curve.residuals[b][j]);
      } else {
        row.emplace_back();
      }
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (b < degree) {
        row.emplace_back(std::string(to_string(curve.labels[b])));
      } else {
        row.emplace_back();
      }
    }
    // Blank where the model has no low-k closed form or the rate is zero.
    try {
      const auto w = dispersion::asymptotic_omega(params, k[j], dispersion::Regime::Low);
      row.emplace_back(w.real());
      row.emplace_back(w.imag());
    } catch (const InputError&) {
      row.emplace_back();
      row.emplace_back();
    }
    table.add_row(std::move(row));
  }

  const std::filesystem::path out = settings.text("out", "roots" + extension(format));
  return {out, {{"", render(table, format)}}};
}

}  // namespace rqbm::cli
