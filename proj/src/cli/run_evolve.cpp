#include <spdlog/spdlog.h>

#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "rqbm/cli/commands.hpp"
#include "rqbm/errors.hpp"
#include "rqbm/evolve.hpp"
#include "rqbm/madelung.hpp"

namespace rqbm::cli {

namespace {

using grid::Complex;
using grid::ComplexField;
using grid::Grid1D;

constexpr Complex kI(0.0, 1.0);

// Uniform on [-1, 1) from the raw engine output, identical on every
// standard library (std::uniform_real_distribution is not).
double symmetric_uniform(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

void normalize(std::vector<Complex>& psi, double dx) {
  double norm = 0.0;
  for (const auto& z : psi) norm += std::norm(z);
  norm *= dx;
  if (norm > 0.0) {
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& z : psi) z *= scale;
  }
}

ComplexField initial_field(const Settings& s, const Grid1D& g) {
  const std::string init = s.text("init", "gaussian");
  std::vector<Complex> psi(g.n(), 0.0);
  if (init == "zero") return ComplexField(g, psi);

  if (init == "plane-wave") {
    // Snap to the nearest periodic mode so the wave is smooth across the seam.
    const double k_requested = s.number("k0", 1.0);
    const double dk = 2.0 * std::numbers::pi / g.length();
    const double k0 = dk * std::round(k_requested / dk);
    if (std::abs(k0 - k_requested) > 1e-12 * std::max(1.0, std::abs(k_requested))) {
      spdlog::warn("k0 = {} is not a grid mode; using {}", k_requested, k0);
    }
    for (std::size_t j = 0; j < g.n(); ++j) psi[j] = std::exp(kI * k0 * g.x(j));
    return ComplexField(g, psi);
  }

  if (init == "gaussian") {
    const double sigma = s.number("sigma", 2.0);
    const double k0 = s.number("k0", 1.0);
    const double x0 = s.number("x0", 0.0);
    if (!(sigma > 0.0)) throw InputError("--sigma must be positive");
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double u = g.x(j) - x0;
      psi[j] = std::exp(-u * u / (4.0 * sigma * sigma) + kI * k0 * u);
    }
    normalize(psi, g.dx());
    ComplexField field(g, psi);
    if (!grid::clear_of_boundary(field, 0.1 * g.length())) {
      spdlog::warn("initial packet is not clear of the periodic boundary");
    }
    return field;
  }

  if (init == "random") {
    // Random superposition of the lowest modes, reproducible from --seed.
    std::mt19937_64 rng(s.seed());
    std::vector<Complex> modes(g.n(), 0.0);
    const long cutoff = std::min<long>(8, static_cast<long>(g.n() / 4));
    for (long m = -cutoff; m <= cutoff; ++m) {
      const double re = symmetric_uniform(rng);
      const double im = symmetric_uniform(rng);
      modes[g.mode_index(m)] = Complex(re, im);
    }
    psi = grid::transform(g, modes, grid::Direction::Inverse);
    normalize(psi, g.dx());
    return ComplexField(g, psi);
  }
  throw InputError("--init must be gaussian, plane-wave, random or zero, got '" + init + "'");
}

bool all_zero(const std::vector<Complex>& psi) {
  for (const auto& z : psi) {
    if (z != Complex(0.0)) return false;
  }
  return true;
}

std::string time_label(double t) { return fmt::format("{:.12g}", t); }

RunResult run_field(const Settings& s, Format format, const ModelParams& params) {
  const Grid1D g = Grid1D::centered(s.count("n", 256), s.number("length", 64.0));
  const auto U = potential_on_grid(s, g.positions());
  bool has_potential = false;
  for (double u : U) has_potential = has_potential || u != 0.0;

  evolve::EvolutionConfig config;
  config.dt = s.number("dt", 0.01);
  config.steps = s.count("steps", 100);
  config.snapshot_stride = s.count("snapshot-stride", 10);
  const std::string method = s.text("method", has_potential ? "stepper" : "exact");
  if (method == "exact") {
    config.method = evolve::Method::ExactMode;
  } else if (method == "stepper") {
    config.method = evolve::Method::Stepper;
  } else {
    throw InputError("--method must be exact or stepper, got '" + method + "'");
  }

  const auto initial = evolve::particle_branch_project(initial_field(s, g));

  Table traj;
  traj.columns = {"t", "N", "N_mod", "E", "continuity_residual", "hj_residual"};
  RunResult result;
  result.base = s.text("out", "evolve_out");

  std::deque<std::vector<Complex>> window;
  const double dt = config.dt;
  evolve::stream_levels(initial, config, U, [&](long m, const std::vector<Complex>& psi) {
    window.push_back(psi);
    if (window.size() > 3) window.pop_front();
    if (window.size() < 3) return;
    const long centre = m - 1;
    if (centre < 0 || centre % static_cast<long>(config.snapshot_stride) != 0) return;
    const double t = static_cast<double>(centre) * dt;

    Table snap;
    snap.columns = {"x", "re_psi", "im_psi", "rho", "S", "Q"};
    const auto& mid = window[1];
    if (all_zero(window[0]) && all_zero(mid) && all_zero(window[2])) {
      for (std::size_t j = 0; j < g.n(); ++j) {
        snap.add_row({g.x(j), 0.0, 0.0, 0.0, 0.0, Cell{}});
      }
      traj.add_row({t, 0.0, 0.0, 0.0, 0.0, 0.0});
    } else {
      const auto history = madelung::history_from_fields(
          ComplexField(g, window[0]), ComplexField(g, mid), ComplexField(g, window[2]), t - dt,
          dt);
      const std::vector<std::vector<double>> levels{history[0].rho, history[1].rho,
                                                    history[2].rho};
      const auto Q = madelung::quantum_potential(g, levels, dt);
      const auto d = madelung::residuals(history, params, U);
      for (std::size_t j = 0; j < g.n(); ++j) {
        snap.add_row({g.x(j), mid[j].real(), mid[j].imag(), history[1].rho[j], history[1].S[j],
                      std::isnan(Q[j]) ? Cell{} : Cell{Q[j]}});
      }
      traj.add_row({t, d.N, d.N_mod, d.E, d.continuity_residual, d.hj_residual});
    }
    result.files.push_back({"snap_" + time_label(t) + extension(format), render(snap, format)});
  });

  result.files.push_back({"traj" + extension(format), render(traj, format)});
  return result;
}

RunResult run_density(const Settings& s, Format format, const ModelParams& params) {
  const auto k = s.k_grid(0.1, 1.0, 10);
  const double dt = s.number("dt", 0.1);
  const std::size_t steps = s.count("steps", 100);
  const std::size_t stride = s.count("snapshot-stride", 1);
  if (!(dt > 0.0)) throw InputError("--dt must be positive");
  if (steps == 0 || stride == 0) throw InputError("--steps and --snapshot-stride must be positive");
  if (s.has("method")) spdlog::warn("--method is ignored: density modes are propagated exactly");

  const std::string init = s.text("init", "hydrodynamic");
  evolve::DensityModeState state;
  if (init == "hydrodynamic") {
    state = evolve::hydrodynamic_initial_state(params, k);
  } else if (init == "random") {
    std::mt19937_64 rng(s.seed());
    state.k = k;
    for (std::size_t i = 0; i < k.size(); ++i) {
      evolve::Derivatives d;
      for (auto& v : d) {
        const double re = symmetric_uniform(rng);
        v = Complex(re, symmetric_uniform(rng));
      }
      state.modes.push_back(d);
    }
  } else {
    throw InputError("--init must be hydrodynamic or random for density runs, got '" + init +
                     "'");
  }

  for (double kj : k) {
    const auto growth = evolve::classify_growth(params, kj);
    if (growth.runaway) {
      spdlog::warn("k = {}: runaway root {}{:+}i grows without bound", kj,
                   growth.runaway_root.real(), growth.runaway_root.imag());
    }
  }

  Table modes;
  modes.columns = {"t", "k", "re_rho", "im_rho"};
  for (std::size_t step = 0; step <= steps; step += stride) {
    const double t = static_cast<double>(step) * dt;
    const auto now = evolve::evolve_density(params, state, t);
    for (std::size_t i = 0; i < k.size(); ++i) {
      const Complex rho = now.modes[i][0];
      if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag())) {
        throw NumericalFailure("density mode at k = " + std::to_string(k[i]) +
                               " overflowed at t = " + std::to_string(t));
      }
      modes.add_row({t, k[i], rho.real(), rho.imag()});
    }
  }
  RunResult result;
  result.base = s.text("out", "evolve_out");
  result.files.push_back({"modes" + extension(format), render(modes, format)});
  return result;
}

}  // namespace

RunResult run_evolve(const Settings& settings, Format format) {
  const ModelParams params = settings.model_params();
  if (is_dissipative(params.model)) return run_density(settings, format, params);
  return run_field(settings, format, params);
}

}  // namespace rqbm::cli
