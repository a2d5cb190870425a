#include <cmath>
#include <string>

#include "rqbm/errors.hpp"
#include "rqbm/evolve.hpp"

namespace rqbm::evolve {

namespace {

constexpr Complex kI(0.0, 1.0);

using grid::Direction;
using grid::transform;

}  // namespace

ModeFrequencies conservative_mode_frequencies(double k) {
  const double root = std::sqrt(1.0 + k * k);
  // k^2 / (root + 1) avoids the cancellation in root - 1 at small k.
  return {k * k / (root + 1.0), -root - 1.0};
}

FieldState::FieldState(ComplexField psi_in, ComplexField dpsi_in, double t_in)
    : psi(std::move(psi_in)), dpsi_dt(std::move(dpsi_in)), t(t_in) {
  if (!(psi.grid == dpsi_dt.grid)) {
    throw InputError("psi and d_t psi must live on the same grid");
  }
}

FieldState particle_branch_project(const ComplexField& psi, double t) {
  auto modes = transform(psi.grid, psi.values, Direction::Forward);
  const auto& k = psi.grid.wavenumbers();
  for (std::size_t j = 0; j < modes.size(); ++j) {
    modes[j] *= -kI * conservative_mode_frequencies(k[j]).plus;
  }
  return FieldState(psi, ComplexField(psi.grid, transform(psi.grid, modes, Direction::Inverse)),
                    t);
}

BranchAmplitudes branch_amplitudes(const FieldState& state) {
  const auto& g = state.psi.grid;
  const auto psi = transform(g, state.psi.values, Direction::Forward);
  const auto dpsi = transform(g, state.dpsi_dt.values, Direction::Forward);
  BranchAmplitudes out;
  out.particle.resize(g.n());
  out.gapped.resize(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto w = conservative_mode_frequencies(g.wavenumbers()[j]);
    const double split = w.plus - w.minus;
    out.particle[j] = kI * (dpsi[j] + kI * w.minus * psi[j]) / split;
    out.gapped[j] = -kI * (dpsi[j] + kI * w.plus * psi[j]) / split;
  }
  return out;
}

FieldState propagate_exact(const FieldState& state, double duration) {
  const auto& g = state.psi.grid;
  const auto amps = branch_amplitudes(state);
  std::vector<Complex> psi(g.n()), dpsi(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto w = conservative_mode_frequencies(g.wavenumbers()[j]);
    const Complex a = amps.particle[j] * std::exp(-kI * w.plus * duration);
    const Complex b = amps.gapped[j] * std::exp(-kI * w.minus * duration);
    psi[j] = a + b;
    dpsi[j] = -kI * (w.plus * a + w.minus * b);
  }
  return FieldState(ComplexField(g, transform(g, psi, Direction::Inverse)),
                    ComplexField(g, transform(g, dpsi, Direction::Inverse)),
                    state.t + duration);
}

void EvolutionConfig::validate(const Grid1D& grid) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be finite and positive");
  if (steps == 0) throw InputError("steps must be positive");
  if (snapshot_stride == 0) throw InputError("snapshot stride must be positive");
  if (method == Method::Stepper) {
    if (!(dt < 0.5 * grid.dx())) {
      throw InputError("CFL violation: stepper needs dt < dx/2 (dt = " + std::to_string(dt) +
                       ", dx = " + std::to_string(grid.dx()) + ")");
    }
    if (!(dt < 0.1)) {
      throw InputError("CFL violation: stepper needs dt < 0.1 to resolve the "
                       "Zitterbewegung period");
    }
  }
}

namespace {

bool all_zero(std::span<const double> u) {
  for (double v : u) {
    if (v != 0.0) return false;
  }
  return true;
}

// d_x^2 psi - 2 U psi
std::vector<Complex> field_operator(const Grid1D& g, const std::vector<Complex>& psi,
                                    std::span<const double> potential) {
  auto modes = transform(g, psi, Direction::Forward);
  const auto& k = g.wavenumbers();
  for (std::size_t j = 0; j < modes.size(); ++j) modes[j] *= -k[j] * k[j];
  auto out = transform(g, modes, Direction::Inverse);
  if (!potential.empty()) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] -= 2.0 * potential[j] * psi[j];
  }
  return out;
}

void stream_stepper(const FieldState& initial, const EvolutionConfig& config,
                    std::span<const double> potential, const LevelObserver& observe) {
  const auto& g = initial.psi.grid;
  const double dt = config.dt;
  const std::size_t n = g.n();
  const Complex denom = 1.0 - kI * dt;
  const Complex back = 1.0 + kI * dt;

  // Second-order start from the Taylor expansion using the field equation.
  std::vector<Complex> cur = initial.psi.values;
  std::vector<Complex> next(n);
  auto lap = field_operator(g, cur, potential);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex accel = lap[j] + 2.0 * kI * initial.dpsi_dt.values[j];
    next[j] = cur[j] + dt * initial.dpsi_dt.values[j] + 0.5 * dt * dt * accel;
  }
  // The level before the start that the recursion itself implies.
  std::vector<Complex> prev(n);
  for (std::size_t j = 0; j < n; ++j) {
    prev[j] = (2.0 * cur[j] + dt * dt * lap[j] - denom * next[j]) / back;
  }
  observe(-1, prev);
  observe(0, cur);
  prev.swap(cur);
  cur.swap(next);

  // Central second difference; the first-order term averages the newest and
  // oldest levels, which leaves a scalar solve for the newest level.
  for (std::size_t step = 1; step <= config.steps; ++step) {
    observe(static_cast<long>(step), cur);
    lap = field_operator(g, cur, potential);
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = (2.0 * cur[j] - back * prev[j] + dt * dt * lap[j]) / denom;
    }
    prev.swap(cur);
    cur.swap(next);
  }
  observe(static_cast<long>(config.steps) + 1, cur);
}

std::span<const double> effective_potential(const Grid1D& g, std::span<const double> potential) {
  if (!potential.empty() && potential.size() != g.n()) {
    throw InputError("potential length does not match the grid");
  }
  return all_zero(potential) ? std::span<const double>{} : potential;
}

}  // namespace

void stream_levels(const FieldState& initial, const EvolutionConfig& config,
                   std::span<const double> potential, const LevelObserver& observe) {
  const auto& g = initial.psi.grid;
  config.validate(g);
  const auto U = effective_potential(g, potential);
  if (config.method == Method::ExactMode) {
    if (!U.empty()) {
      throw UnsupportedError("exact-mode propagation requires U = 0; use the stepper");
    }
    for (long m = -1; m <= static_cast<long>(config.steps) + 1; ++m) {
      observe(m, propagate_exact(initial, static_cast<double>(m) * config.dt).psi.values);
    }
    return;
  }
  stream_stepper(initial, config, U, observe);
}

std::vector<FieldState> evolve_field(const FieldState& initial, const EvolutionConfig& config,
                                     std::span<const double> potential) {
  const auto& g = initial.psi.grid;
  config.validate(g);
  const auto U = effective_potential(g, potential);
  std::vector<FieldState> snapshots;
  if (config.method == Method::ExactMode) {
    if (!U.empty()) {
      throw UnsupportedError("exact-mode propagation requires U = 0; use the stepper");
    }
    for (std::size_t step = 0; step <= config.steps; step += config.snapshot_stride) {
      snapshots.push_back(propagate_exact(initial, static_cast<double>(step) * config.dt));
    }
    return snapshots;
  }

  // Snapshot velocities are central differences of the neighbouring levels,
  // except at the start where the initial velocity is known.
  snapshots.push_back(initial);
  std::vector<Complex> before, centre;
  const std::size_t stride = config.snapshot_stride;
  stream_stepper(initial, config, U, [&](long m, const std::vector<Complex>& psi) {
    if (m >= 2 && static_cast<std::size_t>(m - 1) % stride == 0) {
      std::vector<Complex> velocity(psi.size());
      for (std::size_t j = 0; j < psi.size(); ++j) {
        velocity[j] = (psi[j] - before[j]) / (2.0 * config.dt);
      }
      snapshots.emplace_back(ComplexField(g, centre), ComplexField(g, std::move(velocity)),
                             initial.t + static_cast<double>(m - 1) * config.dt);
    }
    before = std::move(centre);
    centre = psi;
  });
  return snapshots;
}

}  // namespace rqbm::evolve
