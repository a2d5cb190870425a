#include "rqbm/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rqbm/errors.hpp"

namespace rqbm::madelung {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap(double angle) { return std::remainder(angle, kTwoPi); }

// Integer multiple of 2 pi that brings `S` closest (in L2) to `reference`.
double alignment_shift(std::span<const double> S, std::span<const double> reference,
                       const std::vector<bool>& masked) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < S.size(); ++j) {
    if (masked[j]) continue;
    sum += reference[j] - S[j];
    ++count;
  }
  if (count == 0) return 0.0;
  return kTwoPi * std::round(sum / static_cast<double>(count) / kTwoPi);
}

double l2_norm(const Grid1D& g, std::span<const double> r, const std::vector<bool>& masked) {
  double sum = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (!masked[j]) sum += r[j] * r[j];
  }
  return std::sqrt(sum * g.dx());
}

void check_history(const History& h) {
  for (const auto& level : h) {
    if (!(level.grid == h[0].grid)) throw InputError("history levels use different grids");
    if (level.rho.size() != level.grid.n() || level.S.size() != level.grid.n()) {
      throw InputError("history level has the wrong length");
    }
  }
  const double dt = h[1].t - h[0].t;
  const double dt2 = h[2].t - h[1].t;
  if (!(dt > 0.0) || std::abs(dt2 - dt) > 1e-9 * dt) {
    throw InputError("history levels must be equally spaced in time (got dt = " +
                     std::to_string(dt) + " and " + std::to_string(dt2) + ")");
  }
}

struct TimeDerivatives {
  std::vector<double> S_t, S_tt, rho_t;
  std::vector<bool> masked;
  double dt;
};

TimeDerivatives time_derivatives(const History& h) {
  check_history(h);
  const std::size_t n = h[1].grid.n();
  const double dt = h[1].t - h[0].t;
  std::vector<bool> masked(n);
  for (std::size_t j = 0; j < n; ++j) masked[j] = h[0].masked[j] || h[1].masked[j] || h[2].masked[j];
  // The outer levels may disagree with the middle by whole turns.
  const double shift0 = alignment_shift(h[0].S, h[1].S, masked);
  const double shift2 = alignment_shift(h[2].S, h[1].S, masked);
  TimeDerivatives d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                    masked, dt};
  for (std::size_t j = 0; j < n; ++j) {
    const double s0 = h[0].S[j] + shift0;
    const double s2 = h[2].S[j] + shift2;
    d.S_t[j] = (s2 - s0) / (2.0 * dt);
    d.S_tt[j] = (s2 - 2.0 * h[1].S[j] + s0) / (dt * dt);
    d.rho_t[j] = (h[2].rho[j] - h[0].rho[j]) / (2.0 * dt);
  }
  return d;
}

}  // namespace

ComplexField MadelungFields::reconstruct() const {
  std::vector<grid::Complex> v(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) v[j] = std::polar(std::sqrt(rho[j]), S[j]);
  return ComplexField(grid, std::move(v));
}

MadelungFields decompose(const ComplexField& psi, std::optional<std::span<const double>> prior_S,
                         double t) {
  const std::size_t n = psi.grid.n();
  MadelungFields f{psi.grid, std::vector<double>(n), std::vector<double>(n),
                   std::vector<bool>(n), t};
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& z = psi.values[j];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InputError("psi must be finite");
    }
    f.rho[j] = std::norm(z);
    f.masked[j] = f.rho[j] < kDensityFloor;
    any = any || z != grid::Complex(0.0);
  }
  if (!any) throw InputError("cannot decompose an all-zero field");

  // Unwrap along the grid through unmasked points only.
  std::optional<std::size_t> last;
  for (std::size_t j = 0; j < n; ++j) {
    if (f.masked[j]) continue;
    const double phase = std::arg(psi.values[j]);
    f.S[j] = last ? f.S[*last] + wrap(phase - std::arg(psi.values[*last])) : phase;
    last = j;
  }
  // Nodes take the phase of the nearest unmasked neighbour.
  if (last) {
    std::vector<double> filled = f.S;
    for (std::size_t j = 0; j < n; ++j) {
      if (!f.masked[j]) continue;
      for (std::size_t d = 1; d < n; ++d) {
        if (j >= d && !f.masked[j - d]) {
          filled[j] = f.S[j - d];
          break;
        }
        if (j + d < n && !f.masked[j + d]) {
          filled[j] = f.S[j + d];
          break;
        }
      }
    }
    f.S = std::move(filled);
  }

  if (prior_S) {
    if (prior_S->size() != n) throw InputError("prior phase has the wrong length");
    const double shift = alignment_shift(f.S, *prior_S, f.masked);
    for (auto& s : f.S) s += shift;
  }
  return f;
}

double reconstruction_error(const ComplexField& psi, const MadelungFields& fields) {
  const auto back = fields.reconstruct();
  double peak = 0.0, worst = 0.0;
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    peak = std::max(peak, std::abs(psi.values[j]));
    if (fields.rho[j] > kDensityFloor) {
      worst = std::max(worst, std::abs(back.values[j] - psi.values[j]));
    }
  }
  return peak > 0.0 ? worst / peak : worst;
}

std::vector<double> phase_derivative(const Grid1D& g, std::span<const double> S, int order) {
  const std::size_t n = g.n();
  if (S.size() != n) throw InputError("phase length does not match grid");
  const double closing = wrap(S[0] - S[n - 1]);
  const double winding = std::round((S[n - 1] + closing - S[0]) / kTwoPi);
  const double slope = kTwoPi * winding / g.length();
  std::vector<double> periodic(n);
  for (std::size_t j = 0; j < n; ++j) periodic[j] = S[j] - slope * (g.x(j) - g.x_min());
  auto d = grid::spectral_derivative(g, periodic, order);
  if (order == 1) {
    for (auto& v : d) v += slope;
  }
  return d;
}

std::vector<double> quantum_potential(const Grid1D& g,
                                      std::span<const std::vector<double>> rho_levels,
                                      double dt) {
  if (rho_levels.size() != 3) {
    throw InputError("quantum potential needs three density levels (use the static variant "
                     "for one)");
  }
  if (!(dt > 0.0)) throw InputError("level spacing must be positive");
  const std::size_t n = g.n();
  for (const auto& level : rho_levels) {
    if (level.size() != n) throw InputError("density level has the wrong length");
  }
  std::array<std::vector<double>, 3> amp;
  for (std::size_t l = 0; l < 3; ++l) {
    amp[l].resize(n);
    for (std::size_t j = 0; j < n; ++j) amp[l][j] = std::sqrt(std::max(rho_levels[l][j], 0.0));
  }
  const auto lap = grid::spectral_derivative(g, amp[1], 2);
  std::vector<double> Q(n);
  for (std::size_t j = 0; j < n; ++j) {
    const bool masked = rho_levels[0][j] < kDensityFloor || rho_levels[1][j] < kDensityFloor ||
                        rho_levels[2][j] < kDensityFloor;
    if (masked) {
      Q[j] = kNaN;
      continue;
    }
    const double amp_tt = (amp[0][j] - 2.0 * amp[1][j] + amp[2][j]) / (dt * dt);
    Q[j] = 0.5 * (amp_tt - lap[j]) / amp[1][j];
  }
  return Q;
}

std::vector<double> quantum_potential_static(const Grid1D& g, std::span<const double> rho) {
  const std::size_t n = g.n();
  if (rho.size() != n) throw InputError("density has the wrong length");
  std::vector<double> amp(n);
  for (std::size_t j = 0; j < n; ++j) amp[j] = std::sqrt(std::max(rho[j], 0.0));
  const auto lap = grid::spectral_derivative(g, amp, 2);
  std::vector<double> Q(n);
  for (std::size_t j = 0; j < n; ++j) {
    Q[j] = rho[j] < kDensityFloor ? kNaN : -0.5 * lap[j] / amp[j];
  }
  return Q;
}

Diagnostics residuals(const History& h, const ModelParams& params,
                      std::span<const double> potential) {
  params.validate();
  const auto d = time_derivatives(h);
  const auto& g = h[1].grid;
  const std::size_t n = g.n();
  if (!potential.empty() && potential.size() != n) {
    throw InputError("potential length does not match the grid");
  }
  const auto& rho = h[1].rho;
  const auto& S = h[1].S;

  const auto S_x = phase_derivative(g, S, 1);
  const auto S_xx = phase_derivative(g, S, 2);
  std::vector<double> flux(n);
  for (std::size_t j = 0; j < n; ++j) flux[j] = rho[j] * S_x[j];
  const auto flux_x = grid::spectral_derivative(g, flux, 1);

  const std::vector<std::vector<double>> levels{h[0].rho, h[1].rho, h[2].rho};
  const auto Q = quantum_potential(g, levels, d.dt);

  const double rate = params.rate();
  std::vector<double> r_cont(n), r_hj(n);
  for (std::size_t j = 0; j < n; ++j) {
    // d_t(rho S_t) by the product rule at the middle level.
    const double charge_flow = d.rho_t[j] * d.S_t[j] + rho[j] * d.S_tt[j];
    r_cont[j] = d.rho_t[j] - (charge_flow - flux_x[j]);

    double rhs = 0.0;
    switch (params.model) {
      case Model::Conservative: break;
      case Model::Collisional: rhs = -rate * S[j]; break;
      case Model::Radiative: rhs = rate * d.S_tt[j]; break;
      case Model::PhaseDiffusion: rhs = rate * S_xx[j]; break;
      case Model::DAlembertDiffusion: rhs = -rate * (d.S_tt[j] - S_xx[j]); break;
    }
    const double U = potential.empty() ? 0.0 : potential[j];
    const double q = std::isnan(Q[j]) ? 0.0 : Q[j];
    r_hj[j] = d.S_t[j] - 0.5 * (d.S_t[j] * d.S_t[j] - S_x[j] * S_x[j]) + U + q - rhs;
  }

  Diagnostics out;
  out.continuity_residual = l2_norm(g, r_cont, d.masked);
  out.hj_residual = l2_norm(g, r_hj, d.masked);
  const auto charges = conserved_charges(h);
  out.E = charges.E;
  out.N = charges.N;
  out.N_mod = charges.N_mod;
  out.masked_fraction =
      static_cast<double>(std::count(d.masked.begin(), d.masked.end(), true)) /
      static_cast<double>(n);
  out.t = h[1].t;
  return out;
}

Charges conserved_charges(const History& h) {
  const auto d = time_derivatives(h);
  const auto& rho = h[1].rho;
  double N = 0.0, E = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    N += rho[j];
    E -= rho[j] * d.S_t[j];
  }
  const double dx = h[1].grid.dx();
  return {N * dx, (N + E) * dx, E * dx};
}

History history_from_fields(const ComplexField& a, const ComplexField& b, const ComplexField& c,
                            double t0, double dt) {
  auto mid = decompose(b, std::nullopt, t0 + dt);
  auto first = decompose(a, std::span<const double>(mid.S), t0);
  auto last = decompose(c, std::span<const double>(mid.S), t0 + 2.0 * dt);
  return {std::move(first), std::move(mid), std::move(last)};
}

}  // namespace rqbm::madelung
