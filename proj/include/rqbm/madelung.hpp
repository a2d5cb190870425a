#pragma once

// Madelung split psi = sqrt(rho) exp(i S) and the relativistic hydrodynamic
// equations in Compton units, metric signature (+,-,-,-):
//
//   continuity:      d_t rho = d_t(rho d_t S) - d_x(rho d_x S)
//   Hamilton-Jacobi: d_t S - ((d_t S)^2 - (d_x S)^2) / 2 + U + Q = RHS
//   Bohm potential:  Q = (d_t^2 sqrt(rho) - d_x^2 sqrt(rho)) / (2 sqrt(rho))
//
// with RHS = 0, -gamma S, tau d_t^2 S, D d_x^2 S or -D box S per model.
// Time derivatives always come from stored history, never from the field
// equation, so residuals are independent checks of an evolution.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rqbm/grid.hpp"
#include "rqbm/units.hpp"

namespace rqbm::madelung {

using grid::ComplexField;
using grid::Grid1D;

/// Densities below this are treated as nodes: phase and Q are undefined there.
inline constexpr double kDensityFloor = 1e-30;

struct MadelungFields {
  Grid1D grid;
  std::vector<double> rho;
  std::vector<double> S;
  std::vector<bool> masked;  // rho < kDensityFloor; S continued from a neighbour
  double t = 0.0;

  ComplexField reconstruct() const;
};

/// rho = |psi|^2 and the spatially unwrapped phase. With `prior_S`, the
/// result is shifted by the multiple of 2 pi closest to it.
MadelungFields decompose(const ComplexField& psi,
                         std::optional<std::span<const double>> prior_S = std::nullopt,
                         double t = 0.0);

/// max |sqrt(rho) e^{iS} - psi| / max |psi| over points above the floor.
double reconstruction_error(const ComplexField& psi, const MadelungFields& fields);

/// d_x S or d_x^2 S of an unwrapped phase that may wind around the periodic
/// domain: the winding ramp is removed before spectral differentiation.
std::vector<double> phase_derivative(const Grid1D& grid, std::span<const double> S, int order);

/// Q at the middle of three equally spaced density levels. NaN where masked.
std::vector<double> quantum_potential(const Grid1D& grid,
                                      std::span<const std::vector<double>> rho_levels, double dt);

/// Q without the time-derivative term, for a single static density.
std::vector<double> quantum_potential_static(const Grid1D& grid, std::span<const double> rho);

struct Diagnostics {
  double continuity_residual = 0.0;  // L2 norm
  double hj_residual = 0.0;          // L2 norm
  double E = 0.0;                    // -int rho d_t S
  double N = 0.0;                    // int rho
  double N_mod = 0.0;                // int rho (1 - d_t S)
  double masked_fraction = 0.0;      // share of points excluded from the norms
  double t = 0.0;
};

using History = std::array<MadelungFields, 3>;

/// Residuals of both hydrodynamic equations at the middle level, plus the
/// charges. `potential` is a static U on the grid (empty = 0).
Diagnostics residuals(const History& history, const ModelParams& params,
                      std::span<const double> potential = {});

struct Charges {
  double N;
  double N_mod;
  double E;
};

Charges conserved_charges(const History& history);

/// Convenience: decompose three consecutive psi snapshots with temporal
/// phase alignment.
History history_from_fields(const ComplexField& a, const ComplexField& b, const ComplexField& c,
                            double t0, double dt);

}  // namespace rqbm::madelung
