#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "rqbm/dispersion.hpp"
#include "rqbm/grid.hpp"
#include "rqbm/units.hpp"

namespace rqbm::evolve {

using Complex = std::complex<double>;
using grid::ComplexField;
using grid::Grid1D;

// ---------------------------------------------------------------------------
// Relativistic Schroedinger field. In Compton units the field equation is
//
//   d_t^2 psi = d_x^2 psi + 2 i d_t psi - 2 U psi
//
// so each free mode psi ~ exp(i(k x - w t)) has the two frequencies below.
// ---------------------------------------------------------------------------

struct ModeFrequencies {
  double plus;   // particle branch, sqrt(1 + k^2) - 1
  double minus;  // gapped branch, -sqrt(1 + k^2) - 1
};

ModeFrequencies conservative_mode_frequencies(double k);

struct FieldState {
  ComplexField psi;
  ComplexField dpsi_dt;
  double t = 0.0;

  FieldState(ComplexField psi, ComplexField dpsi_dt, double t = 0.0);
};

/// Sets d_t psi so that every mode is on the particle branch only.
FieldState particle_branch_project(const ComplexField& psi, double t = 0.0);

/// Per-mode amplitudes (particle, gapped) of a state.
struct BranchAmplitudes {
  std::vector<Complex> particle;
  std::vector<Complex> gapped;
};
BranchAmplitudes branch_amplitudes(const FieldState& state);

enum class Method { ExactMode, Stepper };

struct EvolutionConfig {
  double dt = 0.01;
  std::size_t steps = 1;
  Method method = Method::ExactMode;
  std::size_t snapshot_stride = 1;

  /// Throws InputError on bad values or, for the stepper, a CFL violation
  /// (dt < dx / 2 and dt < 0.1 are required).
  void validate(const Grid1D& grid) const;
};

/// Exact free propagation of every mode over `duration` (may be negative).
FieldState propagate_exact(const FieldState& state, double duration);

/// Returns snapshots at steps 0, stride, 2 stride, ... (steps / stride + 1 of
/// them). `potential` is a static U on the grid; empty means U = 0. The exact
/// method only supports U = 0.
std::vector<FieldState> evolve_field(const FieldState& initial, const EvolutionConfig& config,
                                     std::span<const double> potential = {});

/// Receives psi at t0 + m dt for m = -1, 0, ..., steps + 1 in order. The
/// buffer is only valid during the call.
using LevelObserver = std::function<void(long m, const std::vector<Complex>& psi)>;

/// Streams every time level, one step beyond each end, so that three-level
/// central differences exist at every step in [0, steps]. For the stepper the
/// m = -1 level is the one its recursion implies at the start.
void stream_levels(const FieldState& initial, const EvolutionConfig& config,
                   std::span<const double> potential, const LevelObserver& observe);

// ---------------------------------------------------------------------------
// Linearised density equations of the dissipative models, one Fourier mode at
// a time. With rho ~ exp(i w t), omega^j corresponds to (-i d_t)^j, so the
// dispersion polynomial doubles as the mode's characteristic polynomial.
// ---------------------------------------------------------------------------

using Derivatives = std::array<Complex, 4>;  // rho, rho', rho'', rho'''

struct DensityModeState {
  std::vector<double> k;
  std::vector<Derivatives> modes;
  double t = 0.0;
};

/// Right-hand side rho'''' of the mode ODE at wavenumber k.
Complex density_fourth_derivative(const dispersion::DispersionPoly& poly, const Derivatives& d);

/// Advances every mode by `duration` using the characteristic roots, with
/// confluent t^p exp(i w t) terms for repeated roots.
DensityModeState evolve_density(const ModelParams& params, const DensityModeState& init,
                                double duration);

/// Initial data lying on the hydrodynamic branch only: (1, iw, (iw)^2, (iw)^3) * amplitude.
DensityModeState hydrodynamic_initial_state(const ModelParams& params, std::span<const double> k,
                                            Complex amplitude = 1.0);

struct GrowthReport {
  std::vector<Complex> roots;
  std::size_t growing = 0;       // roots with Im w < 0
  bool runaway = false;          // radiative model only
  Complex runaway_root{0.0, 0.0};
};

/// Counts exponentially growing characteristic roots. For the radiative model
/// the most negative-Im root is flagged as the runaway solution.
GrowthReport classify_growth(const ModelParams& params, double k);

// ---------------------------------------------------------------------------
// Single-exponential fit a exp(-i w t), field convention.
// ---------------------------------------------------------------------------

struct ModeFit {
  Complex omega;
  Complex amplitude;
  double relative_residual = 0.0;
  bool poor_fit = false;  // relative_residual > 1e-3
};

ModeFit fit_mode_frequency(std::span<const double> t, std::span<const Complex> samples);

}  // namespace rqbm::evolve
