#pragma once

// Nonrelativistic eigenvalues eps_n of H = -d^2/dx^2 / 2 + U and their
// relativistic images E_n = sqrt(1 + 2 eps_n) (Compton units).

#include <cstddef>
#include <span>
#include <vector>

#include "rqbm/grid.hpp"

namespace rqbm::spectrum {

using grid::Grid1D;

struct PotentialSpec {
  enum class Kind { Free, Harmonic, Box, Tabulated };

  Kind kind = Kind::Free;
  double omega0 = 0.0;          // Harmonic: U = omega0^2 x^2 / 2
  double width = 0.0;           // Box: infinite walls at 0 and width
  std::vector<double> values;   // Tabulated: U on the grid points

  static PotentialSpec free() { return {}; }
  static PotentialSpec harmonic(double omega0);
  static PotentialSpec box(double width);
  static PotentialSpec tabulated(std::vector<double> values);

  void validate() const;
};

/// Lowest `count` eigenvalues, ascending.
///   Free:      k_j^2 / 2 on the periodic grid (exact for plane waves).
///   Box:       3-point Laplacian with grid.n() interior points on [0, width];
///              the grid's own length is not used.
///   Harmonic,
///   Tabulated: 3-point Laplacian on the grid points, Dirichlet just outside
///              both ends.
/// Requires count <= n/4.
std::vector<double> nonrel_eigen(const PotentialSpec& potential, const Grid1D& grid,
                                 std::size_t count);

/// One Richardson step: (4 eps(2n) - eps(n)) / 3 on the same domain. Not
/// available for Tabulated potentials.
std::vector<double> nonrel_eigen_refined(const PotentialSpec& potential, const Grid1D& grid,
                                         std::size_t count);

/// Closed forms: (n + 1/2) omega0 and (n + 1)^2 pi^2 / (2 width^2).
std::vector<double> analytic_eigenvalues(const PotentialSpec& potential, std::size_t count);

struct SpectrumResult {
  std::vector<double> epsilon;
  std::vector<double> E;         // sqrt(1 + 2 eps)
  std::vector<double> E_series;  // 1 + eps - eps^2 / 2
  std::vector<double> rel_gap;   // |E - E_series| / E
};

/// Throws DomainError naming the first index with eps <= -1/2.
SpectrumResult relativistic_map(std::span<const double> epsilon);

}  // namespace rqbm::spectrum
