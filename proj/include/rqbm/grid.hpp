#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace rqbm::grid {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

/// Periodic 1-D grid, x_j = x_min + j dx for j in [0, n). Wavenumbers are
/// stored in transform order: 0, 1, ..., n/2 - 1, -n/2, ..., -1 (times 2 pi / L).
///
/// Grids are immutable; copies share one set of FFT plans.
class Grid1D {
 public:
  Grid1D(std::size_t n, double length, double x_min = 0.0);

  /// Grid on [-length/2, length/2).
  static Grid1D centered(std::size_t n, double length) {
    return Grid1D(n, length, -0.5 * length);
  }

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }
  double x_min() const { return x_min_; }
  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

  /// Index of the mode with wavenumber 2 pi m / L, for |m| < n/2.
  std::size_t mode_index(long m) const;

  const detail::FftPlans& plans() const { return *plans_; }

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.n_ == b.n_ && a.length_ == b.length_ && a.x_min_ == b.x_min_;
  }

 private:
  std::size_t n_;
  double length_;
  double dx_;
  double x_min_;
  std::vector<double> positions_;
  std::vector<double> wavenumbers_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Complex samples on a grid; values.size() == grid.n() always.
struct ComplexField {
  Grid1D grid;
  std::vector<Complex> values;

  explicit ComplexField(Grid1D g);  // zero field
  ComplexField(Grid1D g, std::vector<Complex> v);

  /// Sum |psi|^2 dx.
  double norm_squared() const;
};

enum class Direction { Forward, Inverse };

/// Unitary DFT (1/sqrt(n) on both sides), so Parseval holds on raw sums.
ComplexField transform(const ComplexField& field, Direction direction);
std::vector<Complex> transform(const Grid1D& grid, std::span<const Complex> values,
                               Direction direction);

/// d^order/dx^order by multiplying mode j with (i k_j)^order. order in 1..4.
ComplexField spectral_derivative(const ComplexField& field, int order);
std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> values,
                                        int order);

/// Checks the packet-clearance rule: returns false if |f| exceeds `tolerance`
/// times its maximum within `clearance` of the periodic wrap point.
bool clear_of_boundary(const ComplexField& field, double clearance, double tolerance = 1e-8);

}  // namespace rqbm::grid
