#include "rqbm/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "rqbm/errors.hpp"

namespace rqbm::grid {

namespace detail {

// FFTW planning is not thread-safe; execution through the new-array interface
// is. Plans are created once per grid under a global lock and then shared.
struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  explicit FftPlans(std::size_t n) {
    static std::mutex planner_mutex;
    std::lock_guard lock(planner_mutex);
    std::vector<Complex> in(n), out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const int size = static_cast<int>(n);
    forward = fftw_plan_dft_1d(size, pin, pout, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse = fftw_plan_dft_1d(size, pin, pout, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

Grid1D::Grid1D(std::size_t n, double length, double x_min)
    : n_(n), length_(length), dx_(length / static_cast<double>(n)), x_min_(x_min) {
  if (n < 8 || n % 2 != 0) {
    throw InputError("grid point count must be even and >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length) || !std::isfinite(x_min)) {
    throw InputError("grid length must be finite and positive");
  }
  positions_.resize(n);
  wavenumbers_.resize(n);
  const double dk = 2.0 * std::numbers::pi / length;
  const long half = static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    positions_[j] = x(j);
    const long m = static_cast<long>(j) < half ? static_cast<long>(j)
                                                : static_cast<long>(j) - static_cast<long>(n);
    wavenumbers_[j] = dk * static_cast<double>(m);
  }
  plans_ = std::make_shared<const detail::FftPlans>(n);
}

std::size_t Grid1D::mode_index(long m) const {
  const long half = static_cast<long>(n_ / 2);
  if (m >= half || m < -half) {
    throw InputError("mode " + std::to_string(m) + " not representable on this grid");
  }
  return static_cast<std::size_t>(m >= 0 ? m : m + static_cast<long>(n_));
}

ComplexField::ComplexField(Grid1D g) : grid(std::move(g)), values(grid.n()) {}

ComplexField::ComplexField(Grid1D g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.n()) {
    throw InputError("field length " + std::to_string(values.size()) +
                     " does not match grid size " + std::to_string(grid.n()));
  }
}

double ComplexField::norm_squared() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * grid.dx();
}

std::vector<Complex> transform(const Grid1D& grid, std::span<const Complex> values,
                               Direction direction) {
  if (values.size() != grid.n()) {
    throw InputError("transform input length does not match grid size");
  }
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(grid.n());
  const auto& plans = grid.plans();
  fftw_execute_dft(direction == Direction::Forward ? plans.forward : plans.inverse,
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.n()));
  for (auto& v : out) v *= scale;
  return out;
}

ComplexField transform(const ComplexField& field, Direction direction) {
  return ComplexField(field.grid, transform(field.grid, field.values, direction));
}

namespace {

Complex derivative_factor(double k, int order) {
  const Complex ik(0.0, k);
  Complex f = 1.0;
  for (int i = 0; i < order; ++i) f *= ik;
  return f;
}

void check_order(int order) {
  if (order < 1 || order > 4) {
    throw InputError("spectral derivative order must be 1..4, got " + std::to_string(order));
  }
}

}  // namespace

ComplexField spectral_derivative(const ComplexField& field, int order) {
  check_order(order);
  auto modes = transform(field.grid, field.values, Direction::Forward);
  const auto& k = field.grid.wavenumbers();
  for (std::size_t j = 0; j < modes.size(); ++j) modes[j] *= derivative_factor(k[j], order);
  return ComplexField(field.grid, transform(field.grid, modes, Direction::Inverse));
}

std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> values,
                                        int order) {
  if (values.size() != grid.n()) {
    throw InputError("derivative input length does not match grid size");
  }
  std::vector<Complex> c(values.begin(), values.end());
  const auto d = spectral_derivative(ComplexField(grid, std::move(c)), order);
  std::vector<double> out(grid.n());
  std::transform(d.values.begin(), d.values.end(), out.begin(),
                 [](const Complex& z) { return z.real(); });
  return out;
}

bool clear_of_boundary(const ComplexField& field, double clearance, double tolerance) {
  double peak = 0.0;
  for (const auto& v : field.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return true;
  const auto& g = field.grid;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double from_left = g.x(j) - g.x_min();
    const double from_right = g.x_min() + g.length() - g.x(j);
    if (std::min(from_left, from_right) < clearance &&
        std::abs(field.values[j]) > tolerance * peak) {
      return false;
    }
  }
  return true;
}

}  // namespace rqbm::grid
