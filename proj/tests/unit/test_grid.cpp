#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rqbm/errors.hpp"
#include "rqbm/grid.hpp"

using namespace rqbm;
using namespace rqbm::grid;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}
}  // namespace

TEST_CASE("grid geometry") {
  const Grid1D g(16, 8.0, -4.0);
  CHECK(g.dx() == 0.5);
  CHECK(g.dx() * static_cast<double>(g.n()) == g.length());
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(15) == 3.5);
  const auto& k = g.wavenumbers();
  const double dk = 2.0 * kPi / 8.0;
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(dk));
  CHECK(k[7] == doctest::Approx(7 * dk));
  CHECK(k[8] == doctest::Approx(-8 * dk));
  CHECK(k[15] == doctest::Approx(-dk));
  CHECK(g.mode_index(-1) == 15);
  CHECK(g.mode_index(3) == 3);
  CHECK_THROWS_AS(g.mode_index(8), InputError);
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(Grid1D(7, 1.0), InputError);
  CHECK_THROWS_AS(Grid1D(6, 1.0), InputError);
  CHECK_THROWS_AS(Grid1D(8, 0.0), InputError);
  const Grid1D g(8, 1.0);
  CHECK_THROWS_AS(ComplexField(g, std::vector<Complex>(7)), InputError);
  CHECK_THROWS_AS(transform(g, std::vector<Complex>(9), Direction::Forward), InputError);
}

TEST_CASE("constant and single-mode transforms") {
  const Grid1D g(32, 5.0);
  const ComplexField one(g, std::vector<Complex>(32, 1.0));
  const auto c = transform(one, Direction::Forward);
  CHECK(std::abs(c.values[0] - std::sqrt(32.0)) < 1e-13);
  for (std::size_t j = 1; j < 32; ++j) CHECK(std::abs(c.values[j]) < 1e-13);

  std::vector<Complex> wave(32);
  for (std::size_t j = 0; j < 32; ++j) wave[j] = std::exp(Complex(0.0, 2.0 * kPi * g.x(j) / 5.0));
  const auto w = transform(g, wave, Direction::Forward);
  for (std::size_t j = 0; j < 32; ++j) {
    if (j == 1) {
      CHECK(std::abs(w[j]) == doctest::Approx(std::sqrt(32.0)));
    } else {
      CHECK(std::abs(w[j]) < 1e-12);
    }
  }
}

TEST_CASE("round trip and parseval on a random field") {
  const Grid1D g(128, 10.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<Complex> v(128);
  for (auto& z : v) z = Complex(n(rng), n(rng));
  const auto f = transform(g, v, Direction::Forward);
  const auto back = transform(g, f, Direction::Inverse);
  double scale = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    scale = std::max(scale, std::abs(v[j]));
    e0 += std::norm(v[j]);
    e1 += std::norm(f[j]);
  }
  CHECK(max_abs_diff(back, v) <= 1e-13 * scale);
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("second derivative of a sine") {
  const double L = 3.0;
  const Grid1D g(64, L);
  std::vector<double> s(64), expected(64);
  const double k = 2.0 * kPi / L;
  for (std::size_t j = 0; j < 64; ++j) {
    s[j] = std::sin(k * g.x(j));
    expected[j] = -k * k * s[j];
  }
  const auto d2 = spectral_derivative(g, s, 2);
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(d2[j] - expected[j]) < 1e-12 * k * k);

  const std::vector<double> constant(64, 3.0);
  for (double v : spectral_derivative(g, constant, 1)) CHECK(std::abs(v) < 1e-13);
  CHECK_THROWS_AS(spectral_derivative(g, s, 5), InputError);
  CHECK_THROWS_AS(spectral_derivative(g, s, 0), InputError);
}

TEST_CASE("gaussian laplacian against fourth-order finite differences") {
  const double L = 100.0;  // the FD4 oracle itself errs by ~1e-6 below L = 50
  const Grid1D g = Grid1D::centered(256, L);
  const double sigma = L / 20.0;
  std::vector<Complex> f(256);
  for (std::size_t j = 0; j < 256; ++j) f[j] = std::exp(-g.x(j) * g.x(j) / (2 * sigma * sigma));
  const auto spectral = spectral_derivative(ComplexField(g, f), 2);
  const auto fd = oracle::fd4_second_derivative<Complex>(f, g.dx());
  CHECK(max_abs_diff(spectral.values, fd) < 1e-6);
}

TEST_CASE("two first derivatives equal one second derivative") {
  const Grid1D g(128, 2.0 * kPi);
  std::vector<Complex> f(128);
  for (std::size_t j = 0; j < 128; ++j) {
    const double x = g.x(j);
    f[j] = std::exp(Complex(std::sin(x), 0.5 * std::cos(2.0 * x)));
  }
  const ComplexField field(g, f);
  const auto once = spectral_derivative(spectral_derivative(field, 1), 1);
  const auto twice = spectral_derivative(field, 2);
  CHECK(max_abs_diff(once.values, twice.values) < 1e-11);
}

TEST_CASE("boundary clearance check") {
  const Grid1D g = Grid1D::centered(512, 200.0);
  std::vector<Complex> narrow(512), wide(512);
  for (std::size_t j = 0; j < 512; ++j) {
    const double x = g.x(j);
    narrow[j] = std::exp(-x * x / (4.0 * 4.0));
    wide[j] = std::exp(-x * x / (4.0 * 40.0 * 40.0));
  }
  CHECK(clear_of_boundary(ComplexField(g, narrow), 20.0));
  CHECK_FALSE(clear_of_boundary(ComplexField(g, wide), 20.0));
}
