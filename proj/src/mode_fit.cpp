#include <Eigen/Dense>

#include <cmath>

#include "rqbm/errors.hpp"
#include "rqbm/evolve.hpp"

namespace rqbm::evolve {

namespace {

constexpr Complex kI(0.0, 1.0);

}  // namespace

ModeFit fit_mode_frequency(std::span<const double> t, std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  if (t.size() != n) throw InputError("time and sample arrays differ in length");
  if (n < 4) throw InputError("frequency fit needs at least 4 samples");
  const double step = t[1] - t[0];
  if (!(step > 0.0)) throw InputError("sample times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * step) {
      throw InputError("sample times must be uniformly spaced");
    }
  }
  double energy = 0.0;
  for (const auto& y : samples) energy += std::norm(y);
  if (energy == 0.0) throw InputError("cannot fit a frequency to an all-zero series");

  // Linear-prediction start: z = exp(-i w step).
  Complex cross = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cross += std::conj(samples[i]) * samples[i + 1];
    norm += std::norm(samples[i]);
  }
  Complex omega = norm > 0.0 ? kI * std::log(cross / norm) / step : Complex(0.0);

  // Gauss-Newton on (amplitude, omega) with times measured from t[0].
  Eigen::VectorXcd y(static_cast<Eigen::Index>(n));
  Eigen::VectorXd tau(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    y(static_cast<Eigen::Index>(i)) = samples[i];
    tau(static_cast<Eigen::Index>(i)) = t[i] - t[0];
  }
  const auto basis = [&](Complex w) {
    Eigen::VectorXcd e(tau.size());
    for (Eigen::Index i = 0; i < tau.size(); ++i) e(i) = std::exp(-kI * w * tau(i));
    return e;
  };
  Eigen::VectorXcd e = basis(omega);
  Complex amplitude = e.dot(y) / e.squaredNorm();
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXcd residual = y - amplitude * e;
    Eigen::MatrixX2cd jacobian(tau.size(), 2);
    jacobian.col(0) = e;
    for (Eigen::Index i = 0; i < tau.size(); ++i) jacobian(i, 1) = -kI * tau(i) * amplitude * e(i);
    const Eigen::Vector2cd delta = jacobian.colPivHouseholderQr().solve(residual);
    if (!std::isfinite(std::abs(delta(0))) || !std::isfinite(std::abs(delta(1)))) break;
    amplitude += delta(0);
    omega += delta(1);
    e = basis(omega);
    if (std::abs(delta(1)) <= 1e-15 * std::max(1.0, std::abs(omega))) break;
  }
  amplitude = e.dot(y) / e.squaredNorm();

  ModeFit fit;
  fit.omega = omega;
  fit.amplitude = amplitude * std::exp(kI * omega * t[0]);
  fit.relative_residual = (y - amplitude * e).norm() / y.norm();
  fit.poor_fit = fit.relative_residual > 1e-3;
  return fit;
}

}  // namespace rqbm::evolve
