#include "rqbm/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rqbm::dispersion {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_k(double k) {
  if (!std::isfinite(k) || k < 0.0) {
    throw InputError("wavenumber must be finite and >= 0, got " + std::to_string(k));
  }
}

std::vector<Complex> cube_roots(Complex z) {
  const Complex principal = std::pow(z, 1.0 / 3.0);
  const Complex turn = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  return {principal, principal * turn, principal * std::conj(turn)};
}

// Shared relativistic part (k^2 - w^2)^2 / 4 - w^2.
Complex free_part(Complex omega, double k) {
  const Complex u = k * k - omega * omega;
  return 0.25 * u * u - omega * omega;
}

}  // namespace

int DispersionPoly::degree() const {
  for (int d = 4; d > 0; --d) {
    if (coefficients[static_cast<std::size_t>(d)] != Complex(0.0)) return d;
  }
  return 0;
}

Complex DispersionPoly::operator()(Complex omega) const {
  Complex p = coefficients[4];
  for (int i = 3; i >= 0; --i) p = p * omega + coefficients[static_cast<std::size_t>(i)];
  return p;
}

DispersionPoly build_polynomial(const ModelParams& params, double k) {
  check_k(k);
  params.validate();
  DispersionPoly poly;
  poly.k = k;
  poly.params = params;
  auto& c = poly.coefficients;
  const double k2 = k * k;
  if (params.model == Model::Conservative) {
    c = {Complex(-k2), Complex(2.0), Complex(1.0), Complex(0.0), Complex(0.0)};
    return poly;
  }
  c = {Complex(0.25 * k2 * k2), Complex(0.0), Complex(-(1.0 + 0.5 * k2)), Complex(0.0),
       Complex(0.25)};
  const double rate = params.rate();
  switch (params.model) {
    case Model::Collisional:
      c[1] += kI * rate;
      break;
    case Model::Radiative:
      c[3] += kI * rate;
      break;
    case Model::PhaseDiffusion:
      c[1] += kI * rate * k2;
      break;
    case Model::DAlembertDiffusion:
      c[1] += kI * rate * k2;
      c[3] -= kI * rate;
      break;
    case Model::Conservative:
      break;
  }
  return poly;
}

Complex collisional_expression(Complex gamma, Complex omega, double k) {
  return free_part(omega, k) + kI * gamma * omega;
}

Complex dispersion_expression(const ModelParams& params, Complex omega, double k) {
  switch (params.model) {
    case Model::Conservative:
      return omega * (omega + 2.0) - k * k;
    case Model::Collisional:
      return collisional_expression(params.rate(), omega, k);
    case Model::Radiative:
      return free_part(omega, k) + kI * params.rate() * omega * omega * omega;
    case Model::PhaseDiffusion:
      return free_part(omega, k) + kI * params.rate() * k * k * omega;
    case Model::DAlembertDiffusion:
      return free_part(omega, k) + kI * params.rate() * omega * (k * k - omega * omega);
  }
  throw InputError("unknown model");
}

RootSet solve_roots(const DispersionPoly& poly, const SolverTolerances& tol) {
  RootSet roots = solve_polynomial(poly.coefficients, tol);
  roots.k = poly.k;
  return roots;
}

std::vector<Complex> asymptotic_candidates(const ModelParams& params, double k, Regime regime) {
  check_k(k);
  params.validate();
  const double rate = params.rate();
  const double k2 = k * k;
  const auto need_positive_rate = [&](const char* name) {
    if (!(rate > 0.0)) {
      throw InputError(std::string("asymptotic limit needs a positive ") + name);
    }
  };
  const bool low = regime == Regime::Low;
  switch (params.model) {
    case Model::Conservative:
      if (low) return {Complex(0.5 * k2)};
      break;
    case Model::Collisional:
      if (low) {
        need_positive_rate("gamma");
        return {kI * k2 * k2 / (4.0 * rate)};
      }
      return {Complex(2.0), Complex(-2.0)};
    case Model::Radiative:
      if (low) {
        need_positive_rate("tau");
        return cube_roots(kI * k2 * k2 / (4.0 * rate));
      }
      return {-4.0 * kI * rate};
    case Model::PhaseDiffusion:
      if (low) {
        need_positive_rate("diffusion");
        return {kI * k2 / (4.0 * rate)};
      }
      return cube_roots(-4.0 * kI * rate * k2);
    case Model::DAlembertDiffusion:
      break;
  }
  throw UnsupportedError(std::string("no closed-form ") + (low ? "low" : "high") +
                         "-frequency limit for the " + std::string(to_string(params.model)) +
                         " model");
}

Complex asymptotic_omega(const ModelParams& params, double k, Regime regime) {
  return asymptotic_candidates(params, k, regime).front();
}

Complex effective_friction(const ModelParams& params, Complex omega, double k) {
  const double rate = params.rate();
  switch (params.model) {
    case Model::Collisional: return rate;
    case Model::Radiative: return rate * omega * omega;
    case Model::PhaseDiffusion: return rate * k * k;
    case Model::DAlembertDiffusion: return rate * (k * k - omega * omega);
    case Model::Conservative: break;
  }
  throw InputError("the conservative model has no friction to compare");
}

double friction_equivalence(const ModelParams& a, const ModelParams& b,
                            std::span<const FrictionSample> samples) {
  a.validate();
  b.validate();
  const bool a_collisional = a.model == Model::Collisional;
  const ModelParams& other = a_collisional ? b : a;
  if ((!a_collisional && b.model != Model::Collisional) ||
      other.model == Model::Collisional || other.model == Model::Conservative) {
    throw InputError(
        "friction equivalence compares the collisional model with radiative, phase-diffusion "
        "or dalembert-diffusion");
  }
  double worst = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.k)) throw InputError("sample wavenumber must be finite");
    const Complex gamma = effective_friction(other, s.omega, s.k);
    const Complex lhs = collisional_expression(gamma, s.omega, s.k);
    // The other side goes through the expanded coefficients.
    const auto poly = build_polynomial(other, std::abs(s.k));
    const Complex rhs = poly(s.omega);
    const Complex u = s.k * s.k - s.omega * s.omega;
    const double scale = std::abs(0.25 * u * u) + std::norm(s.omega) +
                         std::abs(gamma * s.omega) + std::abs(rhs);
    if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

std::string_view to_string(BranchLabel label) {
  switch (label) {
    case BranchLabel::Hydrodynamic: return "hydrodynamic";
    case BranchLabel::ZitterbewegungGapped: return "zitterbewegung-gapped";
    case BranchLabel::Other: return "other";
  }
  return "?";
}

}  // namespace rqbm::dispersion
