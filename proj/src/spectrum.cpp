#include "rqbm/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rqbm/errors.hpp"

namespace rqbm::spectrum {

namespace {

void check_count(const Grid1D& g, std::size_t count) {
  if (count == 0) throw InputError("eigenvalue count must be positive");
  if (count > g.n() / 4) {
    throw InputError("requested " + std::to_string(count) + " eigenvalues but a grid of " +
                     std::to_string(g.n()) + " points resolves at most " +
                     std::to_string(g.n() / 4));
  }
}

// Lowest eigenvalues of -(1/2) D2 + diag(U) with spacing h, Dirichlet ends.
std::vector<double> tridiagonal_eigen(std::span<const double> U, double h, std::size_t count) {
  const auto n = static_cast<Eigen::Index>(U.size());
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(n - 1, -0.5 / (h * h));
  for (Eigen::Index j = 0; j < n; ++j) diag(j) = 1.0 / (h * h) + U[static_cast<std::size_t>(j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("tridiagonal eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();  // ascending
  return std::vector<double>(ev.data(), ev.data() + static_cast<std::ptrdiff_t>(count));
}

}  // namespace

PotentialSpec PotentialSpec::harmonic(double omega0) {
  PotentialSpec p;
  p.kind = Kind::Harmonic;
  p.omega0 = omega0;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::box(double width) {
  PotentialSpec p;
  p.kind = Kind::Box;
  p.width = width;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> values) {
  PotentialSpec p;
  p.kind = Kind::Tabulated;
  p.values = std::move(values);
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case Kind::Free: break;
    case Kind::Harmonic:
      if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw InputError("harmonic potential needs omega0 > 0");
      }
      break;
    case Kind::Box:
      if (!(width > 0.0) || !std::isfinite(width)) throw InputError("box needs width > 0");
      break;
    case Kind::Tabulated:
      if (values.empty()) throw InputError("tabulated potential is empty");
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j])) {
          throw InputError("tabulated potential is not finite at index " + std::to_string(j));
        }
      }
      break;
  }
}

std::vector<double> nonrel_eigen(const PotentialSpec& potential, const Grid1D& g,
                                 std::size_t count) {
  potential.validate();
  check_count(g, count);
  using Kind = PotentialSpec::Kind;
  switch (potential.kind) {
    case Kind::Free: {
      std::vector<double> eps;
      for (double k : g.wavenumbers()) eps.push_back(0.5 * k * k);
      std::sort(eps.begin(), eps.end());
      eps.resize(count);
      return eps;
    }
    case Kind::Box: {
      const std::vector<double> U(g.n(), 0.0);
      return tridiagonal_eigen(U, potential.width / static_cast<double>(g.n() + 1), count);
    }
    case Kind::Harmonic: {
      std::vector<double> U(g.n());
      const double w2 = potential.omega0 * potential.omega0;
      for (std::size_t j = 0; j < g.n(); ++j) U[j] = 0.5 * w2 * g.x(j) * g.x(j);
      return tridiagonal_eigen(U, g.dx(), count);
    }
    case Kind::Tabulated:
      if (potential.values.size() != g.n()) {
        throw InputError("tabulated potential has " + std::to_string(potential.values.size()) +
                         " values for a grid of " + std::to_string(g.n()));
      }
      return tridiagonal_eigen(potential.values, g.dx(), count);
  }
  throw InputError("unknown potential kind");
}

std::vector<double> nonrel_eigen_refined(const PotentialSpec& potential, const Grid1D& g,
                                         std::size_t count) {
  if (potential.kind == PotentialSpec::Kind::Tabulated) {
    throw UnsupportedError("a tabulated potential cannot be refined beyond its own grid");
  }
  const auto coarse = nonrel_eigen(potential, g, count);
  const auto fine = nonrel_eigen(potential, Grid1D(2 * g.n(), g.length(), g.x_min()), count);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

std::vector<double> analytic_eigenvalues(const PotentialSpec& potential, std::size_t count) {
  potential.validate();
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(i);
    switch (potential.kind) {
      case PotentialSpec::Kind::Harmonic: out[i] = (n + 0.5) * potential.omega0; break;
      case PotentialSpec::Kind::Box:
        out[i] = (n + 1.0) * (n + 1.0) * std::numbers::pi * std::numbers::pi /
                 (2.0 * potential.width * potential.width);
        break;
      default: throw UnsupportedError("no closed-form spectrum for this potential");
    }
  }
  return out;
}

SpectrumResult relativistic_map(std::span<const double> epsilon) {
  SpectrumResult r;
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    const double eps = epsilon[i];
    if (!std::isfinite(eps) || !(1.0 + 2.0 * eps > 0.0)) {
      throw DomainError("epsilon[" + std::to_string(i) + "] = " + std::to_string(eps) +
                            " is outside the domain eps > -1/2",
                        i);
    }
    const double E = std::sqrt(1.0 + 2.0 * eps);
    const double series = 1.0 + eps - 0.5 * eps * eps;
    r.epsilon.push_back(eps);
    r.E.push_back(E);
    r.E_series.push_back(series);
    r.rel_gap.push_back(std::abs(E - series) / E);
  }
  return r;
}

}  // namespace rqbm::spectrum
