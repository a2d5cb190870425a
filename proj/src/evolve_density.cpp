#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

#include "rqbm/errors.hpp"
#include "rqbm/evolve.hpp"

namespace rqbm::evolve {

namespace {

constexpr Complex kI(0.0, 1.0);

// One basis function t^power exp(rate t) of the mode solution.
struct Basis {
  Complex rate;  // i omega
  int power;
};

double falling_factorial(int n, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= static_cast<double>(n - i);
  return f;
}

double binomial(int n, int k) { return falling_factorial(n, k) / falling_factorial(k, k); }

// d^order/dt^order [t^p exp(r t)] evaluated at t.
Complex basis_derivative(const Basis& b, int order, double t) {
  Complex sum = 0.0;
  for (int q = 0; q <= std::min(order, b.power); ++q) {
    const double tp = b.power - q == 0 ? 1.0 : std::pow(t, b.power - q);
    sum += binomial(order, q) * falling_factorial(b.power, q) * tp *
           std::pow(b.rate, order - q);
  }
  return sum * std::exp(b.rate * t);
}

std::vector<Basis> mode_basis(const dispersion::RootSet& roots) {
  std::vector<Basis> basis;
  std::vector<bool> used(roots.roots.size(), false);
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    if (used[i]) continue;
    int power = 0;
    for (std::size_t j = i; j < roots.roots.size(); ++j) {
      if (!used[j] && roots.roots[j] == roots.roots[i]) {
        used[j] = true;
        basis.push_back({kI * roots.roots[i], power++});
      }
    }
  }
  return basis;
}

void check_dissipative(const ModelParams& params) {
  params.validate();
  if (!is_dissipative(params.model)) {
    throw InputError("density evolution needs a dissipative model");
  }
}

}  // namespace

Complex density_fourth_derivative(const dispersion::DispersionPoly& poly, const Derivatives& d) {
  // sum_j c_j (-i)^j rho^(j) = 0 with (-i)^4 = 1.
  const auto& c = poly.coefficients;
  Complex power = 1.0;
  Complex sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    sum += c[j] * power * d[j];
    power *= -kI;
  }
  return -sum / c[4];
}

DensityModeState evolve_density(const ModelParams& params, const DensityModeState& init,
                                double duration) {
  check_dissipative(params);
  if (init.k.size() != init.modes.size()) {
    throw InputError("density state needs one derivative vector per wavenumber");
  }
  if (!std::isfinite(duration)) throw InputError("duration must be finite");

  DensityModeState out;
  out.k = init.k;
  out.t = init.t + duration;
  out.modes.resize(init.modes.size());
  for (std::size_t m = 0; m < init.k.size(); ++m) {
    const auto poly = dispersion::build_polynomial(params, std::abs(init.k[m]));
    const auto roots = dispersion::solve_roots(poly);
    const auto basis = mode_basis(roots);
    if (basis.size() != 4) {
      throw NumericalFailure("characteristic polynomial is not quartic at k = " +
                             std::to_string(init.k[m]));
    }
    Eigen::Matrix4cd at_zero;
    Eigen::Vector4cd rhs;
    for (int r = 0; r < 4; ++r) {
      rhs(r) = init.modes[m][static_cast<std::size_t>(r)];
      for (int b = 0; b < 4; ++b) at_zero(r, b) = basis_derivative(basis[static_cast<std::size_t>(b)], r, 0.0);
    }
    Eigen::Vector4cd coeff = at_zero.fullPivLu().solve(rhs);
    // Components at rounding level are noise from the solve. Left in, a
    // growing root amplifies them until branch-only data is swamped (or
    // 0 * inf poisons the result), so they are dropped.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * coeff.cwiseAbs().maxCoeff();
    for (int b = 0; b < 4; ++b) {
      if (std::abs(coeff(b)) <= floor) coeff(b) = 0.0;
    }
    for (int r = 0; r < 4; ++r) {
      Complex value = 0.0;
      for (int b = 0; b < 4; ++b) {
        if (coeff(b) == Complex(0.0)) continue;
        value += coeff(b) * basis_derivative(basis[static_cast<std::size_t>(b)], r, duration);
      }
      out.modes[m][static_cast<std::size_t>(r)] = value;
    }
  }
  return out;
}

DensityModeState hydrodynamic_initial_state(const ModelParams& params, std::span<const double> k,
                                            Complex amplitude) {
  check_dissipative(params);
  DensityModeState state;
  state.k.assign(k.begin(), k.end());
  for (double kj : k) {
    const auto roots = dispersion::solve_roots(dispersion::build_polynomial(params, std::abs(kj)));
    const Complex rate = kI * roots.roots[dispersion::hydrodynamic_index(roots.roots)];
    Derivatives d;
    Complex power = amplitude;
    for (auto& v : d) {
      v = power;
      power *= rate;
    }
    state.modes.push_back(d);
  }
  return state;
}

GrowthReport classify_growth(const ModelParams& params, double k) {
  check_dissipative(params);
  GrowthReport report;
  report.roots = dispersion::solve_roots(dispersion::build_polynomial(params, k)).roots;
  double most_negative = 0.0;
  for (const auto& w : report.roots) {
    if (w.imag() < -1e-12 * std::max(1.0, std::abs(w))) {
      ++report.growing;
      if (w.imag() < most_negative) {
        most_negative = w.imag();
        report.runaway_root = w;
      }
    }
  }
  report.runaway = params.model == Model::Radiative && report.growing > 0;
  if (!report.runaway) report.runaway_root = 0.0;
  return report;
}

}  // namespace rqbm::evolve
