#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "rqbm/dispersion.hpp"

namespace rqbm::dispersion {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Horner evaluation of the polynomial and its first derivative.
std::pair<Complex, Complex> horner(std::span<const Complex> c, Complex x) {
  Complex p = c.back();
  Complex dp = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
  return {p, dp};
}

std::vector<Complex> derivative(std::span<const Complex> c) {
  std::vector<Complex> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

Complex newton_polish(std::span<const Complex> c, Complex x, int max_iterations) {
  Complex best = x;
  double best_abs = std::abs(horner(c, x).first);
  for (int it = 0; it < max_iterations && best_abs > 0.0; ++it) {
    const auto [p, dp] = horner(c, x);
    if (dp == Complex(0.0)) break;
    const Complex step = p / dp;
    x -= step;
    const double px = std::abs(horner(c, x).first);
    if (px < best_abs) {
      best = x;
      best_abs = px;
    }
    if (std::abs(step) <= 4.0 * kEps * std::abs(x)) break;
  }
  return best;
}

std::vector<Complex> companion_eigenvalues(std::span<const Complex> c) {
  const auto m = static_cast<Eigen::Index>(c.size() - 1);
  if (m == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) companion(i, m - 1) = -c[i] / c[m];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw RootSolveFailure("companion eigenvalue iteration did not converge", {});
  }
  std::vector<Complex> out(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

std::vector<Complex> nth_derivative(std::span<const Complex> c, std::size_t order) {
  std::vector<Complex> d(c.begin(), c.end());
  for (std::size_t i = 0; i < order; ++i) d = derivative(d);
  return d;
}

Complex cluster_centre(std::span<const Complex> c, const std::vector<Complex>& roots,
                       const std::vector<std::size_t>& members, const SolverTolerances& tol) {
  Complex mean = 0.0;
  for (auto i : members) mean += roots[i];
  mean /= static_cast<double>(members.size());
  const auto d = nth_derivative(c, members.size() - 1);
  const Complex centre = newton_polish(d, mean, tol.max_newton_iterations);
  return scaled_residual(d, centre) <= scaled_residual(d, mean) ? centre : mean;
}

double diameter(const std::vector<Complex>& roots, const std::vector<std::size_t>& g) {
  double d = 0.0;
  for (auto a : g) {
    for (auto b : g) {
      const double scale = std::max({1.0, std::abs(roots[a]), std::abs(roots[b])});
      d = std::max(d, std::abs(roots[a] - roots[b]) / scale);
    }
  }
  return d;
}

using Partition = std::vector<std::vector<std::size_t>>;

// Every set partition of {0..n-1}, fewest blocks first.
std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> label(n, 0);
  const auto emit = [&] {
    Partition p;
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] >= p.size()) p.resize(label[i] + 1);
      p[label[i]].push_back(i);
    }
    out.push_back(std::move(p));
  };
  // Restricted growth strings: label[i] <= 1 + max(label[0..i-1]).
  const auto recurse = [&](auto&& self, std::size_t i, std::size_t blocks) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (std::size_t b = 0; b <= blocks && b < n; ++b) {
      label[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  if (n > 0) {
    label[0] = 0;
    recurse(recurse, 1, 1);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Partition& x, const Partition& y) { return x.size() < y.size(); });
  return out;
}

// Coefficients (ascending) of prod_i (w - z_i)^{m_i}.
Eigen::VectorXcd structured_coefficients(const std::vector<Complex>& z,
                                         const std::vector<int>& mult, int skip = -1) {
  std::vector<Complex> poly{1.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int power = static_cast<int>(i) == skip ? mult[i] - 1 : mult[i];
    for (int p = 0; p < power; ++p) {
      std::vector<Complex> next(poly.size() + 1, 0.0);
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j];
        next[j] -= z[i] * poly[j];
      }
      poly = std::move(next);
    }
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(poly.size()));
  for (std::size_t j = 0; j < poly.size(); ++j) out(static_cast<Eigen::Index>(j)) = poly[j];
  return out;
}

// Weighted distance between the monic coefficients and the factored form.
Eigen::VectorXcd structured_misfit(std::span<const Complex> c, const std::vector<Complex>& z,
                                   const std::vector<int>& mult) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  const Eigen::VectorXcd g = structured_coefficients(z, mult).head(n);
  Eigen::VectorXcd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex target = c[static_cast<std::size_t>(j)] / c.back();
    r(j) = (g(j) - target) / std::max(1.0, std::abs(target));
  }
  return r;
}

// Once the multiplicity structure is known, the distinct roots are well
// conditioned as a least-squares fit of the factored form to the
// coefficients (Gauss-Newton, as in Zeng's multiple-root algorithm), even
// where the individual roots are not.
std::vector<Complex> structured_refine(std::span<const Complex> c, std::vector<Complex> z,
                                       const std::vector<int>& mult) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::VectorXd weight(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    weight(j) = 1.0 / std::max(1.0, std::abs(c[static_cast<std::size_t>(j)] / c.back()));
  }
  double current = structured_misfit(c, z, mult).norm();
  const auto s = static_cast<Eigen::Index>(z.size());
  for (int it = 0; it < 20 && current > 0.0; ++it) {
    Eigen::MatrixXcd jacobian(n, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      // d/dz_i of the product is -m_i times the product with one factor removed.
      const Eigen::VectorXcd reduced = structured_coefficients(z, mult, static_cast<int>(i));
      Eigen::VectorXcd column = Eigen::VectorXcd::Zero(n);
      column.head(reduced.size()) =
          -static_cast<double>(mult[static_cast<std::size_t>(i)]) * reduced;
      jacobian.col(i) = weight.asDiagonal() * column;
    }
    const Eigen::VectorXcd step =
        jacobian.colPivHouseholderQr().solve(-structured_misfit(c, z, mult));
    std::vector<Complex> trial = z;
    for (Eigen::Index i = 0; i < s; ++i) trial[static_cast<std::size_t>(i)] += step(i);
    const double next = structured_misfit(c, trial, mult).norm();
    if (!(next < current)) break;
    z = std::move(trial);
    current = next;
  }
  return z;
}

}  // namespace

double scaled_residual(std::span<const Complex> c, Complex omega) {
  double scale = 0.0;
  double power = 1.0;
  const double r = std::abs(omega);
  for (const auto& cj : c) {
    scale = std::max(scale, std::abs(cj) * power);
    power *= r;
  }
  const double p = std::abs(horner(c, omega).first);
  return scale > 0.0 ? p / scale : p;
}

VietaCheck vieta_check(std::span<const Complex> c, std::span<const Complex> roots) {
  std::size_t n = c.size() - 1;
  while (n > 0 && c[n] == Complex(0.0)) --n;
  Complex sum = 0.0, prod = 1.0;
  double abs_sum = 0.0, abs_prod = 1.0;
  for (const auto& w : roots) {
    sum += w;
    prod *= w;
    abs_sum += std::abs(w);
    abs_prod *= std::abs(w);
  }
  const Complex expected_sum = n >= 1 ? -c[n - 1] / c[n] : Complex(0.0);
  const Complex expected_prod = (n % 2 == 0 ? 1.0 : -1.0) * c[0] / c[n];
  const auto relative = [](double diff, double scale) {
    if (diff == 0.0) return 0.0;
    return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
  };
  return {relative(std::abs(sum - expected_sum), abs_sum),
          relative(std::abs(prod - expected_prod), abs_prod)};
}

RootSet solve_polynomial(std::span<const Complex> coefficients, const SolverTolerances& tol) {
  std::vector<Complex> c(coefficients.begin(), coefficients.end());
  while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
  if (c.size() < 2) throw InputError("polynomial has no roots (degree < 1 after reduction)");
  if (c.size() > 5) throw InputError("root solver supports degree <= 4");
  for (const auto& v : c) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("polynomial coefficients must be finite");
    }
  }

  // Exact zero roots come off first; they are reported exactly.
  std::size_t zeros = 0;
  while (c[zeros] == Complex(0.0)) ++zeros;
  const std::span<const Complex> reduced(c.data() + zeros, c.size() - zeros);

  std::vector<Complex> estimates;
  if (reduced.size() >= 2) estimates = companion_eigenvalues(reduced);

  // Polish each estimate. Newton is allowed to travel far only inside a
  // tight group (a multiple root); elsewhere a long jump means it was
  // captured by a neighbouring root and the raw estimate is kept.
  std::vector<Complex> polished(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < estimates.size(); ++j) {
      if (j != i) gap = std::min(gap, std::abs(estimates[j] - estimates[i]));
    }
    const Complex p = newton_polish(reduced, estimates[i], tol.max_newton_iterations);
    const double scale = std::max(1.0, std::abs(estimates[i]));
    const bool tight = gap <= std::max(tol.degeneracy, 8.0 * std::sqrt(kEps)) * scale;
    polished[i] = tight || std::abs(p - estimates[i]) < 0.5 * gap ? p : estimates[i];
  }

  struct Candidate {
    RootSet set;
    double misfit;
    std::optional<std::string> failure;
  };
  const auto certify = [&](const RootSet& r) -> std::optional<std::string> {
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
      if (!(r.residuals[i] <= tol.residual)) {
        return "root " + std::to_string(i) + " failed residual certification (" +
               std::to_string(r.residuals[i]) + ")";
      }
    }
    if (!(r.vieta_sum_error <= tol.vieta) || !(r.vieta_product_error <= tol.vieta)) {
      return std::string("roots fail the Vieta consistency check");
    }
    return std::nullopt;
  };
  const auto build = [&](const Partition& partition) {
    std::vector<Complex> distinct;
    std::vector<int> mult;
    for (const auto& members : partition) {
      distinct.push_back(members.size() == 1 ? polished[members[0]]
                                             : cluster_centre(reduced, polished, members, tol));
      mult.push_back(static_cast<int>(members.size()));
    }
    if (reduced.size() >= 2) distinct = structured_refine(reduced, distinct, mult);

    Candidate out{{}, 0.0, std::nullopt};
    RootSet& r = out.set;
    r.roots.assign(zeros, Complex(0.0));
    r.multiplicity.assign(zeros, static_cast<int>(zeros));
    std::vector<Complex> expanded(polished.size());
    std::vector<int> expanded_mult(polished.size());
    for (std::size_t g = 0; g < partition.size(); ++g) {
      for (auto i : partition[g]) {
        expanded[i] = distinct[g];
        expanded_mult[i] = mult[g];
      }
    }
    r.roots.insert(r.roots.end(), expanded.begin(), expanded.end());
    r.multiplicity.insert(r.multiplicity.end(), expanded_mult.begin(), expanded_mult.end());
    for (const auto& w : r.roots) r.residuals.push_back(scaled_residual(c, w));
    const auto vieta = vieta_check(c, r.roots);
    r.vieta_sum_error = vieta.sum_error;
    r.vieta_product_error = vieta.product_error;
    if (reduced.size() >= 2) out.misfit = structured_misfit(reduced, distinct, mult).norm();
    out.failure = certify(r);
    return out;
  };

  // Near a multiple root the individual roots scatter by about eps^(1/m),
  // and both a wrong grouping and a split into simple roots can pass the
  // residual test. Roots merged at distance d misfit the coefficients by
  // about d^2, so the coarsest grouping that fits to the square of the
  // degeneracy tolerance is taken; failing that, the best fit.
  const double exact = std::max(tol.degeneracy * tol.degeneracy, 64.0 * kEps * kEps);
  std::optional<Candidate> best;
  std::optional<std::size_t> settled;
  for (const auto& partition : all_partitions(polished.size())) {
    if (settled && partition.size() > *settled) break;
    bool usable = true;
    for (const auto& members : partition) usable = usable && diameter(polished, members) <= 1e-2;
    if (!usable) continue;
    Candidate candidate = build(partition);
    if (candidate.failure) continue;
    if (candidate.misfit <= exact && !settled) {
      settled = partition.size();
      best.reset();
    }
    if (settled && candidate.misfit > exact) continue;
    if (!best || candidate.misfit < best->misfit) best = std::move(candidate);
  }
  if (best) return best->set;
  const Candidate simple = build(all_partitions(polished.size()).back());
  throw RootSolveFailure(simple.failure.value_or("root structure could not be certified"),
                         simple.set);
}

}  // namespace rqbm::dispersion
