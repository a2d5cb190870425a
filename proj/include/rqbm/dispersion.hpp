#pragma once

// Dispersion relations of the relativistic Schroedinger field and its three
// dissipative density equations, in Compton units (hbar = m = c = 1).
//
// Two Fourier conventions are in use and are never mixed inside one call:
//   * density perturbations ~ exp(i(omega t - k x)); damping <=> Im omega > 0.
//     All dissipative models use this one.
//   * the conservative field ~ exp(i(k x - omega t)), the usual quantum
//     convention; its particle branch has omega = sqrt(1 + k^2) - 1 >= 0.
//
// Polynomials in omega at fixed real k:
//   Conservative        omega^2 + 2 omega - k^2
//   Collisional         (k^2 - omega^2)^2 / 4 - omega^2 + i gamma omega
//   Radiative           (k^2 - omega^2)^2 / 4 - omega^2 + i tau omega^3
//   PhaseDiffusion      (k^2 - omega^2)^2 / 4 - omega^2 + i D k^2 omega
//   DAlembertDiffusion  (k^2 - omega^2)^2 / 4 - omega^2 + i D omega (k^2 - omega^2)

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "rqbm/errors.hpp"
#include "rqbm/units.hpp"

namespace rqbm::dispersion {

using Complex = std::complex<double>;

struct SolverTolerances {
  double residual = 1e-10;    // scaled residual certification
  double degeneracy = 1e-7;   // roots closer than this are one multiple root
  double vieta = 1e-10;       // relative Vieta sum/product check
  int max_newton_iterations = 60;
};

/// Complex coefficients c0..c4 in ascending powers of omega.
struct DispersionPoly {
  std::array<Complex, 5> coefficients{};
  double k = 0.0;
  ModelParams params;

  int degree() const;
  Complex operator()(Complex omega) const;
};

/// Roots with multiplicity. `multiplicity[i]` is the size of the cluster root
/// i belongs to; members of one cluster carry identical values.
struct RootSet {
  std::vector<Complex> roots;
  std::vector<double> residuals;
  std::vector<int> multiplicity;
  double k = 0.0;
  double vieta_sum_error = 0.0;
  double vieta_product_error = 0.0;
};

/// Thrown when certification fails; carries whatever the solver had.
class RootSolveFailure : public NumericalFailure {
 public:
  RootSolveFailure(const std::string& what, RootSet best_effort)
      : NumericalFailure(what), best_effort_(std::move(best_effort)) {}
  const RootSet& best_effort() const { return best_effort_; }

 private:
  RootSet best_effort_;
};

/// |P(omega)| / max_j |c_j| |omega|^j: the backward error of omega as a root.
double scaled_residual(std::span<const Complex> coefficients, Complex omega);

struct VietaCheck {
  double sum_error;      // |sum + c_{n-1}/c_n| / sum |w_i|
  double product_error;  // |prod - (-1)^n c_0/c_n| / prod |w_i|
};
VietaCheck vieta_check(std::span<const Complex> coefficients, std::span<const Complex> roots);

/// General solver for a polynomial of degree 1..4 (ascending coefficients,
/// trailing zeros allowed). Companion-matrix eigenvalues, Newton polishing,
/// cluster detection, then certification.
RootSet solve_polynomial(std::span<const Complex> coefficients,
                         const SolverTolerances& tol = {});

DispersionPoly build_polynomial(const ModelParams& params, double k);

/// The model's dispersion expression evaluated directly in factored form,
/// without going through the expanded coefficients.
Complex dispersion_expression(const ModelParams& params, Complex omega, double k);

/// Collisional expression with an arbitrary (possibly complex) friction.
Complex collisional_expression(Complex gamma, Complex omega, double k);

RootSet solve_roots(const DispersionPoly& poly, const SolverTolerances& tol = {});

enum class Regime { Low, High };

/// Closed-form asymptotic roots, principal root first. Cube-root limits
/// return all three roots; the collisional high regime returns +2 and -2.
/// Throws UnsupportedError for pairs without a closed form.
std::vector<Complex> asymptotic_candidates(const ModelParams& params, double k, Regime regime);
Complex asymptotic_omega(const ModelParams& params, double k, Regime regime);

enum class BranchLabel { Hydrodynamic, ZitterbewegungGapped, Other };
std::string_view to_string(BranchLabel label);

/// Root with the smallest modulus; exact ties go to the larger real part.
std::size_t hydrodynamic_index(std::span<const Complex> roots);

/// Labels at a single k: the hydrodynamic root, roots within 25% of the
/// Zitterbewegung modulus 2, everything else.
std::vector<BranchLabel> label_roots(std::span<const Complex> roots);

struct BranchCurve {
  std::vector<double> k_grid;
  std::vector<std::vector<Complex>> branches;   // [branch][k index]
  std::vector<std::vector<double>> residuals;   // [branch][k index]
  std::vector<BranchLabel> labels;

  /// Index of the hydrodynamic branch (there is always exactly one).
  std::size_t hydrodynamic() const;
};

/// Raised when two pairings of adjacent roots are too close to call.
class BranchAmbiguity : public InputError {
 public:
  using InputError::InputError;
};

/// Solves every k and links roots into continuous branches by globally optimal
/// assignment against a linear predictor. Labels come from k_grid.front().
BranchCurve track_branches(const ModelParams& params, std::span<const double> k_grid,
                           const SolverTolerances& tol = {});

/// Effective collisional friction standing in for model `params` at (omega, k):
/// tau omega^2, D k^2 or D (k^2 - omega^2).
Complex effective_friction(const ModelParams& params, Complex omega, double k);

struct FrictionSample {
  Complex omega;
  double k;
};

/// Max relative deviation between the collisional expression with the
/// effective friction substituted and the other model's polynomial.
double friction_equivalence(const ModelParams& a, const ModelParams& b,
                            std::span<const FrictionSample> samples);

}  // namespace rqbm::dispersion
