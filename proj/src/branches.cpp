#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rqbm/dispersion.hpp"

namespace rqbm::dispersion {

namespace {

// Gap of the second branch at k = 0, in Compton units.
constexpr double kZitterbewegung = 2.0;

// Initial branch order: hydrodynamic, gapped (Re descending), others (Im descending).
std::vector<std::size_t> initial_order(const std::vector<Complex>& roots,
                                       const std::vector<BranchLabel>& labels) {
  std::vector<std::size_t> order(roots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    if (labels[a] == BranchLabel::ZitterbewegungGapped) return roots[a].real() > roots[b].real();
    return roots[a].imag() > roots[b].imag();
  });
  return order;
}

}  // namespace

std::size_t hydrodynamic_index(std::span<const Complex> roots) {
  if (roots.empty()) throw InputError("no roots to label");
  std::size_t hydro = 0;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double a = std::abs(roots[i]);
    const double b = std::abs(roots[hydro]);
    const bool tie = std::abs(a - b) <= 1e-9 * std::max(a, b);
    if ((!tie && a < b) || (tie && roots[i].real() > roots[hydro].real())) hydro = i;
  }
  return hydro;
}

std::vector<BranchLabel> label_roots(std::span<const Complex> roots) {
  const std::size_t hydro = hydrodynamic_index(roots);
  std::vector<BranchLabel> labels(roots.size(), BranchLabel::Other);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == hydro) {
      labels[i] = BranchLabel::Hydrodynamic;
    } else if (std::abs(std::abs(roots[i]) - kZitterbewegung) <= 0.25 * kZitterbewegung) {
      labels[i] = BranchLabel::ZitterbewegungGapped;
    }
  }
  return labels;
}

std::size_t BranchCurve::hydrodynamic() const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == BranchLabel::Hydrodynamic) return i;
  }
  throw InputError("branch curve has no hydrodynamic branch");
}

namespace {

constexpr int kMaxRefinement = 24;

struct TrackPoint {
  double k;
  std::vector<Complex> roots;  // in branch order
  std::vector<double> residuals;
};

enum class Match { Clear, Ambiguous };

// The root set at real k is symmetric under w -> -conj(w).
Complex mirror(Complex w) { return {-w.real(), w.imag()}; }

class Tracker {
 public:
  Tracker(const ModelParams& params, const SolverTolerances& tol) : params_(params), tol_(tol) {}

  void start(TrackPoint first) { history_ = {std::move(first)}; }

  // Advances to k, inserting hidden midpoints while the matching is ambiguous.
  const TrackPoint& advance(double k, int depth = 0) {
    const RootSet next = solve_roots(build_polynomial(params_, k), tol_);
    const std::size_t d = history_.back().roots.size();
    if (next.roots.size() != d) {
      throw NumericalFailure("root count changed along the k grid at k = " + std::to_string(k));
    }
    std::vector<std::size_t> best;
    if (match(next, k, best) == Match::Ambiguous) {
      const double from = history_.back().k;
      if (depth >= kMaxRefinement) {
        throw BranchAmbiguity("ambiguous branch matching between k = " + std::to_string(from) +
                              " and k = " + std::to_string(k) + "; refine the k grid");
      }
      advance(0.5 * (from + k), depth + 1);
      return advance(k, depth + 1);
    }
    TrackPoint point{k, {}, {}};
    for (std::size_t b = 0; b < d; ++b) {
      point.roots.push_back(next.roots[best[b]]);
      point.residuals.push_back(next.residuals[best[b]]);
    }
    history_.push_back(std::move(point));
    if (history_.size() > 2) history_.erase(history_.begin());
    return history_.back();
  }

 private:
  // Linear extrapolation from the last two points; constant from one.
  std::vector<Complex> predict(double k) const {
    const auto& last = history_.back();
    std::vector<Complex> out = last.roots;
    if (history_.size() == 2) {
      const auto& before = history_.front();
      const double ratio = (k - last.k) / (last.k - before.k);
      for (std::size_t b = 0; b < out.size(); ++b) {
        out[b] += (last.roots[b] - before.roots[b]) * ratio;
      }
    }
    return out;
  }

  bool near(Complex a, Complex b) const {
    return std::abs(a - b) <= tol_.degeneracy * std::max({1.0, std::abs(a), std::abs(b)});
  }

  // Globally optimal assignment of new roots to branches. A rival pairing
  // within 10% of the best cost makes the step ambiguous unless it yields
  // the same curves (it only swaps equal roots or equal predictions) or
  // sends branches arriving on the imaginary axis to mirror images of the
  // best choice, which no refinement can separate.
  Match match(const RootSet& next, double k, std::vector<std::size_t>& best) const {
    const auto predicted = predict(k);
    const std::size_t d = predicted.size();
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<double, std::vector<std::size_t>>> candidates;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (std::size_t b = 0; b < d; ++b) cost += std::abs(predicted[b] - next.roots[perm[b]]);
      candidates.emplace_back(cost, perm);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    const auto same_curves = [&](const std::vector<std::size_t>& p) {
      for (std::size_t b = 0; b < d; ++b) {
        if (near(next.roots[p[b]], next.roots[best[b]])) continue;
        const auto owner = static_cast<std::size_t>(
            std::find(best.begin(), best.end(), p[b]) - best.begin());
        if (!near(predicted[b], predicted[owner])) return false;
      }
      return true;
    };
    const auto mirrored = [&](const std::vector<std::size_t>& p) {
      for (std::size_t b = 0; b < d; ++b) {
        if (near(next.roots[p[b]], next.roots[best[b]])) continue;
        if (!near(next.roots[p[b]], mirror(next.roots[best[b]]))) return false;
        if (!near(predicted[b], mirror(predicted[b]))) return false;
      }
      return true;
    };
    // Convention at a mirror split: the branch arriving from higher Im w
    // continues to positive Re w.
    const auto orientation = [&](const std::vector<std::size_t>& p) {
      double sum = 0.0;
      for (std::size_t b = 0; b < d; ++b) sum += next.roots[p[b]].real() * predicted[b].imag();
      return sum;
    };

    for (const auto& [cost, p] : candidates) {
      if (p == best || cost > 1.1 * best_cost) continue;
      if (same_curves(p)) continue;
      if (mirrored(p)) {
        if (orientation(p) > orientation(best)) best = p;
        continue;
      }
      return Match::Ambiguous;
    }
    return Match::Clear;
  }

  const ModelParams& params_;
  const SolverTolerances& tol_;
  std::vector<TrackPoint> history_;
};

}  // namespace

BranchCurve track_branches(const ModelParams& params, std::span<const double> k_grid,
                           const SolverTolerances& tol) {
  if (k_grid.size() < 2) throw InputError("branch tracking needs at least two k values");
  for (std::size_t j = 1; j < k_grid.size(); ++j) {
    if (!(k_grid[j] > k_grid[j - 1])) throw InputError("k grid must be strictly ascending");
  }

  BranchCurve curve;
  curve.k_grid.assign(k_grid.begin(), k_grid.end());

  const RootSet first = solve_roots(build_polynomial(params, k_grid[0]), tol);
  const auto labels = label_roots(first.roots);
  const auto order = initial_order(first.roots, labels);
  const std::size_t d = first.roots.size();
  TrackPoint start{k_grid[0], {}, {}};
  for (std::size_t b = 0; b < d; ++b) {
    curve.labels.push_back(labels[order[b]]);
    start.roots.push_back(first.roots[order[b]]);
    start.residuals.push_back(first.residuals[order[b]]);
  }
  curve.branches.assign(d, {});
  curve.residuals.assign(d, {});
  const auto record = [&](const TrackPoint& p) {
    for (std::size_t b = 0; b < d; ++b) {
      curve.branches[b].push_back(p.roots[b]);
      curve.residuals[b].push_back(p.residuals[b]);
    }
  };
  record(start);

  Tracker tracker(params, tol);
  tracker.start(std::move(start));
  for (std::size_t j = 1; j < k_grid.size(); ++j) record(tracker.advance(k_grid[j]));
  return curve;
}

}  // namespace rqbm::dispersion
