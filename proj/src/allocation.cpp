#include "paulivar/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "paulivar/normal.hpp"

namespace paulivar {

Distribution::Distribution(const GroupCover& cover, std::vector<double> pi,
                           std::string name)
    : pi_(std::move(pi)), name_(std::move(name)) {
  if (pi_.size() != cover.num_groups()) {
    throw PreconditionError("distribution size does not match group count");
  }
  double total = 0.0;
  for (std::size_t g = 0; g < pi_.size(); ++g) {
    if (pi_[g] < 0.0) {
      throw PreconditionError("negative group probability");
    }
    if (pi_[g] == 0.0 && !cover.groups()[g].empty()) {
      throw PreconditionError(
          "zero probability on a group that carries terms");
    }
    total += pi_[g];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("group probabilities do not sum to one");
  }
  pi_term_.assign(cover.num_vertices(), 0.0);
  for (std::size_t g = 0; g < pi_.size(); ++g) {
    for (std::size_t v : cover.groups()[g]) pi_term_[v] += pi_[g];
  }
  unbiased_ = std::all_of(pi_term_.begin(), pi_term_.end(),
                          [](double p) { return p > 0.0; });
}

Allocation::Allocation(const GroupCover& cover,
                       std::vector<std::size_t> counts, std::string name)
    : counts_(std::move(counts)), name_(std::move(name)) {
  if (counts_.size() != cover.num_groups()) {
    throw PreconditionError("allocation size does not match group count");
  }
  term_counts_.assign(cover.num_vertices(), 0);
  for (std::size_t g = 0; g < counts_.size(); ++g) {
    total_ += counts_[g];
    for (std::size_t v : cover.groups()[g]) term_counts_[v] += counts_[g];
  }
  unbiased_ = std::all_of(term_counts_.begin(), term_counts_.end(),
                          [](std::size_t c) { return c > 0; });
}

namespace {

Distribution weighted_distribution(
    const GroupCover& cover, const std::string& name,
    const std::function<double(const std::vector<std::size_t>&)>& weight) {
  std::vector<double> pi(cover.num_groups(), 0.0);
  double total = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (cover.groups()[g].empty()) continue;  // no information, never sampled
    pi[g] = weight(cover.groups()[g]);
    if (pi[g] <= 0.0) {
      throw PreconditionError(
          name + " distribution: group " + std::to_string(g) +
          " has zero weight; sampling it with probability zero would bias "
          "the estimator");
    }
    total += pi[g];
  }
  if (total <= 0.0) {
    throw PreconditionError("cover has no non-empty groups");
  }
  for (auto& p : pi) p /= total;
  return Distribution(cover, std::move(pi), name);
}

}  // namespace

Distribution uniform_distribution(const GroupCover& cover) {
  return weighted_distribution(cover, "uniform",
                               [](const auto&) { return 1.0; });
}

Distribution l1_distribution(const GroupCover& cover, const PauliSum& o) {
  return weighted_distribution(cover, "l1", [&o](const auto& group) {
    double s = 0.0;
    for (std::size_t v : group) s += std::abs(o.terms()[v].coefficient);
    return s;
  });
}

Distribution l2_distribution(const GroupCover& cover, const PauliSum& o) {
  return weighted_distribution(cover, "l2", [&o](const auto& group) {
    double s = 0.0;
    for (std::size_t v : group) {
      s += o.terms()[v].coefficient * o.terms()[v].coefficient;
    }
    return std::sqrt(s);
  });
}

Distribution counting_distribution(const GroupCover& cover,
                                   const Allocation& alloc) {
  if (alloc.total() == 0) {
    throw PreconditionError("counting distribution of an empty allocation");
  }
  std::vector<double> pi(cover.num_groups());
  for (std::size_t g = 0; g < pi.size(); ++g) {
    pi[g] = static_cast<double>(alloc.count(g)) /
            static_cast<double>(alloc.total());
  }
  // Groups the allocation never measures carry probability zero; that is
  // only a valid distribution when they are empty.
  for (std::size_t g = 0; g < pi.size(); ++g) {
    if (pi[g] == 0.0 && !cover.groups()[g].empty()) {
      throw PreconditionError(
          "counting distribution: unmeasured non-empty group");
    }
  }
  return Distribution(cover, std::move(pi), "counting");
}

namespace {

std::vector<double> effective_weights(const PauliSum& o,
                                      const std::vector<double>& weights) {
  if (weights.empty()) return std::vector<double>(o.num_terms(), 1.0);
  if (weights.size() != o.num_terms()) {
    throw PreconditionError("term weights do not match the observable");
  }
  for (double w : weights) {
    if (w < 0.0) throw PreconditionError("term weights must be non-negative");
  }
  return weights;
}

std::vector<double> term_probabilities(const GroupCover& cover,
                                       const std::vector<double>& pi) {
  std::vector<double> pi_term(cover.num_vertices(), 0.0);
  for (std::size_t g = 0; g < pi.size(); ++g) {
    for (std::size_t v : cover.groups()[g]) pi_term[v] += pi[g];
  }
  return pi_term;
}

// Euclidean projection onto the probability simplex with a small floor to
// keep every active coordinate strictly positive.
void project_to_simplex(std::vector<double>& x,
                        const std::vector<bool>& active, double floor_value) {
  std::vector<double> sorted;
  sorted.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (active[i]) sorted.push_back(x[i]);
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, threshold = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) threshold = t;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (active[i]) {
      x[i] = std::max(x[i] - threshold, floor_value);
      total += x[i];
    } else {
      x[i] = 0.0;
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (active[i]) x[i] /= total;
  }
}

}  // namespace

double distribution_objective(const GroupCover& cover, const PauliSum& o,
                              const std::vector<double>& term_weights,
                              const std::vector<double>& pi) {
  const auto weights = effective_weights(o, term_weights);
  const auto pi_term = term_probabilities(cover, pi);
  double objective = 0.0;
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    const double c = o.terms()[v].coefficient;
    if (pi_term[v] <= 0.0) {
      throw PreconditionError("term with zero sampling probability");
    }
    objective += weights[v] * c * c / pi_term[v];
  }
  return objective;
}

double certificate_gap(const GroupCover& cover, const PauliSum& o,
                       const std::vector<double>& term_weights,
                       const std::vector<double>& pi) {
  const auto weights = effective_weights(o, term_weights);
  const auto pi_term = term_probabilities(cover, pi);
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = -std::numeric_limits<double>::infinity();
  double lambda_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (cover.groups()[g].empty()) continue;
    double lambda = 0.0;
    for (std::size_t v : cover.groups()[g]) {
      const double c = o.terms()[v].coefficient;
      lambda += weights[v] * c * c / (pi_term[v] * pi_term[v]);
    }
    lambda_min = std::min(lambda_min, lambda);
    lambda_max = std::max(lambda_max, lambda);
    lambda_sum += lambda;
    ++counted;
  }
  if (counted <= 1) return 0.0;
  const double mean = lambda_sum / static_cast<double>(counted);
  if (mean <= 0.0) return 0.0;
  return (lambda_max - lambda_min) / mean;
}

OptimizeResult optimize_distribution(const GroupCover& cover,
                                     const PauliSum& o,
                                     const std::vector<double>& term_weights,
                                     std::optional<std::vector<double>> init,
                                     const OptimizeOptions& options) {
  if (!cover.covers_all_vertices()) {
    throw PreconditionError(
        "optimize_distribution requires a complete cover (uncovered terms "
        "cannot be sampled)");
  }
  const auto weights = effective_weights(o, term_weights);
  std::vector<bool> active(cover.num_groups());
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    active[g] = !cover.groups()[g].empty();
    if (!active[g]) continue;
    double group_weight = 0.0;
    for (std::size_t v : cover.groups()[g]) {
      const double c = o.terms()[v].coefficient;
      group_weight += weights[v] * c * c;
    }
    if (group_weight <= 0.0) {
      throw PreconditionError(
          "optimize_distribution: group " + std::to_string(g) +
          " carries only zero-weight terms");
    }
  }

  std::vector<double> pi;
  if (init) {
    pi = std::move(*init);
    if (pi.size() != cover.num_groups()) {
      throw PreconditionError("initial distribution has the wrong size");
    }
    for (std::size_t g = 0; g < pi.size(); ++g) {
      if (active[g] && pi[g] <= 0.0) {
        throw PreconditionError(
            "initial distribution must be strictly positive");
      }
    }
  } else {
    pi = l2_distribution(cover, o).pi();
  }

  const double floor_value = 1e-12;
  double objective = distribution_objective(cover, o, weights, pi);
  double gap = certificate_gap(cover, o, weights, pi);
  double step = 1.0;
  int iterations = 0;

  for (; iterations < options.max_iters && gap > options.tol; ++iterations) {
    const auto pi_term = term_probabilities(cover, pi);
    std::vector<double> gradient(cover.num_groups(), 0.0);
    for (std::size_t g = 0; g < cover.num_groups(); ++g) {
      if (!active[g]) continue;
      for (std::size_t v : cover.groups()[g]) {
        const double c = o.terms()[v].coefficient;
        gradient[g] -= weights[v] * c * c / (pi_term[v] * pi_term[v]);
      }
    }
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      std::vector<double> candidate(pi.size());
      for (std::size_t g = 0; g < pi.size(); ++g) {
        candidate[g] = pi[g] - step * gradient[g];
      }
      project_to_simplex(candidate, active, floor_value);
      const double candidate_objective =
          distribution_objective(cover, o, weights, candidate);
      // Armijo condition on the projected step.
      double step_sq = 0.0;
      for (std::size_t g = 0; g < pi.size(); ++g) {
        const double d = candidate[g] - pi[g];
        step_sq += d * d;
      }
      if (candidate_objective <=
          objective - 1e-4 * step_sq / std::max(step, 1e-300)) {
        pi = std::move(candidate);
        objective = candidate_objective;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Gradient steps stalled: try the stationarity fixed point
      // pi_G -> pi_G sqrt(lambda_G), which equalizes the multipliers and
      // is exact for disjoint covers. Kept only when it descends.
      std::vector<double> candidate(pi);
      for (std::size_t g = 0; g < cover.num_groups(); ++g) {
        if (!active[g]) continue;
        candidate[g] = pi[g] * std::sqrt(-gradient[g]);
      }
      double total = 0.0;
      for (std::size_t g = 0; g < candidate.size(); ++g) {
        if (active[g]) total += candidate[g];
      }
      double floored_total = 0.0;
      for (std::size_t g = 0; g < candidate.size(); ++g) {
        if (active[g]) {
          candidate[g] = std::max(candidate[g] / total, floor_value);
          floored_total += candidate[g];
        }
      }
      for (std::size_t g = 0; g < candidate.size(); ++g) {
        if (active[g]) candidate[g] /= floored_total;
      }
      const double candidate_objective =
          distribution_objective(cover, o, weights, candidate);
      if (candidate_objective < objective) {
        pi = std::move(candidate);
        objective = candidate_objective;
        step = 1.0;
        accepted = true;
      }
    }
    gap = certificate_gap(cover, o, weights, pi);
    if (!accepted) break;  // no descent direction left at this scale
  }

  return {std::move(pi), objective, gap, gap <= options.tol, iterations};
}

Allocation deterministic_allocation(const GroupCover& cover,
                                    const Distribution& pi,
                                    std::size_t target) {
  if (target < cover.num_groups()) {
    throw PreconditionError(
        "allocation target must be at least the number of groups");
  }
  std::vector<std::size_t> counts(cover.num_groups());
  for (std::size_t g = 0; g < counts.size(); ++g) {
    counts[g] = static_cast<std::size_t>(
        std::ceil(pi.pi_group(g) * static_cast<double>(target)));
  }
  return Allocation(cover, std::move(counts), pi.name() + "-rounded");
}

Allocation allocation_from_multiplicities(const GroupCover& cover) {
  std::vector<std::size_t> counts(cover.num_groups());
  for (std::size_t g = 0; g < counts.size(); ++g) {
    counts[g] = cover.multiplicity(g);
  }
  return Allocation(cover, std::move(counts), "schedule-counts");
}

std::uint64_t clt_shots(double variance, double epsilon, double delta) {
  if (variance < 0.0) throw PreconditionError("negative variance");
  if (epsilon <= 0.0) throw PreconditionError("epsilon must be positive");
  if (delta <= 0.0 || delta >= 1.0) {
    throw PreconditionError("delta must lie in (0, 1)");
  }
  if (variance == 0.0) return 1;  // a single shot reads off the exact value
  const double z = inverse_normal_cdf(1.0 - delta / 2.0);
  return static_cast<std::uint64_t>(
      std::ceil(variance * z * z / (epsilon * epsilon)));
}

}  // namespace paulivar
