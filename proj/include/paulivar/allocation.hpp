#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paulivar/cover.hpp"
#include "paulivar/pauli.hpp"

namespace paulivar {

/// A sampling distribution over the groups of a cover, with the derived
/// per-term probability pi_P = sum of pi_G over the groups containing P.
/// Empty groups carry probability zero; every group holding at least one
/// term must have positive probability.
class Distribution {
 public:
  Distribution(const GroupCover& cover, std::vector<double> pi,
               std::string name);

  const std::vector<double>& pi() const { return pi_; }
  double pi_group(std::size_t g) const { return pi_[g]; }
  /// Probability of learning about term `v` in one draw.
  double pi_term(std::size_t v) const { return pi_term_[v]; }
  const std::vector<double>& pi_terms() const { return pi_term_; }
  /// True when every term has positive sampling probability, the
  /// precondition for unbiased Horvitz-Thompson estimation.
  bool unbiased() const { return unbiased_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<double> pi_;
  std::vector<double> pi_term_;
  std::string name_;
  bool unbiased_;
};

/// A deterministic shot assignment: M_G shots per group, with derived
/// per-term counts M_P.
class Allocation {
 public:
  Allocation(const GroupCover& cover, std::vector<std::size_t> counts,
             std::string name);

  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t count(std::size_t g) const { return counts_[g]; }
  std::size_t total() const { return total_; }
  std::size_t term_count(std::size_t v) const { return term_counts_[v]; }
  /// True iff every term is measured at least once.
  bool unbiased() const { return unbiased_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> term_counts_;
  std::size_t total_ = 0;
  std::string name_;
  bool unbiased_;
};

/// pi_G proportional to 1 over the non-empty groups.
Distribution uniform_distribution(const GroupCover& cover);
/// pi_G proportional to sum_{P in G} |c_P|. Errors on a non-empty group
/// whose coefficients are all zero (its terms would never be sampled).
Distribution l1_distribution(const GroupCover& cover, const PauliSum& o);
/// pi_G proportional to sqrt(sum_{P in G} c_P^2): the optimal distribution
/// for disjoint groups under the non-informative prior.
Distribution l2_distribution(const GroupCover& cover, const PauliSum& o);
/// pi_G = M_G / M for an allocation with M > 0 total shots.
Distribution counting_distribution(const GroupCover& cover,
                                   const Allocation& alloc);

struct OptimizeOptions {
  double tol = 1e-8;     // relative certificate gap target
  int max_iters = 100000;
};

struct OptimizeResult {
  std::vector<double> pi;
  double objective;
  double certificate_gap;
  bool converged;
  int iterations;
};

/// Minimizes the weighted sampling objective
///
///   sum_G pi_G sum_{P in G} w_P c_P^2 / pi_P^2  ==  sum_P w_P c_P^2 / pi_P
///
/// over the probability simplex by projected gradient descent with Armijo
/// backtracking. Weights default to 1 (the non-informative prior); pass the
/// per-term variances for variance-aware deterministic allocation. The
/// default initial point is the l2 distribution. Converged means the
/// relative certificate gap reached `tol`; otherwise the best iterate found
/// is returned. The objective is convex, so the certificate identifies the
/// global optimum.
OptimizeResult optimize_distribution(
    const GroupCover& cover, const PauliSum& o,
    const std::vector<double>& term_weights = {},
    std::optional<std::vector<double>> init = std::nullopt,
    const OptimizeOptions& options = {});

/// Objective value sum_P w_P c_P^2 / pi_P for a candidate distribution.
double distribution_objective(const GroupCover& cover, const PauliSum& o,
                              const std::vector<double>& term_weights,
                              const std::vector<double>& pi);

/// Stationarity certificate: lambda_G = sum_{P in G} w_P c_P^2 / pi_P^2
/// must agree across groups at the optimum. Returns
/// (max lambda - min lambda) / mean lambda over non-empty groups.
double certificate_gap(const GroupCover& cover, const PauliSum& o,
                       const std::vector<double>& term_weights,
                       const std::vector<double>& pi);

/// Rounds a distribution to integer shot counts: M_G = ceil(pi_G * target),
/// so the total may overshoot the target. Requires target >= group count.
Allocation deterministic_allocation(const GroupCover& cover,
                                    const Distribution& pi,
                                    std::size_t target);

/// Shot counts taken from an imported schedule's multiplicities (empty
/// groups keep their shots, matching the source schedule's accounting).
Allocation allocation_from_multiplicities(const GroupCover& cover);

/// Central-limit shot budget: the number of measurements for a mean
/// estimate with one-shot variance `variance` to land within epsilon of the
/// truth with probability 1-delta, n = ceil(variance * z^2_{1-delta/2} /
/// epsilon^2). Zero variance needs no sampling and returns 1 by convention.
std::uint64_t clt_shots(double variance, double epsilon, double delta);

}  // namespace paulivar
