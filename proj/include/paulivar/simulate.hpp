#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "paulivar/variance.hpp"

namespace paulivar {

/// Exact joint outcome law of simultaneously measuring a family of
/// commuting Pauli strings in a fixed state: every sign pattern with
/// nonzero Born probability. There are at most 2^n of them. Built by the
/// same sequential projection that measure_group samples from, so sampling
/// a pattern from this table is distributionally identical to running
/// measure_group once.
struct GroupOutcomeLaw {
  std::vector<std::vector<int>> patterns;  // aligned with the group order
  std::vector<double> probabilities;
  std::vector<double> cumulative;

  std::size_t sample(RandomSource& rng) const;
};

GroupOutcomeLaw enumerate_group_outcomes(const StateVector& psi,
                                         std::span<const PauliString> group);

struct ExperimentConfig {
  std::size_t shots = 1;         // measurements per repetition (M)
  std::size_t repetitions = 1;   // independent experiments (R)
  double truth = 0.0;            // exact <O> the estimates target
  double epsilon = 0.0016;       // accuracy window for success rates
  std::uint64_t master_seed = 1;
  std::size_t threads = 0;       // 0: use PAULIVAR_THREADS or all cores
};

/// Runs R independent Horvitz-Thompson experiments: each repetition draws M
/// groups i.i.d. from pi, samples a joint outcome per draw from the group's
/// exact outcome law, and evaluates ht_estimate. Per-repetition seeds
/// derive deterministically from the master seed; repetitions run in
/// parallel with results in repetition order, so a fixed config reproduces
/// the estimate list bit-exactly regardless of thread count.
std::vector<double> run_ht_experiment(const ExperimentConfig& config,
                                      const GroupCover& cover,
                                      const Distribution& pi,
                                      const PauliSum& o,
                                      const StateVector& psi);

/// Runs R independent deterministic experiments: each repetition measures
/// every group exactly M_G times and evaluates det_estimate.
std::vector<double> run_det_experiment(const ExperimentConfig& config,
                                       const GroupCover& cover,
                                       const Allocation& alloc,
                                       const PauliSum& o,
                                       const StateVector& psi);

struct SuccessRate {
  double rate;           // fraction of |estimate - truth| < epsilon
  double bootstrap_std;  // std of the rate over bootstrap resamples
};

/// Success rate with a bootstrap standard deviation (resampling the
/// estimate list with replacement `resamples` times).
SuccessRate success_rate(std::span<const double> estimates, double truth,
                         double epsilon, std::size_t resamples = 1000,
                         std::uint64_t seed = 0x626f6f74);

/// Sample mean and variance of an estimate list.
std::pair<double, double> estimate_moments(std::span<const double> estimates);

/// Bootstrap standard deviation of the sample variance of the estimates.
double bootstrap_variance_std(std::span<const double> estimates,
                              std::size_t resamples = 1000,
                              std::uint64_t seed = 0x76617273);

/// Q-Q data against the normal law N(truth, variance_per_estimate):
/// pairs (theoretical quantile, empirical order statistic) at plotting
/// positions (i - 0.5) / R. Needs at least two estimates.
std::vector<std::pair<double, double>> qq_data(
    std::span<const double> estimates, double truth,
    double variance_per_estimate);

}  // namespace paulivar
