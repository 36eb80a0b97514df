#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paulivar/allocation.hpp"
#include "paulivar/state.hpp"

namespace paulivar {

/// Aggregated measurement outcomes of a scheme run: per group, the number
/// of draws and the per-member signed outcome sums
/// s_{P,G} = n+_{P,G} - n-_{P,G}.
class MeasurementRecord {
 public:
  explicit MeasurementRecord(const GroupCover& cover);

  /// Adds one draw of group `g` with outcomes aligned to the group's member
  /// order.
  void add_draw(std::size_t g, std::span<const int> outcomes);

  /// Adds `draws` draws of group `g` whose outcome sums have already been
  /// accumulated elsewhere.
  void add_counts(std::size_t g, std::size_t draws,
                  std::span<const long long> outcome_sums);

  std::size_t draws(std::size_t g) const { return draws_[g]; }
  std::size_t total_draws() const { return total_draws_; }
  long long outcome_sum(std::size_t g, std::size_t member) const {
    return outcome_sums_[g][member];
  }

 private:
  std::vector<std::size_t> draws_;
  std::vector<std::vector<long long>> outcome_sums_;
  std::size_t total_draws_ = 0;
};

/// Exact one-shot variance of the Horvitz-Thompson estimator for an
/// overlapping cover:
///
///   Var = sum_G pi_G sum_{P,Q in G} (c_P c_Q / (pi_P pi_Q)) tr(psi P Q)
///         - tr(psi O')^2
///
/// where O' is the observable without its identity component (constants
/// carry no variance). Requires an unbiased distribution and a table with
/// all intra-group pair moments.
double ht_variance(const GroupCover& cover, const Distribution& pi,
                   const PauliSum& o, const CovarianceTable& table);

/// The disjoint-group specialization sum_G E[(sum c_P X_P)^2]/pi_G - <O'>^2.
/// Only valid on partitions; kept as an independent evaluation path for
/// cross-checking the overlap-aware formula.
double ht_variance_disjoint(const GroupCover& cover, const Distribution& pi,
                            const PauliSum& o, const CovarianceTable& table);

/// Exact variance of the deterministic estimator:
///
///   Var = sum_G M_G sum_{P,Q in G} (c_P c_Q / (M_P M_Q)) Cov(X_P, X_Q).
///
/// With `partial_coverage`, terms measured zero times are simply omitted
/// from the estimator (the resulting bias is det_bias); without it, an
/// allocation leaving terms unmeasured is an error.
double det_variance(const GroupCover& cover, const Allocation& alloc,
                    const PauliSum& o, const CovarianceTable& table,
                    bool partial_coverage = false);

/// Bias of the deterministic estimator when coverage is partial:
/// -sum_{P : M_P = 0} c_P mu_P. Zero for full coverage.
double det_bias(const GroupCover& cover, const Allocation& alloc,
                const PauliSum& o, const CovarianceTable& table);

struct VarianceDominance {
  double det;        // Var(det estimator)
  double ht_scaled;  // Var(HT with counting distribution) / M
  bool holds;        // det <= ht_scaled + 1e-10
};

/// Checks the dominance bound: a deterministic schedule never has larger
/// variance than the Horvitz-Thompson estimator driven by the same group
/// frequencies (the randomized estimator adds sampling variance on top).
VarianceDominance check_variance_dominance(const GroupCover& cover,
                                           const Allocation& alloc,
                                           const PauliSum& o,
                                           const CovarianceTable& table);

/// Horvitz-Thompson estimate from a measurement record:
/// identity_offset + (1/M) sum_P (c_P / pi_P) sum_{G in G_P} s_{P,G}.
double ht_estimate(const GroupCover& cover, const Distribution& pi,
                   const MeasurementRecord& record, const PauliSum& o);

/// Deterministic estimate: identity_offset + sum over measured terms of
/// c_P (n+_P - n-_P) / M_P. The record's draw counts must match the
/// allocation exactly.
double det_estimate(const GroupCover& cover, const Allocation& alloc,
                    const MeasurementRecord& record, const PauliSum& o);

struct MVarPoint {
  std::size_t shots;      // M: length of the schedule prefix
  double m_times_var;     // M * Var(det estimator on the prefix)
  double bias;
};

/// Evaluates the deterministic estimator on prefixes of an ordered
/// schedule: the first M settings get one shot each (duplicate settings
/// accumulate). `setting_order` indexes the cover's groups, as produced by
/// import_schedule.
std::vector<MVarPoint> m_var_curve(const GroupCover& cover,
                                   std::span<const std::size_t> setting_order,
                                   const PauliSum& o,
                                   const CovarianceTable& table,
                                   std::span<const std::size_t> shot_values);

/// Summary of a scheme's exact error profile. `variance` is the estimator
/// variance at the evaluated configuration; `comparison_variance` is the
/// cross-method unit (the one-shot variance for randomized schemes, M * Var
/// for deterministic ones).
struct SchemeEvaluation {
  std::string estimator;  // "horvitz-thompson" | "deterministic"
  double variance;
  double comparison_variance;
  double bias;
  double mse;  // variance + bias^2
  std::uint64_t total_shots;
};

SchemeEvaluation evaluate_ht_scheme(const GroupCover& cover,
                                    const Distribution& pi, const PauliSum& o,
                                    const CovarianceTable& table);

SchemeEvaluation evaluate_det_scheme(const GroupCover& cover,
                                     const Allocation& alloc,
                                     const PauliSum& o,
                                     const CovarianceTable& table,
                                     bool partial_coverage = false);

}  // namespace paulivar
