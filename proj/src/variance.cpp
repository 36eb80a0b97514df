#include "paulivar/variance.hpp"

#include <algorithm>
#include <cmath>

namespace paulivar {

namespace {

// tr(psi O') with the identity component excluded.
double traceless_mean(const PauliSum& o, const CovarianceTable& table) {
  double value = 0.0;
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    value += o.terms()[v].coefficient * table.mean(v);
  }
  return value;
}

}  // namespace

MeasurementRecord::MeasurementRecord(const GroupCover& cover) {
  draws_.assign(cover.num_groups(), 0);
  outcome_sums_.resize(cover.num_groups());
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    outcome_sums_[g].assign(cover.groups()[g].size(), 0);
  }
}

void MeasurementRecord::add_draw(std::size_t g, std::span<const int> outcomes) {
  if (g >= draws_.size()) {
    throw PreconditionError("draw attributed to unknown group");
  }
  if (outcomes.size() != outcome_sums_[g].size()) {
    throw PreconditionError("outcome vector does not match group size");
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] != 1 && outcomes[i] != -1) {
      throw PreconditionError("outcomes must be +-1");
    }
    outcome_sums_[g][i] += outcomes[i];
  }
  ++draws_[g];
  ++total_draws_;
}

void MeasurementRecord::add_counts(std::size_t g, std::size_t draws,
                                   std::span<const long long> outcome_sums) {
  if (g >= draws_.size()) {
    throw PreconditionError("draw attributed to unknown group");
  }
  if (outcome_sums.size() != outcome_sums_[g].size()) {
    throw PreconditionError("outcome sums do not match group size");
  }
  for (std::size_t i = 0; i < outcome_sums.size(); ++i) {
    outcome_sums_[g][i] += outcome_sums[i];
  }
  draws_[g] += draws;
  total_draws_ += draws;
}

double ht_variance(const GroupCover& cover, const Distribution& pi,
                   const PauliSum& o, const CovarianceTable& table) {
  if (!pi.unbiased()) {
    throw PreconditionError(
        "ht_variance requires positive sampling probability on every term");
  }
  double total = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    const auto& group = cover.groups()[g];
    if (group.empty() || pi.pi_group(g) == 0.0) continue;
    double inner = 0.0;
    for (std::size_t a = 0; a < group.size(); ++a) {
      const double ca = o.terms()[group[a]].coefficient;
      const double pa = pi.pi_term(group[a]);
      inner += ca * ca / (pa * pa);  // diagonal: tr(psi P P) = 1
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const double cb = o.terms()[group[b]].coefficient;
        const double pb = pi.pi_term(group[b]);
        inner += 2.0 * ca * cb / (pa * pb) *
                 table.pair_moment(group[a], group[b]);
      }
    }
    total += pi.pi_group(g) * inner;
  }
  const double mean = traceless_mean(o, table);
  return total - mean * mean;
}

double ht_variance_disjoint(const GroupCover& cover, const Distribution& pi,
                            const PauliSum& o, const CovarianceTable& table) {
  if (!cover.is_partition()) {
    throw PreconditionError("disjoint formula requires a partition");
  }
  double total = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    const auto& group = cover.groups()[g];
    double second_moment = 0.0;
    for (std::size_t a = 0; a < group.size(); ++a) {
      const double ca = o.terms()[group[a]].coefficient;
      second_moment += ca * ca;
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const double cb = o.terms()[group[b]].coefficient;
        second_moment +=
            2.0 * ca * cb * table.pair_moment(group[a], group[b]);
      }
    }
    total += second_moment / pi.pi_group(g);
  }
  const double mean = traceless_mean(o, table);
  return total - mean * mean;
}

double det_variance(const GroupCover& cover, const Allocation& alloc,
                    const PauliSum& o, const CovarianceTable& table,
                    bool partial_coverage) {
  if (!alloc.unbiased() && !partial_coverage) {
    throw PreconditionError(
        "allocation leaves terms unmeasured; evaluate with partial coverage "
        "or fix the allocation");
  }
  double total = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    const auto& group = cover.groups()[g];
    if (alloc.count(g) == 0 || group.empty()) continue;
    double inner = 0.0;
    for (std::size_t a = 0; a < group.size(); ++a) {
      const std::size_t va = group[a];
      const double ca = o.terms()[va].coefficient;
      const double ma = static_cast<double>(alloc.term_count(va));
      inner += ca * ca / (ma * ma) * table.covariance(va, va);
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const std::size_t vb = group[b];
        const double cb = o.terms()[vb].coefficient;
        const double mb = static_cast<double>(alloc.term_count(vb));
        inner += 2.0 * ca * cb / (ma * mb) * table.covariance(va, vb);
      }
    }
    total += static_cast<double>(alloc.count(g)) * inner;
  }
  return total;
}

double det_bias(const GroupCover& cover, const Allocation& alloc,
                const PauliSum& o, const CovarianceTable& table) {
  (void)cover;
  double bias = 0.0;
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    if (alloc.term_count(v) == 0) {
      bias -= o.terms()[v].coefficient * table.mean(v);
    }
  }
  return bias;
}

VarianceDominance check_variance_dominance(const GroupCover& cover,
                                           const Allocation& alloc,
                                           const PauliSum& o,
                                           const CovarianceTable& table) {
  if (!alloc.unbiased()) {
    throw PreconditionError("dominance check requires full coverage");
  }
  const double det = det_variance(cover, alloc, o, table);
  const Distribution counting = counting_distribution(cover, alloc);
  const double ht =
      ht_variance(cover, counting, o, table) /
      static_cast<double>(alloc.total());
  return {det, ht, det <= ht + 1e-10};
}

double ht_estimate(const GroupCover& cover, const Distribution& pi,
                   const MeasurementRecord& record, const PauliSum& o) {
  const std::size_t total = record.total_draws();
  if (total == 0) {
    throw PreconditionError("estimate from a record with zero draws");
  }
  std::vector<double> term_sums(o.num_terms(), 0.0);
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    const auto& group = cover.groups()[g];
    for (std::size_t i = 0; i < group.size(); ++i) {
      term_sums[group[i]] += static_cast<double>(record.outcome_sum(g, i));
    }
  }
  double estimate = 0.0;
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    if (term_sums[v] == 0.0) continue;
    const double p = pi.pi_term(v);
    if (p <= 0.0) {
      throw PreconditionError("outcome recorded for a zero-probability term");
    }
    estimate += o.terms()[v].coefficient * term_sums[v] / p;
  }
  return o.identity_offset() + estimate / static_cast<double>(total);
}

double det_estimate(const GroupCover& cover, const Allocation& alloc,
                    const MeasurementRecord& record, const PauliSum& o) {
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (record.draws(g) != alloc.count(g)) {
      throw PreconditionError(
          "record draw counts do not match the allocation");
    }
  }
  std::vector<long long> term_sums(o.num_terms(), 0);
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    const auto& group = cover.groups()[g];
    for (std::size_t i = 0; i < group.size(); ++i) {
      term_sums[group[i]] += record.outcome_sum(g, i);
    }
  }
  double estimate = 0.0;
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    const std::size_t m = alloc.term_count(v);
    if (m == 0) continue;  // uncovered terms contribute zero (biased mode)
    estimate += o.terms()[v].coefficient *
                static_cast<double>(term_sums[v]) / static_cast<double>(m);
  }
  return o.identity_offset() + estimate;
}

std::vector<MVarPoint> m_var_curve(const GroupCover& cover,
                                   std::span<const std::size_t> setting_order,
                                   const PauliSum& o,
                                   const CovarianceTable& table,
                                   std::span<const std::size_t> shot_values) {
  std::vector<MVarPoint> points;
  points.reserve(shot_values.size());
  for (std::size_t m : shot_values) {
    if (m == 0 || m > setting_order.size()) {
      throw PreconditionError("prefix length out of range");
    }
    std::vector<std::size_t> counts(cover.num_groups(), 0);
    for (std::size_t i = 0; i < m; ++i) ++counts[setting_order[i]];
    const Allocation alloc(cover, std::move(counts), "prefix");
    const double variance =
        det_variance(cover, alloc, o, table, /*partial_coverage=*/true);
    points.push_back({m, static_cast<double>(m) * variance,
                      det_bias(cover, alloc, o, table)});
  }
  return points;
}

SchemeEvaluation evaluate_ht_scheme(const GroupCover& cover,
                                    const Distribution& pi, const PauliSum& o,
                                    const CovarianceTable& table) {
  const double variance = ht_variance(cover, pi, o, table);
  return {"horvitz-thompson", variance, variance, 0.0, variance, 1};
}

SchemeEvaluation evaluate_det_scheme(const GroupCover& cover,
                                     const Allocation& alloc,
                                     const PauliSum& o,
                                     const CovarianceTable& table,
                                     bool partial_coverage) {
  const double variance =
      det_variance(cover, alloc, o, table, partial_coverage);
  const double bias = det_bias(cover, alloc, o, table);
  return {"deterministic",
          variance,
          static_cast<double>(alloc.total()) * variance,
          bias,
          variance + bias * bias,
          alloc.total()};
}

}  // namespace paulivar
