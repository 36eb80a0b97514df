#include "paulivar/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "paulivar/normal.hpp"

namespace paulivar {

std::size_t GroupOutcomeLaw::sample(RandomSource& rng) const {
  const double u = rng.next_double();
  const auto it =
      std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(it - cumulative.begin(),
                               cumulative.size() - 1);
}

GroupOutcomeLaw enumerate_group_outcomes(const StateVector& psi,
                                         std::span<const PauliString> group) {
  GroupOutcomeLaw law;
  // Depth-first over outcome signs, projecting as we go and pruning
  // zero-probability branches. The branch weight is the squared norm of the
  // projected (unnormalized) state.
  std::vector<int> signs(group.size(), 0);
  const double prune = 1e-30;  // squared-norm threshold
  std::function<void(const StateVector&, std::size_t)> descend =
      [&](const StateVector& state, std::size_t depth) {
        if (depth == group.size()) {
          const double prob = state.squaredNorm();
          if (prob > prune) {
            law.patterns.push_back(signs);
            law.probabilities.push_back(prob);
          }
          return;
        }
        const StateVector applied = apply_pauli(group[depth], state);
        for (int sign : {+1, -1}) {
          const StateVector projected =
              0.5 * (state + static_cast<double>(sign) * applied);
          if (projected.squaredNorm() > prune) {
            signs[depth] = sign;
            descend(projected, depth + 1);
          }
        }
      };
  descend(psi, 0);

  law.cumulative.resize(law.probabilities.size());
  double running = 0.0;
  for (std::size_t i = 0; i < law.probabilities.size(); ++i) {
    running += law.probabilities[i];
    law.cumulative[i] = running;
  }
  if (!law.cumulative.empty()) {
    // Normalize away projection round-off so sampling covers [0, 1).
    for (auto& c : law.cumulative) c /= running;
    law.cumulative.back() = 1.0;
  }
  return law;
}

namespace {

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PAULIVAR_THREADS")) {
    const long parsed = std::atol(env);
    if (parsed > 0) return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_repetitions(std::size_t repetitions, std::size_t threads,
                          const std::function<void(std::size_t)>& body) {
  threads = std::min(threads, repetitions);
  if (threads <= 1) {
    for (std::size_t r = 0; r < repetitions; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= repetitions) return;
        body(r);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<GroupOutcomeLaw> group_laws(const GroupCover& cover,
                                        const PauliSum& o,
                                        const StateVector& psi) {
  std::vector<GroupOutcomeLaw> laws(cover.num_groups());
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    std::vector<PauliString> words;
    words.reserve(cover.groups()[g].size());
    for (std::size_t v : cover.groups()[g]) {
      words.push_back(o.terms()[v].word);
    }
    laws[g] = enumerate_group_outcomes(psi, words);
  }
  return laws;
}

// Accumulates `draws` samples of a group's outcome law into per-member
// outcome sums (s_{P,G} contributions).
void sample_group_draws(const GroupOutcomeLaw& law, std::size_t draws,
                        RandomSource& rng, std::vector<long long>& sums) {
  std::vector<std::size_t> pattern_counts(law.patterns.size(), 0);
  for (std::size_t d = 0; d < draws; ++d) {
    ++pattern_counts[law.sample(rng)];
  }
  for (std::size_t p = 0; p < law.patterns.size(); ++p) {
    if (pattern_counts[p] == 0) continue;
    const auto count = static_cast<long long>(pattern_counts[p]);
    for (std::size_t i = 0; i < sums.size(); ++i) {
      sums[i] += count * law.patterns[p][i];
    }
  }
}

}  // namespace

std::vector<double> run_ht_experiment(const ExperimentConfig& config,
                                      const GroupCover& cover,
                                      const Distribution& pi,
                                      const PauliSum& o,
                                      const StateVector& psi) {
  if (config.shots < 1 || config.repetitions < 1) {
    throw PreconditionError("experiment needs at least one shot and one rep");
  }
  const auto laws = group_laws(cover, o, psi);
  std::vector<double> group_cumulative(cover.num_groups());
  double running = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    running += pi.pi_group(g);
    group_cumulative[g] = running;
  }
  group_cumulative.back() = 1.0;

  std::vector<double> estimates(config.repetitions);
  parallel_repetitions(
      config.repetitions, resolve_threads(config.threads),
      [&](std::size_t rep) {
        RandomSource rng(derive_seed(config.master_seed, rep));
        // Group draw counts: M i.i.d. draws from pi, bucketed.
        std::vector<std::size_t> draws(cover.num_groups(), 0);
        for (std::size_t s = 0; s < config.shots; ++s) {
          const double u = rng.next_double();
          const auto it = std::upper_bound(group_cumulative.begin(),
                                           group_cumulative.end(), u);
          ++draws[std::min<std::size_t>(it - group_cumulative.begin(),
                                        cover.num_groups() - 1)];
        }
        MeasurementRecord record(cover);
        std::vector<long long> sums;
        for (std::size_t g = 0; g < cover.num_groups(); ++g) {
          if (draws[g] == 0) continue;
          sums.assign(cover.groups()[g].size(), 0);
          sample_group_draws(laws[g], draws[g], rng, sums);
          record.add_counts(g, draws[g], sums);
        }
        estimates[rep] = ht_estimate(cover, pi, record, o);
      });
  return estimates;
}

std::vector<double> run_det_experiment(const ExperimentConfig& config,
                                       const GroupCover& cover,
                                       const Allocation& alloc,
                                       const PauliSum& o,
                                       const StateVector& psi) {
  if (config.repetitions < 1) {
    throw PreconditionError("experiment needs at least one repetition");
  }
  const auto laws = group_laws(cover, o, psi);
  std::vector<double> estimates(config.repetitions);
  parallel_repetitions(
      config.repetitions, resolve_threads(config.threads),
      [&](std::size_t rep) {
        RandomSource rng(derive_seed(config.master_seed, rep));
        MeasurementRecord record(cover);
        std::vector<long long> sums;
        for (std::size_t g = 0; g < cover.num_groups(); ++g) {
          if (alloc.count(g) == 0) continue;
          sums.assign(cover.groups()[g].size(), 0);
          sample_group_draws(laws[g], alloc.count(g), rng, sums);
          record.add_counts(g, alloc.count(g), sums);
        }
        estimates[rep] = det_estimate(cover, alloc, record, o);
      });
  return estimates;
}

SuccessRate success_rate(std::span<const double> estimates, double truth,
                         double epsilon, std::size_t resamples,
                         std::uint64_t seed) {
  if (estimates.empty()) {
    throw PreconditionError("success rate of an empty estimate list");
  }
  if (resamples < 100) {
    throw PreconditionError("bootstrap needs at least 100 resamples");
  }
  const std::size_t n = estimates.size();
  std::vector<std::uint8_t> hit(n);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    hit[i] = std::abs(estimates[i] - truth) < epsilon;
    hits += hit[i];
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(n);

  RandomSource rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < resamples; ++b) {
    std::size_t resample_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      resample_hits += hit[rng.next_below(n)];
    }
    const double r = static_cast<double>(resample_hits) /
                     static_cast<double>(n);
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / static_cast<double>(resamples);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(resamples) - mean * mean);
  return {rate, std::sqrt(var)};
}

std::pair<double, double> estimate_moments(std::span<const double> estimates) {
  if (estimates.empty()) {
    throw PreconditionError("moments of an empty estimate list");
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(estimates.size());
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  if (estimates.size() > 1) var /= static_cast<double>(estimates.size() - 1);
  return {mean, var};
}

double bootstrap_variance_std(std::span<const double> estimates,
                              std::size_t resamples, std::uint64_t seed) {
  if (estimates.size() < 2) {
    throw PreconditionError("variance bootstrap needs at least two estimates");
  }
  RandomSource rng(seed);
  const std::size_t n = estimates.size();
  std::vector<double> resample(n);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      resample[i] = estimates[rng.next_below(n)];
    }
    const double v = estimate_moments(resample).second;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(resamples);
  return std::sqrt(
      std::max(0.0, sum_sq / static_cast<double>(resamples) - mean * mean));
}

std::vector<std::pair<double, double>> qq_data(
    std::span<const double> estimates, double truth,
    double variance_per_estimate) {
  if (estimates.size() < 2) {
    throw PreconditionError("Q-Q data needs at least two estimates");
  }
  std::vector<double> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end());
  const double sigma = std::sqrt(std::max(0.0, variance_per_estimate));
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    pairs.emplace_back(truth + sigma * inverse_normal_cdf(p), sorted[i]);
  }
  return pairs;
}

}  // namespace paulivar
