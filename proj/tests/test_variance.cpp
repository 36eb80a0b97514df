#include "doctest.h"
#include "support/oracles.hpp"

#include <cmath>

#include "paulivar/io.hpp"
#include "paulivar/postprocess.hpp"
#include "paulivar/simulate.hpp"
#include "paulivar/variance.hpp"

using namespace paulivar;

namespace {

struct H2Fixture {
  PauliSum o = parse_pauli_sum(read_text_file("data/h2_sto3g.txt"));
  GroundStateResult gs = ground_state(o);
};

}  // namespace

TEST_CASE("H2 published Horvitz-Thompson variances") {
  H2Fixture fx;
  const auto g = build_graph(fx.o, CommutationMode::QWC);
  const auto cover = ldf_cover(g);
  const auto table = covariance_table(fx.gs.state, cover, fx.o);

  CHECK(ht_variance(cover, l1_distribution(cover, fx.o), fx.o, table) ==
        doctest::Approx(0.402).epsilon(0.02));
  CHECK(ht_variance(cover, l2_distribution(cover, fx.o), fx.o, table) ==
        doctest::Approx(0.424).epsilon(0.02));
  CHECK(ht_variance(cover, uniform_distribution(cover), fx.o, table) ==
        doctest::Approx(4.17).epsilon(0.02));
}

TEST_CASE("overlap-aware variance equals the disjoint formula on partitions") {
  RandomSource rng(111);
  const int rounds = oracle::fast_mode ? 6 : 20;
  for (int round = 0; round < rounds; ++round) {
    const PauliSum o =
        oracle::random_pauli_sum(3, 4 + rng.next_below(6), 1400 + round);
    const auto g = build_graph(o, CommutationMode::FC);
    const auto cover = ldf_cover(g);
    const StateVector psi = random_state(3, 1500 + round);
    const auto table = covariance_table(psi, cover, o);
    const auto dist = l2_distribution(cover, o);
    const double overlap_form = ht_variance(cover, dist, o, table);
    const double disjoint_form = ht_variance_disjoint(cover, dist, o, table);
    CHECK(overlap_form == doctest::Approx(disjoint_form).epsilon(1e-12));
  }
}

TEST_CASE("law of total variance assembles the closed form") {
  RandomSource rng(112);
  const int rounds = oracle::fast_mode ? 6 : 20;
  for (int round = 0; round < rounds; ++round) {
    const PauliSum o =
        oracle::random_pauli_sum(3, 4 + rng.next_below(5), 1600 + round);
    const auto g = build_graph(o, CommutationMode::FC);
    const auto cover = oracle::random_cover(g, 4, 1700 + round);
    const StateVector psi = random_state(3, 1800 + round);
    const auto table = covariance_table(psi, cover, o);
    const auto dist = uniform_distribution(cover);

    // E[Var | group] + Var(E | group), assembled term by term.
    double expected_conditional_variance = 0.0;
    double second_moment_of_conditional_mean = 0.0;
    double mean_of_conditional_mean = 0.0;
    for (std::size_t gi = 0; gi < cover.num_groups(); ++gi) {
      const auto& group = cover.groups()[gi];
      double conditional_mean = 0.0;
      double conditional_variance = 0.0;
      for (std::size_t a = 0; a < group.size(); ++a) {
        const double ca = o.terms()[group[a]].coefficient;
        const double pa = dist.pi_term(group[a]);
        conditional_mean += ca * table.mean(group[a]) / pa;
        for (std::size_t b = 0; b < group.size(); ++b) {
          const double cb = o.terms()[group[b]].coefficient;
          const double pb = dist.pi_term(group[b]);
          conditional_variance += ca * cb / (pa * pb) *
                                  table.covariance(group[a], group[b]);
        }
      }
      expected_conditional_variance +=
          dist.pi_group(gi) * conditional_variance;
      mean_of_conditional_mean += dist.pi_group(gi) * conditional_mean;
      second_moment_of_conditional_mean +=
          dist.pi_group(gi) * conditional_mean * conditional_mean;
    }
    const double law_of_total_variance =
        expected_conditional_variance + second_moment_of_conditional_mean -
        mean_of_conditional_mean * mean_of_conditional_mean;
    const double closed_form = ht_variance(cover, dist, o, table);
    CHECK(law_of_total_variance ==
          doctest::Approx(closed_form).epsilon(1e-11));
  }
}

TEST_CASE("ht_variance matches exhaustive enumeration") {
  RandomSource rng(113);
  const int rounds = oracle::fast_mode ? 8 : 25;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t n = 1 + rng.next_below(3);
    const PauliSum o =
        oracle::random_pauli_sum(n, 2 + rng.next_below(5), 1900 + round);
    const auto g = build_graph(o, CommutationMode::FC);
    const auto cover = oracle::random_cover(g, 3, 2000 + round);
    const StateVector psi = random_state(n, 2100 + round);
    const auto table = covariance_table(psi, cover, o);
    const auto dist = l2_distribution(cover, o);
    const double closed_form = ht_variance(cover, dist, o, table);
    const double brute_force = oracle::bf_ht_variance(cover, dist, o, psi);
    CHECK(closed_form == doctest::Approx(brute_force).epsilon(1e-10));
    CHECK(closed_form >= -1e-10);
  }
}

TEST_CASE("det_variance matches exhaustive enumeration") {
  RandomSource rng(114);
  const int rounds = oracle::fast_mode ? 8 : 25;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t n = 1 + rng.next_below(3);
    const PauliSum o =
        oracle::random_pauli_sum(n, 2 + rng.next_below(5), 2200 + round);
    const auto g = build_graph(o, CommutationMode::FC);
    const auto cover = oracle::random_cover(g, 3, 2300 + round);
    const StateVector psi = random_state(n, 2400 + round);
    const auto table = covariance_table(psi, cover, o);
    std::vector<std::size_t> counts(cover.num_groups());
    for (auto& c : counts) c = 1 + rng.next_below(3);
    const Allocation alloc(cover, std::move(counts), "test");
    const double closed_form = det_variance(cover, alloc, o, table);
    const double brute_force = oracle::bf_det_variance(cover, alloc, o, psi);
    CHECK(closed_form == doctest::Approx(brute_force).epsilon(1e-10));
    CHECK(closed_form >= -1e-10);
  }
}

TEST_CASE("one group holding every term has the plain weighted-sum variance") {
  // pi = (1): no sampling randomness, only the quantum variance of
  // sum_P c_P X_P remains.
  const PauliSum o = parse_pauli_sum("0.5 ZI\n0.25 IZ\n-0.125 ZZ\n");
  const GroupCover cover(CommutationMode::QWC, 3, {{0, 1, 2}}, "test");
  const StateVector psi = random_state(2, 181);
  const auto table = covariance_table(psi, cover, o);
  const Distribution dist(cover, {1.0}, "point");
  double expected = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = 0; q < 3; ++q) {
      expected += o.terms()[p].coefficient * o.terms()[q].coefficient *
                  table.covariance(p, q);
    }
  }
  CHECK(ht_variance(cover, dist, o, table) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("single Pauli deterministic variance is c^2 sigma^2 / M") {
  const PauliSum o(1, {{PauliString::from_word("Z"), 0.7}}, 0.0);
  const GroupCover cover(CommutationMode::QWC, 1, {{0}}, "test");
  const StateVector psi = random_state(1, 115);
  const auto table = covariance_table(psi, cover, o);
  const double mu = table.mean(0);
  for (std::size_t shots : {1, 4, 9}) {
    const Allocation alloc(cover, {shots}, "test");
    CHECK(det_variance(cover, alloc, o, table) ==
          doctest::Approx(0.49 * (1 - mu * mu) / double(shots)));
  }
}

TEST_CASE("det_bias examples") {
  H2Fixture fx;
  const auto g = build_graph(fx.o, CommutationMode::QWC);
  const auto cover = ldf_cover(g);
  const auto table = covariance_table(fx.gs.state, cover, fx.o);

  // Full coverage: no bias.
  const Allocation full(cover, std::vector<std::size_t>(cover.num_groups(), 1),
                        "test");
  CHECK(det_bias(cover, full, fx.o, table) == 0.0);

  // Empty allocation: the estimator is the constant offset.
  const Allocation none(cover, std::vector<std::size_t>(cover.num_groups(), 0),
                        "test");
  CHECK(det_bias(cover, none, fx.o, table) ==
        doctest::Approx(-(fx.gs.energy - fx.o.identity_offset())));

  // Dropping the largest-|c| group biases by minus its mean contribution,
  // matching the brute-force expected shortfall.
  std::size_t heavy = 0;
  double heavy_norm = -1.0;
  for (std::size_t gi = 0; gi < cover.num_groups(); ++gi) {
    double s = 0.0;
    for (auto v : cover.groups()[gi]) {
      s += std::abs(fx.o.terms()[v].coefficient);
    }
    if (s > heavy_norm) {
      heavy_norm = s;
      heavy = gi;
    }
  }
  std::vector<std::size_t> counts(cover.num_groups(), 1);
  counts[heavy] = 0;
  const Allocation partial(cover, std::move(counts), "test");
  const double bias = det_bias(cover, partial, fx.o, table);
  double expected = 0.0;
  for (auto v : cover.groups()[heavy]) {
    expected -= fx.o.terms()[v].coefficient * table.mean(v);
  }
  CHECK(bias == doctest::Approx(expected));
  const double mean =
      oracle::bf_det_mean(cover, partial, fx.o, fx.gs.state);
  CHECK(bias == doctest::Approx(mean - fx.gs.energy).epsilon(1e-9));

  // MSE assembles variance and bias.
  const auto evaluation =
      evaluate_det_scheme(cover, partial, fx.o, table, true);
  CHECK(evaluation.mse ==
        doctest::Approx(evaluation.variance + evaluation.bias *
                                                  evaluation.bias)
            .epsilon(1e-12));
}

TEST_CASE("deterministic variance never exceeds the matched randomized one") {
  RandomSource rng(116);
  const int rounds = oracle::fast_mode ? 15 : 50;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t n = 1 + rng.next_below(3);
    const PauliSum o =
        oracle::random_pauli_sum(n, 2 + rng.next_below(5), 2500 + round);
    const auto g = build_graph(o, CommutationMode::FC);
    const auto cover = oracle::random_cover(g, 3, 2600 + round);
    const StateVector psi = random_state(n, 2700 + round);
    const auto table = covariance_table(psi, cover, o);
    std::vector<std::size_t> counts(cover.num_groups());
    for (auto& c : counts) c = 1 + rng.next_below(3);
    const Allocation alloc(cover, std::move(counts), "test");
    const auto result = check_variance_dominance(cover, alloc, o, table);
    CHECK(result.holds);
  }

  // Single-group cover: Cauchy-Schwarz is tight, the bound is an equality.
  const PauliSum o = parse_pauli_sum("0.4 ZI\n0.3 IZ\n");
  const auto g = build_graph(o, CommutationMode::QWC);
  const GroupCover cover(CommutationMode::QWC, 2, {{0, 1}}, "test");
  const StateVector psi = random_state(2, 117);
  const auto table = covariance_table(psi, cover, o);
  const Allocation alloc(cover, {3}, "test");
  const auto result = check_variance_dominance(cover, alloc, o, table);
  CHECK(result.det == doctest::Approx(result.ht_scaled).epsilon(1e-10));
}

TEST_CASE("ht_estimate formula cases") {
  const PauliSum o = parse_pauli_sum("0.2 II\n0.4 ZI\n0.3 IZ\n1.0 XX\n");
  const GroupCover cover(CommutationMode::QWC, 3, {{0, 1}, {2}}, "test");
  const auto dist = uniform_distribution(cover);

  MeasurementRecord record(cover);
  const std::vector<int> plus{1, 1};
  record.add_draw(0, plus);
  // One draw, all outcomes +1: offset + sum over the group of c/pi.
  CHECK(ht_estimate(cover, dist, record, o) ==
        doctest::Approx(0.2 + (0.4 + 0.3) / 0.5));

  MeasurementRecord empty(cover);
  CHECK_THROWS_AS(ht_estimate(cover, dist, empty, o), PreconditionError);
  CHECK_THROWS_AS(record.add_draw(5, plus), PreconditionError);
}

TEST_CASE("det_estimate formula cases") {
  const PauliSum o = parse_pauli_sum("0.2 II\n0.4 ZI\n0.3 IZ\n");
  const GroupCover cover(CommutationMode::QWC, 2, {{0, 1}}, "test");
  const Allocation alloc(cover, {2}, "test");

  MeasurementRecord record(cover);
  record.add_draw(0, std::vector<int>{1, 1});
  record.add_draw(0, std::vector<int>{1, -1});
  // Term 0 measured +1 twice: contributes c. Term 1 cancels.
  CHECK(det_estimate(cover, alloc, record, o) ==
        doctest::Approx(0.2 + 0.4));

  MeasurementRecord short_record(cover);
  short_record.add_draw(0, std::vector<int>{1, 1});
  CHECK_THROWS_AS(det_estimate(cover, alloc, short_record, o),
                  PreconditionError);
}

TEST_CASE("m_var_curve bias vanishes exactly at full coverage") {
  H2Fixture fx;
  const auto imported = import_schedule(
      read_text_file("data/h2_sto3g_minimal_schedule.txt"), fx.o);
  const auto table = covariance_table(fx.gs.state, imported.cover, fx.o);
  const std::vector<std::size_t> shot_values{1, 2, 3, 4, 5};
  const auto curve = m_var_curve(imported.cover, imported.setting_order,
                                 fx.o, table, shot_values);
  REQUIRE(curve.size() == 5);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    CHECK(curve[i].bias != 0.0);  // some term still unmeasured
  }
  CHECK(curve.back().bias == 0.0);
  CHECK(curve.back().m_times_var == doctest::Approx(0.195).epsilon(0.02));

  // M = 1: M * Var is the variance of the first group's weighted sum.
  const auto first_group = imported.setting_order[0];
  double expected = 0.0;
  for (auto p : imported.cover.groups()[first_group]) {
    for (auto q : imported.cover.groups()[first_group]) {
      expected += fx.o.terms()[p].coefficient * fx.o.terms()[q].coefficient *
                  table.covariance(p, q);
    }
  }
  CHECK(curve[0].m_times_var == doctest::Approx(expected));
}

TEST_CASE("deterministic Monte Carlo agrees with det_variance") {
  const PauliSum o = oracle::random_pauli_sum(2, 4, 118);
  const auto g = build_graph(o, CommutationMode::FC);
  const auto cover = oracle::random_cover(g, 3, 119);
  const StateVector psi = random_state(2, 120);
  const auto table = covariance_table(psi, cover, o);
  std::vector<std::size_t> counts(cover.num_groups(), 2);
  const Allocation alloc(cover, std::move(counts), "test");
  const double exact = det_variance(cover, alloc, o, table);

  ExperimentConfig config;
  config.repetitions = oracle::fast_mode ? 20000 : 100000;
  config.truth = pauli_sum_expectation(psi, o);
  config.master_seed = 121;
  const auto estimates = run_det_experiment(config, cover, alloc, o, psi);
  const auto [mean, variance] = estimate_moments(estimates);
  const double standard_error =
      exact * std::sqrt(2.0 / double(config.repetitions - 1));
  CHECK(std::abs(variance - exact) < 4.0 * standard_error + 1e-12);
  CHECK(std::abs(mean - config.truth) <
        4.0 * std::sqrt(exact / double(config.repetitions)) + 1e-12);
}
