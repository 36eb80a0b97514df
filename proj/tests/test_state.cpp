#include "doctest.h"
#include "support/oracles.hpp"

#include <Eigen/Eigenvalues>

#include "paulivar/io.hpp"
#include "paulivar/state.hpp"

using namespace paulivar;

namespace {

StateVector plus_state() {
  StateVector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return psi;
}

StateVector bell_state() {
  StateVector psi = StateVector::Zero(4);
  psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
  return psi;
}

const char* kH2Path = "data/h2_sto3g.txt";

}  // namespace

TEST_CASE("apply_pauli single-qubit actions") {
  const StateVector zero = basis_state("0");
  CHECK((apply_pauli(PauliString::from_word("Z"), zero) - zero).norm() <
        1e-15);
  const StateVector one = basis_state("1");
  CHECK((apply_pauli(PauliString::from_word("X"), zero) - one).norm() <
        1e-15);
  const StateVector y_zero = apply_pauli(PauliString::from_word("Y"), zero);
  CHECK(std::abs(y_zero[1] - std::complex<double>(0.0, 1.0)) < 1e-15);
}

TEST_CASE("apply_pauli is an involution and matches the dense oracle") {
  RandomSource rng(21);
  const int rounds = oracle::fast_mode ? 20 : 80;
  for (int round = 0; round < rounds; ++round) {
    const std::size_t n = 1 + rng.next_below(3);
    std::string word(n, 'I');
    for (auto& c : word) c = "IXYZ"[rng.next_below(4)];
    const auto p = PauliString::from_word(word);
    const StateVector psi = random_state(n, rng.next_u64());
    const StateVector applied = apply_pauli(p, psi);
    CHECK((apply_pauli(p, applied) - psi).norm() < 1e-12);
    const Eigen::VectorXcd expected = oracle::dense_pauli(p) * psi;
    CHECK((applied - expected).norm() < 1e-12);
  }
}

TEST_CASE("expectation examples") {
  CHECK(expectation(basis_state("0"), PauliString::from_word("Z")) ==
        doctest::Approx(1.0));
  CHECK(expectation(plus_state(), PauliString::from_word("Z")) ==
        doctest::Approx(0.0));
  CHECK(expectation(plus_state(), PauliString::from_word("X")) ==
        doctest::Approx(1.0));
}

TEST_CASE("pauli_sum_expectation examples") {
  const PauliSum o(1, {{PauliString::from_word("Z"), 2.0}}, 1.0);
  CHECK(pauli_sum_expectation(basis_state("1"), o) == doctest::Approx(-1.0));

  const PauliSum empty(2, {}, 0.25);
  CHECK(pauli_sum_expectation(basis_state("00"), empty) ==
        doctest::Approx(0.25));
}

TEST_CASE("H2 ground state matches dense diagonalization") {
  const PauliSum o = parse_pauli_sum(read_text_file(kH2Path));
  const Eigen::MatrixXcd dense = oracle::dense_pauli_sum(o);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  const double exact = solver.eigenvalues()[0];

  const GroundStateResult gs = ground_state(o, 1e-8);
  CHECK(gs.energy == doctest::Approx(exact).epsilon(1e-8));
  CHECK(gs.residual <= 1e-8 * o.l1_norm());
  CHECK(pauli_sum_expectation(gs.state, o) ==
        doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("ground_state handles tiny and degenerate problems") {
  // O = -X on one qubit: ground energy -1, eigenvector |+> up to phase.
  const PauliSum minus_x(1, {{PauliString::from_word("X"), -1.0}}, 0.0);
  const auto gs = ground_state(minus_x);
  CHECK(gs.energy == doctest::Approx(-1.0));
  CHECK(std::abs(std::abs(gs.state[0]) - 1.0 / std::sqrt(2.0)) < 1e-7);

  // O = ZZ: degenerate ground space spanned by |01> and |10>.
  const PauliSum zz(2, {{PauliString::from_word("ZZ"), 1.0}}, 0.0);
  const auto gs2 = ground_state(zz);
  CHECK(gs2.energy == doctest::Approx(-1.0));
  CHECK(std::abs(gs2.state[0]) < 1e-6);
  CHECK(std::abs(gs2.state[3]) < 1e-6);
  CHECK(gs2.degenerate_hint);
}

TEST_CASE("ground_state rejects oversized problems") {
  std::vector<PauliSum::Term> terms;
  std::string word(25, 'I');
  word[0] = 'Z';
  terms.push_back({PauliString::from_word(word), 1.0});
  const PauliSum o(25, std::move(terms), 0.0);
  CHECK_THROWS_AS(ground_state(o), PreconditionError);
}

TEST_CASE("ground state energy is a variational lower bound") {
  const PauliSum o = oracle::random_pauli_sum(3, 6, 31);
  const auto gs = ground_state(o);
  const int rounds = oracle::fast_mode ? 25 : 100;
  for (int i = 0; i < rounds; ++i) {
    const StateVector psi = random_state(3, 1000 + i);
    CHECK(gs.energy <= pauli_sum_expectation(psi, o) + 1e-9);
  }
}

TEST_CASE("basis_state addresses the expected amplitude") {
  const StateVector zero = basis_state("0");
  CHECK(zero[0] == std::complex<double>(1.0, 0.0));
  const StateVector zero_one = basis_state("01");
  CHECK(zero_one[1] == std::complex<double>(1.0, 0.0));
  CHECK(zero_one.squaredNorm() == doctest::Approx(1.0));
}

TEST_CASE("measure_group deterministic cases") {
  RandomSource rng(41);
  const std::vector<PauliString> z{PauliString::from_word("Z")};
  for (int i = 0; i < 10; ++i) {
    CHECK(measure_group(basis_state("0"), z, rng)[0] == 1);
  }
  const std::vector<PauliString> zz{PauliString::from_word("ZI"),
                                    PauliString::from_word("IZ")};
  for (int i = 0; i < 20; ++i) {
    const auto outcomes = measure_group(bell_state(), zz, rng);
    CHECK(outcomes[0] == outcomes[1]);
  }
}

TEST_CASE("measure_group obeys the Born rule on |+>") {
  RandomSource rng(42);
  const std::vector<PauliString> z{PauliString::from_word("Z")};
  int plus = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    plus += measure_group(plus_state(), z, rng)[0] == 1;
  }
  const double frequency = double(plus) / draws;
  CHECK(frequency == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("measure_group rejects non-commuting families") {
  RandomSource rng(43);
  const std::vector<PauliString> bad{PauliString::from_word("X"),
                                     PauliString::from_word("Y")};
  CHECK_THROWS_AS(measure_group(basis_state("0"), bad, rng),
                  PreconditionError);
}

TEST_CASE("measure_group joint frequencies match dense projector law") {
  RandomSource rng(44);
  const std::size_t n = 2;
  const PauliSum o = oracle::random_pauli_sum(n, 3, 45);
  // Find a commuting pair/triple among the terms to measure jointly.
  std::vector<PauliString> group{o.terms()[0].word};
  for (std::size_t v = 1; v < o.num_terms(); ++v) {
    bool ok = true;
    for (const auto& p : group) ok = ok && fc_commutes(p, o.terms()[v].word);
    if (ok) group.push_back(o.terms()[v].word);
  }
  const StateVector psi = random_state(n, 46);
  const auto law = oracle::dense_joint_outcomes(psi, group);

  const int draws = oracle::fast_mode ? 20000 : 100000;
  std::map<std::vector<int>, int> histogram;
  for (int d = 0; d < draws; ++d) {
    ++histogram[measure_group(psi, group, rng)];
  }
  double total_prob = 0.0;
  for (const auto& outcome : law) {
    total_prob += outcome.probability;
    const auto it = histogram.find(outcome.signs);
    const double observed =
        it == histogram.end() ? 0.0 : double(it->second) / draws;
    const double sigma = std::sqrt(
        std::max(outcome.probability * (1 - outcome.probability) / draws,
                 1e-12));
    CHECK(std::abs(observed - outcome.probability) < 3.5 * sigma + 1e-4);
  }
  CHECK(total_prob == doctest::Approx(1.0));
}

TEST_CASE("covariance_table examples and invariants") {
  // Singleton groups: only diagonal moments exist and they equal 1.
  const PauliSum o =
      parse_pauli_sum("0.3 ZI\n0.4 IZ\n0.5 XX\n");
  const CommutationGraph g = build_graph(o, CommutationMode::QWC);
  const GroupCover singletons(CommutationMode::QWC, 3, {{0}, {1}, {2}},
                              "test");
  const StateVector psi = bell_state();
  const CovarianceTable t0 = covariance_table(psi, singletons, o);
  CHECK(t0.pair_moment(0, 0) == 1.0);
  CHECK_FALSE(t0.has_pair(0, 1));
  CHECK_THROWS_AS(t0.pair_moment(0, 1), PreconditionError);
  // Sigma_PP = 1 - mu^2.
  CHECK(t0.covariance(2, 2) ==
        doctest::Approx(1.0 - t0.mean(2) * t0.mean(2)));

  // Bell state with the group {ZI, IZ}: means 0, tr(psi ZZ) = 1.
  const GroupCover pair_cover(CommutationMode::QWC, 3, {{0, 1}, {2}}, "test");
  const CovarianceTable t1 = covariance_table(psi, pair_cover, o);
  CHECK(t1.mean(0) == doctest::Approx(0.0));
  CHECK(t1.mean(1) == doctest::Approx(0.0));
  CHECK(t1.pair_moment(0, 1) == doctest::Approx(1.0));
  CHECK(t1.covariance(0, 1) == doctest::Approx(1.0));

  // Non-commuting intra-group pair is a cover-validity error.
  const PauliSum bad = parse_pauli_sum("1.0 XI\n1.0 ZI\n");
  const GroupCover bad_cover(CommutationMode::FC, 2, {{0, 1}}, "test");
  CHECK_THROWS_AS(covariance_table(basis_state("00"), bad_cover, bad),
                  PreconditionError);
  (void)g;
}

TEST_CASE("covariance bound |Sigma_PQ| <= 1 - mu mu + tolerance") {
  RandomSource rng(48);
  const int rounds = oracle::fast_mode ? 10 : 40;
  for (int round = 0; round < rounds; ++round) {
    const PauliSum o = oracle::random_pauli_sum(2, 4, 100 + round);
    const CommutationGraph g = build_graph(o, CommutationMode::FC);
    const GroupCover cover = oracle::random_cover(g, 3, 200 + round);
    const StateVector psi = random_state(2, 300 + round);
    const CovarianceTable table = covariance_table(psi, cover, o);
    for (const auto& group : cover.groups()) {
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a; b < group.size(); ++b) {
          const double sigma = table.covariance(group[a], group[b]);
          CHECK(std::abs(sigma) <=
                1.0 - table.mean(group[a]) * table.mean(group[b]) + 1e-10);
        }
      }
    }
  }
}
