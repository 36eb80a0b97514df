#include "support/oracles.hpp"

#include <algorithm>

namespace oracle {

using namespace paulivar;

bool fast_mode = false;

Eigen::Matrix2cd letter_matrix(char letter) {
  Eigen::Matrix2cd m;
  const std::complex<double> i(0.0, 1.0);
  switch (letter) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, -i, i, 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::runtime_error("bad letter");
  }
  return m;
}

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
  // Qubit 0 is the most significant index bit, so its factor must end up
  // outermost in the Kronecker product: process letters right to left.
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t i = p.num_qubits(); i-- > 0;) {
    const Eigen::Matrix2cd next = letter_matrix(p.letter(i));
    Eigen::MatrixXcd grown(result.rows() * 2, result.cols() * 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        grown.block(r * result.rows(), c * result.cols(), result.rows(),
                    result.cols()) = next(r, c) * result;
      }
    }
    result = std::move(grown);
  }
  return result;
}

Eigen::MatrixXcd dense_pauli_sum(const PauliSum& o) {
  const auto dim = std::int64_t{1} << o.num_qubits();
  Eigen::MatrixXcd m =
      o.identity_offset() * Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& t : o.terms()) {
    m += t.coefficient * dense_pauli(t.word);
  }
  return m;
}

std::vector<std::vector<std::size_t>> naive_maximal_cliques(
    const CommutationGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::size_t>> cliques;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask & (std::uint64_t{1} << v)) members.push_back(v);
    }
    bool clique = true;
    for (std::size_t a = 0; a < members.size() && clique; ++a) {
      for (std::size_t b = a + 1; b < members.size() && clique; ++b) {
        clique = g.adjacent(members[a], members[b]);
      }
    }
    if (!clique) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (mask & (std::uint64_t{1} << v)) continue;
      bool extends = true;
      for (std::size_t m : members) {
        if (!g.adjacent(v, m)) {
          extends = false;
          break;
        }
      }
      maximal = !extends;
    }
    if (maximal) cliques.push_back(std::move(members));
  }
  return cliques;
}

std::vector<JointOutcome> dense_joint_outcomes(
    const StateVector& psi, const std::vector<PauliString>& words) {
  const auto dim = psi.size();
  std::vector<JointOutcome> outcomes;
  const std::size_t k = words.size();
  std::vector<Eigen::MatrixXcd> dense;
  dense.reserve(k);
  for (const auto& w : words) dense.push_back(dense_pauli(w));
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Eigen::VectorXcd projected = psi;
    std::vector<int> signs(k);
    for (std::size_t j = 0; j < k; ++j) {
      const int sign = (mask & (std::uint64_t{1} << j)) ? -1 : 1;
      signs[j] = sign;
      projected =
          0.5 * (identity + static_cast<double>(sign) * dense[j]) * projected;
    }
    const double prob = projected.squaredNorm();
    if (prob > 1e-15) outcomes.push_back({std::move(signs), prob});
  }
  return outcomes;
}

double bf_ht_variance(const GroupCover& cover, const Distribution& pi,
                      const PauliSum& o, const StateVector& psi) {
  // E[estimate | G, outcome] = sum_{P in G} c_P s_P / pi_P; average the
  // first and second moments over groups and outcomes.
  double first = 0.0, second = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (pi.pi_group(g) == 0.0) continue;
    std::vector<PauliString> words;
    for (std::size_t v : cover.groups()[g]) words.push_back(o.terms()[v].word);
    for (const auto& outcome : dense_joint_outcomes(psi, words)) {
      double value = 0.0;
      for (std::size_t j = 0; j < cover.groups()[g].size(); ++j) {
        const std::size_t v = cover.groups()[g][j];
        value += o.terms()[v].coefficient * outcome.signs[j] /
                 pi.pi_term(v);
      }
      first += pi.pi_group(g) * outcome.probability * value;
      second += pi.pi_group(g) * outcome.probability * value * value;
    }
  }
  return second - first * first;
}

double bf_det_variance(const GroupCover& cover, const Allocation& alloc,
                       const PauliSum& o, const StateVector& psi) {
  // Independent draws: total variance is the sum over groups of
  // M_G * Var(per-draw contribution of that group).
  double total = 0.0;
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (alloc.count(g) == 0) continue;
    std::vector<PauliString> words;
    for (std::size_t v : cover.groups()[g]) words.push_back(o.terms()[v].word);
    double first = 0.0, second = 0.0;
    for (const auto& outcome : dense_joint_outcomes(psi, words)) {
      double value = 0.0;
      for (std::size_t j = 0; j < cover.groups()[g].size(); ++j) {
        const std::size_t v = cover.groups()[g][j];
        value += o.terms()[v].coefficient * outcome.signs[j] /
                 static_cast<double>(alloc.term_count(v));
      }
      first += outcome.probability * value;
      second += outcome.probability * value * value;
    }
    total += static_cast<double>(alloc.count(g)) * (second - first * first);
  }
  return total;
}

double bf_det_mean(const GroupCover& cover, const Allocation& alloc,
                   const PauliSum& o, const StateVector& psi) {
  double mean = o.identity_offset();
  for (std::size_t g = 0; g < cover.num_groups(); ++g) {
    if (alloc.count(g) == 0) continue;
    std::vector<PauliString> words;
    for (std::size_t v : cover.groups()[g]) words.push_back(o.terms()[v].word);
    for (const auto& outcome : dense_joint_outcomes(psi, words)) {
      double value = 0.0;
      for (std::size_t j = 0; j < cover.groups()[g].size(); ++j) {
        const std::size_t v = cover.groups()[g][j];
        value += o.terms()[v].coefficient * outcome.signs[j] /
                 static_cast<double>(alloc.term_count(v));
      }
      mean += static_cast<double>(alloc.count(g)) * outcome.probability *
              value;
    }
  }
  return mean;
}

PauliSum random_pauli_sum(std::size_t n, std::size_t num_terms,
                          std::uint64_t seed) {
  RandomSource rng(seed);
  // Only 4^n - 1 distinct non-identity words exist.
  const std::uint64_t distinct = (std::uint64_t{1} << (2 * n)) - 1;
  num_terms = std::min<std::uint64_t>(num_terms, distinct);
  std::vector<PauliSum::Term> terms;
  std::vector<PauliString> seen;
  while (terms.size() < num_terms) {
    std::string word(n, 'I');
    for (auto& c : word) {
      c = "IXYZ"[rng.next_below(4)];
    }
    PauliString p = PauliString::from_word(word);
    if (p.is_identity()) continue;
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    double coeff = 2.0 * rng.next_double() - 1.0;
    if (std::abs(coeff) < 1e-3) coeff = coeff < 0 ? -1e-3 : 1e-3;
    terms.push_back({std::move(p), coeff});
  }
  return PauliSum(n, std::move(terms), 0.2);
}

GroupCover random_cover(const CommutationGraph& g, std::size_t max_groups,
                        std::uint64_t seed) {
  RandomSource rng(seed);
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> covered(n, false);
  std::size_t num_covered = 0;
  while (num_covered < n || groups.size() < 1) {
    // Seed with a random uncovered vertex (or any vertex once covered).
    std::size_t seed_vertex;
    if (num_covered < n) {
      do {
        seed_vertex = rng.next_below(n);
      } while (covered[seed_vertex]);
    } else {
      seed_vertex = rng.next_below(n);
    }
    std::vector<std::size_t> group{seed_vertex};
    // Grow randomly.
    for (std::size_t v = 0; v < n; ++v) {
      if (v == seed_vertex) continue;
      if (rng.next_double() < 0.6 && g.adjacent_to_all(v, group)) {
        group.push_back(v);
      }
    }
    for (std::size_t v : group) {
      if (!covered[v]) {
        covered[v] = true;
        ++num_covered;
      }
    }
    groups.push_back(std::move(group));
    if (groups.size() >= max_groups && num_covered < n) {
      // Top up with singletons to guarantee coverage.
      for (std::size_t v = 0; v < n; ++v) {
        if (!covered[v]) {
          groups.push_back({v});
          covered[v] = true;
          ++num_covered;
        }
      }
    }
  }
  return GroupCover(g.mode(), n, std::move(groups), "random");
}

}  // namespace oracle
