#pragma once

// Independent test oracles. Everything here recomputes quantities from
// first principles (dense matrices, exhaustive enumeration) and must stay
// independent of the library code paths it checks.

#include <Eigen/Dense>
#include <vector>

#include "paulivar/allocation.hpp"
#include "paulivar/cover.hpp"
#include "paulivar/pauli.hpp"
#include "paulivar/rng.hpp"
#include "paulivar/state.hpp"

namespace oracle {

extern bool fast_mode;  // set by --fast; shrinks randomized sweeps

Eigen::Matrix2cd letter_matrix(char letter);
Eigen::MatrixXcd dense_pauli(const paulivar::PauliString& p);
Eigen::MatrixXcd dense_pauli_sum(const paulivar::PauliSum& o);

/// Exhaustive maximal-clique listing by checking every vertex subset.
std::vector<std::vector<std::size_t>> naive_maximal_cliques(
    const paulivar::CommutationGraph& g);

struct JointOutcome {
  std::vector<int> signs;
  double probability;
};

/// Joint outcome distribution of measuring `words` simultaneously, computed
/// with dense projector products (I +- P)/2.
std::vector<JointOutcome> dense_joint_outcomes(
    const paulivar::StateVector& psi,
    const std::vector<paulivar::PauliString>& words);

/// One-shot Horvitz-Thompson variance by total expectation over every
/// (group, joint outcome) pair with exact Born probabilities.
double bf_ht_variance(const paulivar::GroupCover& cover,
                      const paulivar::Distribution& pi,
                      const paulivar::PauliSum& o,
                      const paulivar::StateVector& psi);

/// Deterministic-estimator variance by summing per-draw contributions over
/// exact joint outcome distributions (draws are independent).
double bf_det_variance(const paulivar::GroupCover& cover,
                       const paulivar::Allocation& alloc,
                       const paulivar::PauliSum& o,
                       const paulivar::StateVector& psi);

/// Expected value of the (possibly biased) deterministic estimator.
double bf_det_mean(const paulivar::GroupCover& cover,
                   const paulivar::Allocation& alloc,
                   const paulivar::PauliSum& o,
                   const paulivar::StateVector& psi);

/// Random Pauli sum: `num_terms` distinct non-identity words on n qubits
/// with coefficients in [-1, 1] \ {0}.
paulivar::PauliSum random_pauli_sum(std::size_t n, std::size_t num_terms,
                                    std::uint64_t seed);

/// Random cover of the graph by up to `max_groups` cliques grown greedily
/// from random seeds (always covers every vertex; may overlap).
paulivar::GroupCover random_cover(const paulivar::CommutationGraph& g,
                                  std::size_t max_groups, std::uint64_t seed);

}  // namespace oracle
