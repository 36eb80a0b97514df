#pragma once

#include "paulivar/cover.hpp"
#include "paulivar/graph.hpp"
#include "paulivar/pauli.hpp"

namespace paulivar {

/// Prior variance proxy of a disjoint grouping: (sum_G l2(G))^2 with
/// l2(G) = sqrt(sum_{P in G} c_P^2). This is the variance of the
/// group-sampled estimator under the coefficient-l2 distribution and a
/// non-informative state prior, which is what the variance-aware greedy
/// heuristics minimize. Throws PreconditionError when groups overlap.
double variance_proxy(const std::vector<std::vector<std::size_t>>& groups,
                      const std::vector<double>& coefficients);

/// "Lowest degree, then variance, first": vertices in ascending-degree
/// order; each vertex joins the compatible placement (existing group in
/// creation order, else a new singleton, evaluated last) that minimizes the
/// variance proxy. Draws keep the placement evaluated first.
GroupCover ldvf_cover(const CommutationGraph& g, const PauliSum& o);

/// "Lowest variance first": every round scans all unplaced vertices times
/// all compatible placements and commits the single placement of minimal
/// proxy. Evaluation order (vertices ascending by degree, groups in creation
/// order, new group last) breaks draws.
GroupCover lvf_cover(const CommutationGraph& g, const PauliSum& o);

}  // namespace paulivar
