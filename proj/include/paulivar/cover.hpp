#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "paulivar/graph.hpp"

namespace paulivar {

/// A collection of groups (cliques of a commutation graph, possibly
/// overlapping) identified by vertex indices into the graph that produced
/// them. Grouping algorithms always emit full covers; imported measurement
/// schedules may leave vertices uncovered and may carry per-group
/// multiplicities (shot counts of the source schedule).
class GroupCover {
 public:
  GroupCover(CommutationMode mode, std::size_t num_vertices,
             std::vector<std::vector<std::size_t>> groups,
             std::string algorithm, std::string params = {},
             std::vector<std::size_t> multiplicities = {});

  CommutationMode mode() const { return mode_; }
  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<std::vector<std::size_t>>& groups() const {
    return groups_;
  }
  std::size_t num_groups() const { return groups_.size(); }

  /// Indices of the groups containing vertex `v`.
  const std::vector<std::size_t>& membership(std::size_t v) const {
    return membership_[v];
  }
  bool is_partition() const { return is_partition_; }
  /// True when every vertex belongs to at least one group.
  bool covers_all_vertices() const { return covered_count_ == num_vertices_; }
  std::size_t num_covered() const { return covered_count_; }

  const std::string& algorithm() const { return algorithm_; }
  const std::string& params() const { return params_; }

  std::size_t multiplicity(std::size_t group) const {
    return multiplicities_.empty() ? 1 : multiplicities_[group];
  }
  const std::vector<std::size_t>& multiplicities() const {
    return multiplicities_;
  }

 private:
  CommutationMode mode_;
  std::size_t num_vertices_;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::vector<std::size_t>> membership_;
  std::vector<std::size_t> multiplicities_;
  std::string algorithm_;
  std::string params_;
  bool is_partition_ = false;
  std::size_t covered_count_ = 0;
};

/// Checks that every group of `cover` is a clique in `g` (and, when
/// `require_coverage`, that every vertex is covered). Throws
/// PreconditionError on violation.
void validate_cover(const GroupCover& cover, const CommutationGraph& g,
                    bool require_coverage = true);

/// Greedy partition: vertices in ascending-degree order each join the first
/// existing group they are adjacent to in full, else open a new group.
GroupCover ldf_cover(const CommutationGraph& g);

/// Recursive-largest-first partition. Each group is seeded by the uncovered
/// vertex of largest complement degree within the uncovered subgraph and
/// extended by the compatible vertex with the most complement-graph
/// neighbours among the vertices excluded from the current group. Ties by
/// input order throughout.
GroupCover rlf_cover(const CommutationGraph& g);

/// Classic greedy set cover over a complete list of maximal cliques: repeat
/// picking the clique covering the most uncovered vertices (listing order on
/// ties). Refuses truncated clique sets.
GroupCover greedy_set_cover(const CliqueSet& cliques,
                            const CommutationGraph& g);

struct ExactSetCoverResult {
  GroupCover cover;
  bool optimal;
};

/// Branch-and-bound minimum set cover over the given cliques. `optimal` is
/// true iff the search space was exhausted within the time limit; otherwise
/// the best incumbent found so far is returned.
ExactSetCoverResult exact_set_cover(
    const CliqueSet& cliques, const CommutationGraph& g,
    std::chrono::duration<double> time_limit = std::chrono::seconds(60));

enum class PricingMode { Greedy, Exact };

/// Column generation for the covering LP: starting from singleton columns,
/// alternately solve the restricted LP relaxation (self-contained primal
/// simplex) and price a new column by solving a maximum-weight-clique
/// problem on the LP duals. Stops when the priced clique is already present
/// or the budget runs out, then solves the restricted integer problem by
/// exact_set_cover over the generated columns.
GroupCover column_generation_cover(
    const CommutationGraph& g, PricingMode pricing = PricingMode::Exact,
    std::chrono::duration<double> time_budget = std::chrono::seconds(60));

/// Greedy maximum-weight clique: repeatedly add the compatible vertex with
/// the highest degree*weight score (lowest index on ties) until the clique
/// is maximal.
std::vector<std::size_t> max_weight_clique_greedy(
    const CommutationGraph& g, const std::vector<double>& weights);

/// Exact maximum-weight clique by branch and bound with the residual weight
/// sum as upper bound. Returns the first maximum found in deterministic
/// order; stops early (returning the incumbent) past the deadline.
std::vector<std::size_t> max_weight_clique_exact(
    const CommutationGraph& g, const std::vector<double>& weights,
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

/// Solves min sum(x) s.t. sum_{C : v in C} x_C >= 1, x >= 0 by primal
/// simplex with Bland's rule and returns the dual value per vertex from the
/// final basis. Exposed for testing; `columns` must cover every vertex.
std::vector<double> covering_lp_duals(
    const std::vector<std::vector<std::size_t>>& columns,
    std::size_t num_vertices);

}  // namespace paulivar
