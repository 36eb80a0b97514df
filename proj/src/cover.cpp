#include "paulivar/cover.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>

namespace paulivar {

GroupCover::GroupCover(CommutationMode mode, std::size_t num_vertices,
                       std::vector<std::vector<std::size_t>> groups,
                       std::string algorithm, std::string params,
                       std::vector<std::size_t> multiplicities)
    : mode_(mode),
      num_vertices_(num_vertices),
      groups_(std::move(groups)),
      multiplicities_(std::move(multiplicities)),
      algorithm_(std::move(algorithm)),
      params_(std::move(params)) {
  if (!multiplicities_.empty() && multiplicities_.size() != groups_.size()) {
    throw PreconditionError("multiplicities do not match group count");
  }
  membership_.assign(num_vertices_, {});
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    for (std::size_t v : groups_[gi]) {
      if (v >= num_vertices_) {
        throw PreconditionError("group vertex index out of range");
      }
      membership_[v].push_back(gi);
    }
  }
  is_partition_ = true;
  for (const auto& m : membership_) {
    if (!m.empty()) ++covered_count_;
    if (m.size() != 1) is_partition_ = false;
  }
}

void validate_cover(const GroupCover& cover, const CommutationGraph& g,
                    bool require_coverage) {
  if (cover.num_vertices() != g.num_vertices()) {
    throw PreconditionError("cover and graph have different vertex counts");
  }
  for (const auto& group : cover.groups()) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (group[a] == group[b]) {
          throw PreconditionError("duplicate vertex inside a group");
        }
        if (!g.adjacent(group[a], group[b])) {
          throw PreconditionError(
              "group is not a clique: " +
              g.vertices()[group[a]].to_string() + " and " +
              g.vertices()[group[b]].to_string() + " do not commute (" +
              to_string(g.mode()) + ")");
        }
      }
    }
  }
  if (require_coverage && !cover.covers_all_vertices()) {
    throw PreconditionError("cover leaves vertices uncovered");
  }
}

GroupCover ldf_cover(const CommutationGraph& g) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t v : degree_order(g)) {
    bool placed = false;
    for (auto& group : groups) {
      if (g.adjacent_to_all(v, group)) {
        group.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({v});
  }
  return GroupCover(g.mode(), g.num_vertices(), std::move(groups), "ldf");
}

GroupCover rlf_cover(const CommutationGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> uncovered(n, true);
  std::size_t remaining = n;
  std::vector<std::vector<std::size_t>> groups;

  while (remaining > 0) {
    // Seed: uncovered vertex of largest complement degree within the
    // uncovered subgraph, i.e. fewest uncovered neighbours in g.
    std::size_t seed = n;
    std::size_t seed_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!uncovered[v]) continue;
      std::size_t d = 0;
      for (std::size_t u = 0; u < n; ++u) {
        if (u != v && uncovered[u] && g.adjacent(v, u)) ++d;
      }
      if (seed == n || d < seed_deg) {
        seed = v;
        seed_deg = d;
      }
    }

    std::vector<std::size_t> group{seed};
    // candidate[v]: uncovered, outside the group, compatible with all of it.
    // wall[v]: uncovered, outside the group, incompatible with some member.
    std::vector<bool> candidate(n, false), wall(n, false);
    for (std::size_t v = 0; v < n; ++v) {
      if (!uncovered[v] || v == seed) continue;
      (g.adjacent(v, seed) ? candidate : wall)[v] = true;
    }
    for (;;) {
      // Leighton's extension rule: among candidates, the vertex with the
      // most complement-graph neighbours inside the wall.
      std::size_t pick = n;
      std::size_t pick_score = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (!candidate[v]) continue;
        std::size_t score = 0;
        for (std::size_t w = 0; w < n; ++w) {
          if (wall[w] && !g.adjacent(v, w)) ++score;
        }
        if (pick == n || score > pick_score) {
          pick = v;
          pick_score = score;
        }
      }
      if (pick == n) break;
      group.push_back(pick);
      candidate[pick] = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (candidate[v] && !g.adjacent(v, pick)) {
          candidate[v] = false;
          wall[v] = true;
        }
      }
    }
    for (std::size_t v : group) {
      uncovered[v] = false;
      --remaining;
    }
    groups.push_back(std::move(group));
  }
  return GroupCover(g.mode(), g.num_vertices(), std::move(groups), "rlf");
}

namespace {

std::vector<std::vector<std::size_t>> greedy_cover_cliques(
    const std::vector<std::vector<std::size_t>>& cliques,
    std::size_t num_vertices) {
  std::vector<bool> covered(num_vertices, false);
  std::size_t num_covered = 0;
  std::vector<std::vector<std::size_t>> chosen;
  while (num_covered < num_vertices) {
    std::size_t best = cliques.size();
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t v : cliques[c]) gain += !covered[v];
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == cliques.size()) {
      throw PreconditionError("cliques do not cover all vertices");
    }
    for (std::size_t v : cliques[best]) {
      if (!covered[v]) {
        covered[v] = true;
        ++num_covered;
      }
    }
    chosen.push_back(cliques[best]);
  }
  return chosen;
}

}  // namespace

GroupCover greedy_set_cover(const CliqueSet& cliques,
                            const CommutationGraph& g) {
  if (cliques.truncated) {
    throw PreconditionError(
        "greedy set cover requires a complete (untruncated) clique list");
  }
  return GroupCover(g.mode(), g.num_vertices(),
                    greedy_cover_cliques(cliques.cliques, g.num_vertices()),
                    "gsc");
}

namespace {

struct SetCoverSearch {
  const std::vector<std::vector<std::size_t>>& cliques;
  std::size_t num_vertices;
  std::vector<std::vector<std::size_t>> covering;  // per vertex
  std::size_t max_clique_size = 1;
  std::chrono::steady_clock::time_point deadline;
  bool timed_out = false;
  std::size_t nodes = 0;

  std::vector<std::size_t> best;
  std::vector<std::size_t> chosen;
  std::vector<int> cover_count;
  std::size_t uncovered;

  SetCoverSearch(const std::vector<std::vector<std::size_t>>& cl,
                 std::size_t nv, std::chrono::steady_clock::time_point dl)
      : cliques(cl), num_vertices(nv), deadline(dl) {
    covering.assign(nv, {});
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      max_clique_size = std::max(max_clique_size, cliques[c].size());
      for (std::size_t v : cliques[c]) covering[v].push_back(c);
    }
    cover_count.assign(nv, 0);
    uncovered = nv;
  }

  void add(std::size_t c) {
    for (std::size_t v : cliques[c]) {
      if (cover_count[v]++ == 0) --uncovered;
    }
    chosen.push_back(c);
  }
  void remove(std::size_t c) {
    for (std::size_t v : cliques[c]) {
      if (--cover_count[v] == 0) ++uncovered;
    }
    chosen.pop_back();
  }

  void search() {
    if (timed_out) return;
    if ((++nodes & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (uncovered == 0) {
      if (chosen.size() < best.size()) best = chosen;
      return;
    }
    const std::size_t lower =
        (uncovered + max_clique_size - 1) / max_clique_size;
    if (chosen.size() + lower >= best.size()) return;
    // Branch on the uncovered vertex with the fewest covering cliques.
    std::size_t branch_vertex = num_vertices;
    std::size_t branch_options = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < num_vertices; ++v) {
      if (cover_count[v] == 0 && covering[v].size() < branch_options) {
        branch_options = covering[v].size();
        branch_vertex = v;
      }
    }
    if (branch_vertex == num_vertices) return;
    for (std::size_t c : covering[branch_vertex]) {
      add(c);
      search();
      remove(c);
      if (timed_out) return;
    }
  }
};

ExactSetCoverResult exact_set_cover_impl(
    const std::vector<std::vector<std::size_t>>& cliques,
    const CommutationGraph& g, std::chrono::duration<double> time_limit,
    const std::string& algorithm, const std::string& params) {
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          time_limit);
  SetCoverSearch search(cliques, g.num_vertices(), deadline);
  // Greedy incumbent; branch and bound can only improve on it.
  const auto greedy = greedy_cover_cliques(cliques, g.num_vertices());
  search.best.resize(greedy.size());
  std::iota(search.best.begin(), search.best.end(), 0);  // placeholder size
  search.search();

  std::vector<std::vector<std::size_t>> groups;
  if (search.best.size() < greedy.size()) {
    for (std::size_t c : search.best) groups.push_back(cliques[c]);
  } else {
    groups = greedy;
  }
  return {GroupCover(g.mode(), g.num_vertices(), std::move(groups), algorithm,
                     params),
          !search.timed_out};
}

}  // namespace

ExactSetCoverResult exact_set_cover(const CliqueSet& cliques,
                                    const CommutationGraph& g,
                                    std::chrono::duration<double> time_limit) {
  if (cliques.truncated) {
    throw PreconditionError(
        "exact set cover requires a complete (untruncated) clique list");
  }
  return exact_set_cover_impl(cliques.cliques, g, time_limit, "ilp", {});
}

std::vector<std::size_t> max_weight_clique_greedy(
    const CommutationGraph& g, const std::vector<double>& weights) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> candidate(n, true);
  std::size_t candidates_left = n;
  std::vector<std::size_t> clique;
  while (candidates_left > 0) {
    std::size_t pick = n;
    double pick_score = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!candidate[v]) continue;
      const double score = static_cast<double>(g.degree(v)) * weights[v];
      if (pick == n || score > pick_score) {
        pick = v;
        pick_score = score;
      }
    }
    clique.push_back(pick);
    candidate[pick] = false;
    --candidates_left;
    for (std::size_t v = 0; v < n; ++v) {
      if (candidate[v] && !g.adjacent(v, pick)) {
        candidate[v] = false;
        --candidates_left;
      }
    }
  }
  return clique;
}

namespace {

struct MaxWeightCliqueSearch {
  const CommutationGraph& g;
  const std::vector<double>& weights;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::vector<std::size_t> best;
  double best_weight = -1.0;
  std::vector<std::size_t> current;
  double current_weight = 0.0;
  std::size_t nodes = 0;
  bool timed_out = false;

  void search(const std::vector<std::size_t>& candidates) {
    if (timed_out) return;
    if (deadline && (++nodes & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *deadline) {
      timed_out = true;
      return;
    }
    if (candidates.empty()) {
      if (current_weight > best_weight) {
        best_weight = current_weight;
        best = current;
      }
      return;
    }
    std::vector<double> suffix(candidates.size() + 1, 0.0);
    for (std::size_t i = candidates.size(); i-- > 0;) {
      suffix[i] = suffix[i + 1] + weights[candidates[i]];
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (current_weight + suffix[i] <= best_weight) return;
      const std::size_t v = candidates[i];
      std::vector<std::size_t> next;
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        if (g.adjacent(v, candidates[j])) next.push_back(candidates[j]);
      }
      current.push_back(v);
      current_weight += weights[v];
      search(next);
      current.pop_back();
      current_weight -= weights[v];
      if (timed_out) return;
    }
  }
};

}  // namespace

std::vector<std::size_t> max_weight_clique_exact(
    const CommutationGraph& g, const std::vector<double>& weights,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
  MaxWeightCliqueSearch search{g, weights, deadline, {}, -1.0, {}, 0.0, 0,
                               false};
  std::vector<std::size_t> all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  search.search(all);
  return search.best;
}

std::vector<double> covering_lp_duals(
    const std::vector<std::vector<std::size_t>>& columns,
    std::size_t num_vertices) {
  // min 1'x  s.t.  A x - s + a = 1,  x, s, a >= 0, with big-M artificials
  // providing the initial basis. Column layout: [x | s | a].
  const std::size_t m = columns.size();
  const std::size_t v = num_vertices;
  const std::size_t total = m + 2 * v;
  const double big_m = 1e7;

  Eigen::MatrixXd dense_columns = Eigen::MatrixXd::Zero(v, total);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  for (std::size_t c = 0; c < m; ++c) {
    cost[c] = 1.0;
    for (std::size_t row : columns[c]) dense_columns(row, c) = 1.0;
  }
  for (std::size_t r = 0; r < v; ++r) {
    dense_columns(r, m + r) = -1.0;            // slack
    dense_columns(r, m + v + r) = 1.0;         // artificial
    cost[m + v + r] = big_m;
  }

  std::vector<std::size_t> basis(v);
  for (std::size_t r = 0; r < v; ++r) basis[r] = m + v + r;
  Eigen::MatrixXd basis_inverse = Eigen::MatrixXd::Identity(v, v);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(v);
  Eigen::VectorXd basic_values = rhs;

  const std::size_t max_iterations = 200 * (total + 10);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd basic_cost(v);
    for (std::size_t r = 0; r < v; ++r) basic_cost[r] = cost[basis[r]];
    Eigen::VectorXd duals = basis_inverse.transpose() * basic_cost;

    // Bland's rule: first column with negative reduced cost.
    std::size_t entering = total;
    for (std::size_t c = 0; c < total; ++c) {
      const double reduced = cost[c] - duals.dot(dense_columns.col(c));
      if (reduced < -1e-9) {
        entering = c;
        break;
      }
    }
    if (entering == total) {
      std::vector<double> out(v);
      for (std::size_t r = 0; r < v; ++r) out[r] = std::max(0.0, duals[r]);
      return out;
    }

    const Eigen::VectorXd direction =
        basis_inverse * dense_columns.col(entering);
    std::size_t leaving = v;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < v; ++r) {
      if (direction[r] > 1e-11) {
        const double ratio = basic_values[r] / direction[r];
        if (leaving == v || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && basis[r] < basis[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
    }
    if (leaving == v) {
      throw InternalError("covering LP is unbounded");
    }
    // Pivot update of the basis inverse and the basic solution.
    const double pivot = direction[leaving];
    for (std::size_t r = 0; r < v; ++r) {
      if (r == leaving) continue;
      const double factor = direction[r] / pivot;
      if (factor != 0.0) {
        basis_inverse.row(r) -= factor * basis_inverse.row(leaving);
        basic_values[r] -= factor * basic_values[leaving];
      }
    }
    basis_inverse.row(leaving) /= pivot;
    basic_values[leaving] /= pivot;
    basis[leaving] = entering;
  }
  throw InternalError("covering LP did not converge");
}

GroupCover column_generation_cover(const CommutationGraph& g,
                                   PricingMode pricing,
                                   std::chrono::duration<double> time_budget) {
  const auto start = std::chrono::steady_clock::now();
  const auto pricing_deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  time_budget / 2);
  const std::size_t n = g.num_vertices();

  std::vector<std::vector<std::size_t>> columns;
  std::map<std::vector<std::size_t>, bool> seen;
  for (std::size_t vtx = 0; vtx < n; ++vtx) {
    columns.push_back({vtx});
    seen.emplace(columns.back(), true);
  }

  while (std::chrono::steady_clock::now() < pricing_deadline) {
    const std::vector<double> duals = covering_lp_duals(columns, n);
    std::vector<std::size_t> clique =
        pricing == PricingMode::Greedy
            ? max_weight_clique_greedy(g, duals)
            : max_weight_clique_exact(g, duals, pricing_deadline);
    std::sort(clique.begin(), clique.end());
    if (clique.empty() || seen.count(clique)) break;
    seen.emplace(clique, true);
    columns.push_back(std::move(clique));
  }

  const auto elapsed = std::chrono::steady_clock::now() - start;
  auto remaining = std::chrono::duration_cast<std::chrono::duration<double>>(
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          time_budget) -
      elapsed);
  remaining = std::max(remaining, std::chrono::duration<double>(
                                      time_budget.count() / 2));
  auto result = exact_set_cover_impl(
      columns, g, remaining, "cg",
      pricing == PricingMode::Greedy ? "pricing=greedy" : "pricing=exact");
  return std::move(result.cover);
}

}  // namespace paulivar
