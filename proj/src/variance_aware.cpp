#include "paulivar/variance_aware.hpp"

#include <cmath>
#include <limits>

namespace paulivar {

double variance_proxy(const std::vector<std::vector<std::size_t>>& groups,
                      const std::vector<double>& coefficients) {
  std::vector<bool> seen(coefficients.size(), false);
  double total = 0.0;
  for (const auto& group : groups) {
    double sum_sq = 0.0;
    for (std::size_t v : group) {
      if (seen[v]) {
        throw PreconditionError("variance_proxy requires disjoint groups");
      }
      seen[v] = true;
      sum_sq += coefficients[v] * coefficients[v];
    }
    total += std::sqrt(sum_sq);
  }
  return total * total;
}

namespace {

std::vector<double> squared_coefficients(const PauliSum& o) {
  std::vector<double> sq(o.num_terms());
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    sq[v] = o.terms()[v].coefficient * o.terms()[v].coefficient;
  }
  return sq;
}

// Book-keeping for the greedy proxy minimizers: per-group sums of squared
// coefficients, and the running sum of group l2 norms. Placing vertex v
// into group j changes the l2 sum by sqrt(S_j + c_v^2) - sqrt(S_j); a new
// singleton adds |c_v|. Minimizing the proxy (sum of l2 norms squared) is
// the same as minimizing the l2 sum itself.
struct ProxyState {
  std::vector<double> group_sum_sq;
  double l2_sum = 0.0;

  double place_cost(std::size_t group, double c_sq) const {
    return std::sqrt(group_sum_sq[group] + c_sq) -
           std::sqrt(group_sum_sq[group]);
  }
  void place(std::size_t group, double c_sq) {
    l2_sum += place_cost(group, c_sq);
    group_sum_sq[group] += c_sq;
  }
  std::size_t open_group(double c_sq) {
    group_sum_sq.push_back(c_sq);
    l2_sum += std::sqrt(c_sq);
    return group_sum_sq.size() - 1;
  }
};

}  // namespace

GroupCover ldvf_cover(const CommutationGraph& g, const PauliSum& o) {
  if (g.num_vertices() != o.num_terms()) {
    throw PreconditionError("graph does not index this observable");
  }
  const std::vector<double> c_sq = squared_coefficients(o);
  std::vector<std::vector<std::size_t>> groups;
  ProxyState proxy;

  for (std::size_t v : degree_order(g)) {
    std::size_t best_group = groups.size();  // sentinel: new singleton
    double best_cost = std::sqrt(c_sq[v]);
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (!g.adjacent_to_all(v, groups[j])) continue;
      const double cost = proxy.place_cost(j, c_sq[v]);
      if (cost < best_cost) {
        best_cost = cost;
        best_group = j;
      }
    }
    if (best_group == groups.size()) {
      groups.push_back({v});
      proxy.open_group(c_sq[v]);
    } else {
      groups[best_group].push_back(v);
      proxy.place(best_group, c_sq[v]);
    }
  }
  return GroupCover(g.mode(), g.num_vertices(), std::move(groups), "ldvf");
}

GroupCover lvf_cover(const CommutationGraph& g, const PauliSum& o) {
  if (g.num_vertices() != o.num_terms()) {
    throw PreconditionError("graph does not index this observable");
  }
  const std::vector<double> c_sq = squared_coefficients(o);
  const std::vector<std::size_t> order = degree_order(g);
  std::vector<bool> placed(g.num_vertices(), false);
  std::size_t remaining = g.num_vertices();
  std::vector<std::vector<std::size_t>> groups;
  ProxyState proxy;

  while (remaining > 0) {
    std::size_t best_vertex = g.num_vertices();
    std::size_t best_group = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t v : order) {
      if (placed[v]) continue;
      for (std::size_t j = 0; j < groups.size(); ++j) {
        if (!g.adjacent_to_all(v, groups[j])) continue;
        const double cost = proxy.place_cost(j, c_sq[v]);
        if (cost < best_cost) {
          best_cost = cost;
          best_vertex = v;
          best_group = j;
        }
      }
      const double new_cost = std::sqrt(c_sq[v]);
      if (new_cost < best_cost) {
        best_cost = new_cost;
        best_vertex = v;
        best_group = groups.size();
      }
    }
    if (best_group == groups.size()) {
      groups.push_back({best_vertex});
      proxy.open_group(c_sq[best_vertex]);
    } else {
      groups[best_group].push_back(best_vertex);
      proxy.place(best_group, c_sq[best_vertex]);
    }
    placed[best_vertex] = true;
    --remaining;
  }
  return GroupCover(g.mode(), g.num_vertices(), std::move(groups), "lvf");
}

}  // namespace paulivar
