#include "paulivar/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace paulivar {

const char* to_string(CommutationMode mode) {
  return mode == CommutationMode::QWC ? "qwc" : "fc";
}

CommutationMode commutation_mode_from_string(std::string_view name) {
  if (name == "qwc" || name == "QWC") return CommutationMode::QWC;
  if (name == "fc" || name == "FC") return CommutationMode::FC;
  throw ParseError("unknown commutation mode '" + std::string(name) + "'");
}

CommutationGraph::CommutationGraph(CommutationMode mode,
                                   std::vector<PauliString> vertices)
    : mode_(mode), vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  row_words_ = (n + 63) / 64;
  adjacency_.assign(n * row_words_, 0);
  degrees_.assign(n, 0);
  const bool qwc = (mode_ == CommutationMode::QWC);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool edge = qwc ? qwc_commutes(vertices_[i], vertices_[j])
                            : fc_commutes(vertices_[i], vertices_[j]);
      if (edge) {
        adjacency_[i * row_words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
        adjacency_[j * row_words_ + (i >> 6)] |= std::uint64_t{1} << (i & 63);
        ++degrees_[i];
        ++degrees_[j];
        ++num_edges_;
      }
    }
  }
}

bool CommutationGraph::adjacent_to_all(
    std::size_t v, std::span<const std::size_t> members) const {
  const auto r = row(v);
  for (std::size_t m : members) {
    if (!((r[m >> 6] >> (m & 63)) & 1u)) return false;
  }
  return true;
}

CommutationGraph build_graph(const PauliSum& o, CommutationMode mode) {
  std::vector<PauliString> vertices;
  vertices.reserve(o.num_terms());
  for (const auto& t : o.terms()) vertices.push_back(t.word);
  return CommutationGraph(mode, std::move(vertices));
}

GraphCounts graph_counts_with_identity(const PauliSum& o,
                                       CommutationMode mode) {
  const CommutationGraph g = build_graph(o, mode);
  // The identity commutes with every string under both modes.
  return {g.num_vertices() + 1, g.num_edges() + g.num_vertices()};
}

namespace {

using Words = std::vector<std::uint64_t>;

struct BronKerbosch {
  const CommutationGraph& g;
  std::size_t cap;
  std::size_t words;
  CliqueSet out;
  std::vector<std::size_t> current;

  BronKerbosch(const CommutationGraph& graph, std::size_t clique_cap)
      : g(graph), cap(clique_cap), words(graph.row_words()) {}

  static std::size_t count(const Words& w) {
    std::size_t c = 0;
    for (auto v : w) c += std::popcount(v);
    return c;
  }

  std::size_t intersection_count(const Words& w, std::size_t v) const {
    const auto r = g.row(v);
    std::size_t c = 0;
    for (std::size_t k = 0; k < words; ++k) c += std::popcount(w[k] & r[k]);
    return c;
  }

  // Returns false when the cap was hit and enumeration should stop.
  bool expand(Words candidates, Words excluded) {
    if (count(candidates) == 0 && count(excluded) == 0) {
      if (out.cliques.size() == cap) {
        out.truncated = true;
        return false;
      }
      out.cliques.push_back(current);
      return true;
    }
    // Pivot: vertex of P|X covering the most candidates, lowest index wins.
    std::size_t pivot = static_cast<std::size_t>(-1);
    std::size_t best = 0;
    bool have_pivot = false;
    for (std::size_t k = 0; k < words; ++k) {
      std::uint64_t bits = candidates[k] | excluded[k];
      while (bits) {
        const std::size_t v = k * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        const std::size_t c = intersection_count(candidates, v);
        if (!have_pivot || c > best) {
          have_pivot = true;
          best = c;
          pivot = v;
        }
      }
    }
    const auto pivot_row = g.row(pivot);
    for (std::size_t k = 0; k < words; ++k) {
      std::uint64_t bits = candidates[k] & ~pivot_row[k];
      while (bits) {
        const std::size_t v = k * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        const auto r = g.row(v);
        Words next_candidates(words), next_excluded(words);
        for (std::size_t w = 0; w < words; ++w) {
          next_candidates[w] = candidates[w] & r[w];
          next_excluded[w] = excluded[w] & r[w];
        }
        current.push_back(v);
        const bool keep_going =
            expand(std::move(next_candidates), std::move(next_excluded));
        current.pop_back();
        if (!keep_going) return false;
        candidates[k] &= ~(std::uint64_t{1} << (v & 63));
        excluded[v >> 6] |= std::uint64_t{1} << (v & 63);
      }
    }
    return true;
  }
};

}  // namespace

CliqueSet enumerate_maximal_cliques(const CommutationGraph& g,
                                    std::size_t cap) {
  if (cap < 1) throw PreconditionError("clique cap must be positive");
  BronKerbosch bk(g, cap);
  const std::size_t n = g.num_vertices();
  Words candidates(g.row_words(), 0);
  for (std::size_t v = 0; v < n; ++v) {
    candidates[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  if (n > 0) bk.expand(std::move(candidates), Words(g.row_words(), 0));
  return std::move(bk.out);
}

std::vector<std::size_t> degree_order(const CommutationGraph& g) {
  std::vector<std::size_t> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&g](std::size_t a, std::size_t b) {
                     return g.degree(a) < g.degree(b);
                   });
  return order;
}

}  // namespace paulivar
