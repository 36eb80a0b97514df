#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "paulivar/pauli.hpp"

namespace paulivar {

enum class CommutationMode { QWC, FC };

const char* to_string(CommutationMode mode);
CommutationMode commutation_mode_from_string(std::string_view name);

/// Undirected graph on the non-identity Pauli strings of an observable, with
/// an edge between every pair that commutes under the chosen mode. Adjacency
/// is stored as packed bit rows so neighbourhood intersections (the hot loop
/// of clique algorithms) are word-parallel.
class CommutationGraph {
 public:
  CommutationGraph(CommutationMode mode, std::vector<PauliString> vertices);

  CommutationMode mode() const { return mode_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  const std::vector<PauliString>& vertices() const { return vertices_; }

  bool adjacent(std::size_t i, std::size_t j) const {
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }
  std::size_t degree(std::size_t i) const { return degrees_[i]; }

  std::span<const std::uint64_t> row(std::size_t i) const {
    return {adjacency_.data() + i * row_words_, row_words_};
  }
  std::size_t row_words() const { return row_words_; }

  /// True iff `v` is adjacent to every vertex in `members`.
  bool adjacent_to_all(std::size_t v,
                       std::span<const std::size_t> members) const;

 private:
  CommutationMode mode_;
  std::vector<PauliString> vertices_;
  std::size_t row_words_ = 0;
  std::vector<std::uint64_t> adjacency_;
  std::vector<std::size_t> degrees_;
  std::size_t num_edges_ = 0;
};

/// Builds the commutation graph of `o` under `mode`. The identity term was
/// stripped at parse time, so it never appears as a vertex.
CommutationGraph build_graph(const PauliSum& o, CommutationMode mode);

struct GraphCounts {
  std::size_t num_vertices;
  std::size_t num_edges;
};

/// Vertex/edge counts with the identity counted as an extra vertex that
/// commutes with everything. This exists only to validate against published
/// graph sizes that include the identity; all grouping runs exclude it.
GraphCounts graph_counts_with_identity(const PauliSum& o,
                                       CommutationMode mode);

struct CliqueSet {
  std::vector<std::vector<std::size_t>> cliques;
  bool truncated = false;
};

/// Bron--Kerbosch enumeration of maximal cliques with pivoting. The pivot is
/// the vertex (among candidates and excluded) covering the most candidates,
/// lowest index on ties, so the emission order is deterministic. Stops with
/// truncated=true once `cap` cliques have been emitted and more remain.
CliqueSet enumerate_maximal_cliques(const CommutationGraph& g,
                                    std::size_t cap = 1000000);

/// Vertices sorted ascending by degree in `g` (equivalently descending by
/// complement degree), stable on ties. This is the processing order of the
/// greedy cover heuristics.
std::vector<std::size_t> degree_order(const CommutationGraph& g);

}  // namespace paulivar
