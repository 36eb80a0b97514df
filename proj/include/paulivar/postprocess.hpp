#pragma once

#include <string_view>
#include <vector>

#include "paulivar/cover.hpp"
#include "paulivar/graph.hpp"
#include "paulivar/pauli.hpp"

namespace paulivar {

/// Extends every group of `cover` to a maximal clique of `g`: vertices in
/// ascending-degree order are each added to every group whose union with
/// them stays a clique. Groups that end up identical are merged with summed
/// multiplicities. The output cover never loses a vertex and every group is
/// maximal relative to the full vertex set.
GroupCover maximalize(const GroupCover& cover, const CommutationGraph& g);

/// Maximalizes a qubit-wise-commutation cover inside the full-commutation
/// graph on the same vertex list, trading Clifford measurement circuits for
/// larger groups. The result carries FC mode.
GroupCover cliffordize(const GroupCover& qwc_cover,
                       const CommutationGraph& fc_graph);

/// A measurement schedule imported from an external generator: each line of
/// the source text is a full-length basis setting over {X,Y,Z} and maps to
/// the group of all observable terms it measures. Duplicate settings merge
/// with accumulated multiplicity; `cover` may leave terms uncovered.
struct ImportedSchedule {
  GroupCover cover;
  /// Distinct settings, aligned with cover.groups().
  std::vector<std::string> settings;
  /// Group index of each original schedule line, in order. Drives
  /// prefix-truncated evaluation of partial schedules.
  std::vector<std::size_t> setting_order;
  /// Groups that measure no term of the observable (they consume shots but
  /// yield no information).
  std::vector<std::size_t> empty_groups;
  /// Terms no setting measures.
  std::vector<std::size_t> uncovered_vertices;
};

/// Parses a schedule (one setting per line, '#' comments) against the
/// observable. Settings must have exactly n letters from {X,Y,Z}; a term P
/// is measured by a setting s when every letter of P is the identity or
/// equals the letter of s.
ImportedSchedule import_schedule(std::string_view text, const PauliSum& o);

}  // namespace paulivar
