#include "paulivar/postprocess.hpp"

#include <algorithm>
#include <map>

namespace paulivar {

namespace {

// Merge identical groups (as index sets), summing multiplicities and
// keeping the first occurrence's position and member order.
std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::size_t>>
merge_duplicates(const std::vector<std::vector<std::size_t>>& groups,
                 const std::vector<std::size_t>& multiplicities) {
  std::map<std::vector<std::size_t>, std::size_t> first_index;
  std::vector<std::vector<std::size_t>> merged;
  std::vector<std::size_t> merged_mult;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    std::vector<std::size_t> key = groups[gi];
    std::sort(key.begin(), key.end());
    const std::size_t mult =
        multiplicities.empty() ? 1 : multiplicities[gi];
    auto [it, inserted] =
        first_index.try_emplace(std::move(key), merged.size());
    if (inserted) {
      merged.push_back(groups[gi]);
      merged_mult.push_back(mult);
    } else {
      merged_mult[it->second] += mult;
    }
  }
  return {std::move(merged), std::move(merged_mult)};
}

}  // namespace

GroupCover maximalize(const GroupCover& cover, const CommutationGraph& g) {
  validate_cover(cover, g, /*require_coverage=*/false);
  auto groups = cover.groups();
  for (std::size_t v : degree_order(g)) {
    for (auto& group : groups) {
      if (std::find(group.begin(), group.end(), v) != group.end()) continue;
      if (g.adjacent_to_all(v, group)) group.push_back(v);
    }
  }
  auto [merged, mult] = merge_duplicates(groups, cover.multiplicities());
  const bool trivial_mult =
      std::all_of(mult.begin(), mult.end(),
                  [](std::size_t m) { return m == 1; });
  return GroupCover(g.mode(), g.num_vertices(), std::move(merged),
                    cover.algorithm() + "+maximalize", cover.params(),
                    trivial_mult ? std::vector<std::size_t>{}
                                 : std::move(mult));
}

GroupCover cliffordize(const GroupCover& qwc_cover,
                       const CommutationGraph& fc_graph) {
  if (qwc_cover.mode() != CommutationMode::QWC) {
    throw PreconditionError("cliffordize expects a QWC cover");
  }
  if (fc_graph.mode() != CommutationMode::FC) {
    throw PreconditionError("cliffordize expects the FC graph");
  }
  if (qwc_cover.num_vertices() != fc_graph.num_vertices()) {
    throw PreconditionError(
        "cliffordize: cover and graph have different vertex lists");
  }
  GroupCover grown = maximalize(qwc_cover, fc_graph);
  return GroupCover(CommutationMode::FC, grown.num_vertices(),
                    grown.groups(),
                    qwc_cover.algorithm() + "+cliffordize",
                    qwc_cover.params(), grown.multiplicities());
}

ImportedSchedule import_schedule(std::string_view text, const PauliSum& o) {
  const std::size_t n = o.num_qubits();
  std::vector<std::string> lines;
  std::size_t pos = 0, line_no = 0;
  std::vector<std::size_t> line_numbers;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    lines.emplace_back(line.substr(b, e - b));
    line_numbers.push_back(line_no);
  }

  std::vector<std::string> settings;
  std::vector<std::size_t> multiplicities;
  std::vector<std::size_t> setting_order;
  std::map<std::string, std::size_t> setting_index;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& word = lines[li];
    if (word.size() != n) {
      throw ParseError("setting has " + std::to_string(word.size()) +
                           " letters, expected " + std::to_string(n),
                       line_numbers[li]);
    }
    for (char c : word) {
      if (c != 'X' && c != 'Y' && c != 'Z') {
        throw ParseError(std::string("illegal character '") + c +
                             "' in measurement setting",
                         line_numbers[li]);
      }
    }
    auto [it, inserted] = setting_index.try_emplace(word, settings.size());
    if (inserted) {
      settings.push_back(word);
      multiplicities.push_back(1);
    } else {
      ++multiplicities[it->second];
    }
    setting_order.push_back(it->second);
  }

  std::vector<std::vector<std::size_t>> groups(settings.size());
  for (std::size_t si = 0; si < settings.size(); ++si) {
    for (std::size_t v = 0; v < o.num_terms(); ++v) {
      const PauliString& p = o.terms()[v].word;
      bool measured = true;
      for (std::size_t i = 0; i < n && measured; ++i) {
        const char letter = p.letter(i);
        measured = (letter == 'I' || letter == settings[si][i]);
      }
      if (measured) groups[si].push_back(v);
    }
  }

  ImportedSchedule result{
      GroupCover(CommutationMode::QWC, o.num_terms(), groups, "import", {},
                 std::move(multiplicities)),
      std::move(settings),
      std::move(setting_order),
      {},
      {}};
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (groups[gi].empty()) result.empty_groups.push_back(gi);
  }
  for (std::size_t v = 0; v < o.num_terms(); ++v) {
    if (result.cover.membership(v).empty()) {
      result.uncovered_vertices.push_back(v);
    }
  }
  return result;
}

}  // namespace paulivar
