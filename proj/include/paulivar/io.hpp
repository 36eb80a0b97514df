#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "paulivar/postprocess.hpp"
#include "paulivar/state.hpp"
#include "paulivar/variance.hpp"

namespace paulivar {

inline constexpr int kFormatVersion = 1;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

std::string sha256_hex(std::span<const std::uint8_t> bytes);
/// SHA-256 of the little-endian raw amplitude bytes.
std::string statevector_sha256(const StateVector& psi);

/// Stores the amplitudes as little-endian binary (2^n complex doubles) next
/// to a JSON sidecar `<path>.json` holding {n, sha256}.
void save_statevector(const std::filesystem::path& path,
                      const StateVector& psi);

/// Loads a statevector and verifies size and checksum against the sidecar.
StateVector load_statevector(const std::filesystem::path& path);

/// Cover serialization: groups as lists of Pauli words, plus schedule
/// extras (settings, multiplicities) when they exist.
nlohmann::json cover_to_json(const GroupCover& cover, const PauliSum& o);
GroupCover cover_from_json(const nlohmann::json& doc, const PauliSum& o);

nlohmann::json graph_stats_json(CommutationMode mode, std::size_t vertices,
                                std::size_t edges,
                                std::size_t max_cliques_or_cap,
                                bool clique_count_truncated);

/// CSV emitters (header row + one line per entry).
std::string m_var_curve_csv(std::span<const MVarPoint> points);
std::string estimates_csv(std::span<const double> estimates);
std::string qq_csv(std::span<const std::pair<double, double>> pairs);

/// Structural validation of a JSON document against one of the shipped
/// schema files (a subset of JSON Schema: type, required, properties,
/// items, enum). Throws PreconditionError on mismatch.
void validate_against_schema(const nlohmann::json& doc,
                             const nlohmann::json& schema);

}  // namespace paulivar
