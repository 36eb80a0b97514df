#include "paulivar/io.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace paulivar {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write file: " + path.string());
  }
  out << content;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

namespace {

// Compact SHA-256 (FIPS 180-4).
struct Sha256 {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                                    0xa54ff53a, 0x510e527f, 0x9b05688c,
                                    0x1f83d9ab, 0x5be0cd19};
  std::array<std::uint8_t, 64> block{};
  std::size_t block_len = 0;
  std::uint64_t total_bits = 0;

  static std::uint32_t rotr(std::uint32_t v, int s) {
    return (v >> s) | (v << (32 - s));
  }

  void process(const std::uint8_t* p) {
    static constexpr std::uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b,
        0x59f111f1, 0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01,
        0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7,
        0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
        0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152,
        0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
        0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819,
        0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116, 0x1e376c08,
        0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f,
        0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
      w[i] = (std::uint32_t(p[4 * i]) << 24) |
             (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 =
          rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 =
          rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }

  void append(const std::uint8_t* data, std::size_t len) {
    while (len > 0) {
      const std::size_t take = std::min(len, block.size() - block_len);
      std::memcpy(block.data() + block_len, data, take);
      block_len += take;
      data += take;
      len -= take;
      if (block_len == block.size()) {
        process(block.data());
        block_len = 0;
      }
    }
  }

  void update(const std::uint8_t* data, std::size_t len) {
    total_bits += std::uint64_t(len) * 8;
    append(data, len);
  }

  std::string finish() {
    const std::uint64_t bits = total_bits;
    const std::uint8_t pad = 0x80;
    append(&pad, 1);
    const std::uint8_t zero = 0;
    while (block_len != 56) append(&zero, 1);
    std::uint8_t length_bytes[8];
    for (int i = 0; i < 8; ++i) {
      length_bytes[i] = std::uint8_t(bits >> (56 - 8 * i));
    }
    append(length_bytes, 8);
    char out[65];
    for (int i = 0; i < 8; ++i) {
      std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    }
    return std::string(out, 64);
  }
};

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  Sha256 hasher;
  hasher.update(bytes.data(), bytes.size());
  return hasher.finish();
}

std::string statevector_sha256(const StateVector& psi) {
  return sha256_hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(psi.data()),
      sizeof(std::complex<double>) * psi.size()));
}

void save_statevector(const std::filesystem::path& path,
                      const StateVector& psi) {
  const std::size_t n = num_qubits_of(psi);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write statevector: " + path.string());
  out.write(reinterpret_cast<const char*>(psi.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                         psi.size()));
  out.close();
  nlohmann::json sidecar{{"n", n}, {"sha256", statevector_sha256(psi)}};
  write_text_file(path.string() + ".json", sidecar.dump(2) + "\n");
}

StateVector load_statevector(const std::filesystem::path& path) {
  const nlohmann::json sidecar =
      nlohmann::json::parse(read_text_file(path.string() + ".json"));
  const std::size_t n = sidecar.at("n").get<std::size_t>();
  if (n > 30) {
    throw ParseError("statevector sidecar claims more than 30 qubits");
  }
  const std::string expected = sidecar.at("sha256").get<std::string>();

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open statevector: " + path.string());
  StateVector psi(std::int64_t{1} << n);
  in.read(reinterpret_cast<char*>(psi.data()),
          static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                       psi.size()));
  if (in.gcount() !=
      static_cast<std::streamsize>(sizeof(std::complex<double>) * psi.size())) {
    throw ParseError("statevector file is shorter than 2^n amplitudes");
  }
  if (statevector_sha256(psi) != expected) {
    throw ParseError("statevector checksum mismatch");
  }
  return psi;
}

nlohmann::json cover_to_json(const GroupCover& cover, const PauliSum& o) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& group : cover.groups()) {
    nlohmann::json words = nlohmann::json::array();
    for (std::size_t v : group) {
      words.push_back(o.terms()[v].word.to_string());
    }
    groups.push_back(std::move(words));
  }
  nlohmann::json doc{{"format_version", kFormatVersion},
                     {"mode", to_string(cover.mode())},
                     {"algorithm", cover.algorithm()},
                     {"params", cover.params()},
                     {"num_terms", o.num_terms()},
                     {"groups", std::move(groups)}};
  if (!cover.multiplicities().empty()) {
    doc["multiplicities"] = cover.multiplicities();
  }
  return doc;
}

GroupCover cover_from_json(const nlohmann::json& doc, const PauliSum& o) {
  const CommutationMode mode =
      commutation_mode_from_string(doc.at("mode").get<std::string>());
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& words : doc.at("groups")) {
    std::vector<std::size_t> group;
    for (const auto& word : words) {
      const std::size_t v =
          o.find(PauliString::from_word(word.get<std::string>()));
      if (v == PauliSum::npos) {
        throw ParseError("cover references a Pauli word not present in the "
                         "observable: " +
                         word.get<std::string>());
      }
      group.push_back(v);
    }
    groups.push_back(std::move(group));
  }
  std::vector<std::size_t> multiplicities;
  if (doc.contains("multiplicities")) {
    multiplicities = doc["multiplicities"].get<std::vector<std::size_t>>();
  }
  return GroupCover(mode, o.num_terms(), std::move(groups),
                    doc.value("algorithm", std::string("imported")),
                    doc.value("params", std::string()),
                    std::move(multiplicities));
}

nlohmann::json graph_stats_json(CommutationMode mode, std::size_t vertices,
                                std::size_t edges,
                                std::size_t max_cliques_or_cap,
                                bool clique_count_truncated) {
  return nlohmann::json{{"format_version", kFormatVersion},
                        {"mode", to_string(mode)},
                        {"num_vertices", vertices},
                        {"num_edges", edges},
                        {"max_cliques_or_cap", max_cliques_or_cap},
                        {"clique_count_truncated", clique_count_truncated}};
}

namespace {

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

std::string m_var_curve_csv(std::span<const MVarPoint> points) {
  std::string out = "M,m_times_var,bias\n";
  for (const auto& p : points) {
    out += std::to_string(p.shots) + "," + format_double(p.m_times_var) +
           "," + format_double(p.bias) + "\n";
  }
  return out;
}

std::string estimates_csv(std::span<const double> estimates) {
  std::string out = "repetition,estimate\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    out += std::to_string(i) + "," + format_double(estimates[i]) + "\n";
  }
  return out;
}

std::string qq_csv(std::span<const std::pair<double, double>> pairs) {
  std::string out = "theoretical,empirical\n";
  for (const auto& [theoretical, empirical] : pairs) {
    out += format_double(theoretical) + "," + format_double(empirical) + "\n";
  }
  return out;
}

namespace {

void validate_node(const nlohmann::json& doc, const nlohmann::json& schema,
                   const std::string& where) {
  if (schema.contains("type")) {
    const std::string type = schema["type"].get<std::string>();
    const bool ok =
        (type == "object" && doc.is_object()) ||
        (type == "array" && doc.is_array()) ||
        (type == "string" && doc.is_string()) ||
        (type == "number" && doc.is_number()) ||
        (type == "integer" && doc.is_number_integer()) ||
        (type == "boolean" && doc.is_boolean()) || (type == "null" &&
                                                    doc.is_null());
    if (!ok) {
      throw PreconditionError("schema violation at " + where +
                              ": expected type " + type);
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& allowed : schema["enum"]) {
      if (doc == allowed) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw PreconditionError("schema violation at " + where +
                              ": value not in enum");
    }
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!doc.contains(key.get<std::string>())) {
        throw PreconditionError("schema violation at " + where +
                                ": missing required field '" +
                                key.get<std::string>() + "'");
      }
    }
  }
  if (schema.contains("properties") && doc.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (doc.contains(key)) {
        validate_node(doc[key], sub, where + "." + key);
      }
    }
  }
  if (schema.contains("items") && doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      validate_node(doc[i], schema["items"],
                    where + "[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace

void validate_against_schema(const nlohmann::json& doc,
                             const nlohmann::json& schema) {
  validate_node(doc, schema, "$");
}

}  // namespace paulivar
