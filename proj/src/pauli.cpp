#include "paulivar/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <unordered_map>

namespace paulivar {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

}  // namespace

PauliString::PauliString(std::size_t n)
    : n_(n), x_(words_for(n), 0), z_(words_for(n), 0) {}

PauliString PauliString::from_word(std::string_view word) {
  if (word.empty()) {
    throw ParseError("empty Pauli word");
  }
  PauliString p(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    p.set_letter(i, word[i]);
  }
  return p;
}

char PauliString::letter(std::size_t i) const {
  const bool x = bit(x_, i), z = bit(z_, i);
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

void PauliString::set_letter(std::size_t i, char c) {
  switch (c) {
    case 'I':
      set_bit(x_, i, false);
      set_bit(z_, i, false);
      break;
    case 'X':
      set_bit(x_, i, true);
      set_bit(z_, i, false);
      break;
    case 'Y':
      set_bit(x_, i, true);
      set_bit(z_, i, true);
      break;
    case 'Z':
      set_bit(x_, i, false);
      set_bit(z_, i, true);
      break;
    default:
      throw ParseError(std::string("illegal Pauli letter '") + c + "'");
  }
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w) {
    if (x_[w] | z_[w]) return false;
  }
  return true;
}

std::size_t PauliString::weight() const {
  std::size_t count = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) {
    count += std::popcount(x_[w] | z_[w]);
  }
  return count;
}

std::string PauliString::to_string() const {
  std::string s(n_, 'I');
  for (std::size_t i = 0; i < n_; ++i) s[i] = letter(i);
  return s;
}

bool PauliString::operator<(const PauliString& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  for (std::size_t i = 0; i < n_; ++i) {
    const char a = letter(i), b = other.letter(i);
    if (a != b) return a < b;
  }
  return false;
}

std::size_t PauliString::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ n_;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto w : x_) mix(w);
  for (auto w : z_) mix(w);
  return static_cast<std::size_t>(h);
}

bool qwc_commutes(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw PreconditionError("qwc_commutes: mismatched qubit counts");
  }
  for (std::size_t w = 0; w < p.x_.size(); ++w) {
    const std::uint64_t both = (p.x_[w] | p.z_[w]) & (q.x_[w] | q.z_[w]);
    const std::uint64_t differ = (p.x_[w] ^ q.x_[w]) | (p.z_[w] ^ q.z_[w]);
    if (both & differ) return false;
  }
  return true;
}

bool fc_commutes(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw PreconditionError("fc_commutes: mismatched qubit counts");
  }
  // Per position, (x1&z2)^(z1&x2) is 1 exactly when the letters differ and
  // neither is the identity; full commutation is even parity of that count.
  int parity = 0;
  for (std::size_t w = 0; w < p.x_.size(); ++w) {
    parity ^= std::popcount((p.x_[w] & q.z_[w]) ^ (p.z_[w] & q.x_[w])) & 1;
  }
  return parity == 0;
}

std::pair<std::complex<double>, PauliString> pauli_product(
    const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw PreconditionError("pauli_product: mismatched qubit counts");
  }
  PauliString r(p.num_qubits());
  // Writing each letter as i^{x z} X^x Z^z, the per-qubit phase exponent of
  // the product is x1 z1 + x2 z2 + 2 z1 x2 - x3 z3 (mod 4).
  unsigned exponent = 0;
  for (std::size_t w = 0; w < p.x_.size(); ++w) {
    const std::uint64_t x3 = p.x_[w] ^ q.x_[w];
    const std::uint64_t z3 = p.z_[w] ^ q.z_[w];
    r.x_[w] = x3;
    r.z_[w] = z3;
    exponent += std::popcount(p.x_[w] & p.z_[w]);
    exponent += std::popcount(q.x_[w] & q.z_[w]);
    exponent += 2u * std::popcount(p.z_[w] & q.x_[w]);
    exponent += 3u * std::popcount(x3 & z3);  // -1 == 3 (mod 4)
  }
  static const std::complex<double> kPhases[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return {kPhases[exponent & 3u], std::move(r)};
}

PauliSum::PauliSum(std::size_t n, std::vector<Term> terms,
                   double identity_offset)
    : n_(n), terms_(std::move(terms)), identity_offset_(identity_offset) {
  for (const Term& t : terms_) {
    if (t.word.num_qubits() != n_) {
      throw PreconditionError("PauliSum: term qubit count differs from n");
    }
    if (t.word.is_identity()) {
      throw PreconditionError(
          "PauliSum: identity term must live in identity_offset");
    }
    if (t.coefficient == 0.0) {
      throw PreconditionError("PauliSum: zero-coefficient term");
    }
  }
}

double PauliSum::l1_norm() const {
  double s = 0.0;
  for (const Term& t : terms_) s += std::abs(t.coefficient);
  return s;
}

std::size_t PauliSum::find(const PauliString& word) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].word == word) return i;
  }
  return npos;
}

PauliSum parse_pauli_sum(std::string_view text) {
  std::vector<PauliSum::Term> terms;
  std::unordered_map<std::string, std::size_t> index_of;
  double identity_offset = 0.0;
  std::size_t n = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#');
        hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::size_t begin = 0, end = line.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(line[begin])))
      ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1])))
      --end;
    line = line.substr(begin, end - begin);
    if (line.empty()) continue;

    const std::size_t split = line.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw ParseError("expected '<coefficient> <word>'", line_no);
    }
    const std::string coeff_text(line.substr(0, split));
    std::size_t word_begin = split;
    while (word_begin < line.size() &&
           std::isspace(static_cast<unsigned char>(line[word_begin])))
      ++word_begin;
    const std::string word_text(line.substr(word_begin));

    char* parse_end = nullptr;
    const double coeff = std::strtod(coeff_text.c_str(), &parse_end);
    if (parse_end != coeff_text.c_str() + coeff_text.size() ||
        coeff_text.empty()) {
      throw ParseError("malformed coefficient '" + coeff_text + "'", line_no);
    }
    if (word_text.empty() ||
        word_text.find_first_of(" \t") != std::string::npos) {
      throw ParseError("expected a single Pauli word after the coefficient",
                       line_no);
    }
    for (char c : word_text) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw ParseError(std::string("illegal character '") + c +
                             "' in Pauli word",
                         line_no);
      }
    }
    if (n == 0) {
      n = word_text.size();
    } else if (word_text.size() != n) {
      throw ParseError("inconsistent word length (expected " +
                           std::to_string(n) + ", got " +
                           std::to_string(word_text.size()) + ")",
                       line_no);
    }

    if (word_text.find_first_not_of('I') == std::string::npos) {
      identity_offset += coeff;
      continue;
    }
    auto [it, inserted] = index_of.try_emplace(word_text, terms.size());
    if (inserted) {
      terms.push_back({PauliString::from_word(word_text), coeff});
    } else {
      terms[it->second].coefficient += coeff;
    }
  }
  if (n == 0) {
    throw ParseError("no terms found");
  }

  // Drop exact cancellations while preserving first-appearance order.
  std::vector<PauliSum::Term> kept;
  kept.reserve(terms.size());
  for (auto& t : terms) {
    if (t.coefficient != 0.0) kept.push_back(std::move(t));
  }
  return PauliSum(n, std::move(kept), identity_offset);
}

std::string serialize_pauli_sum(const PauliSum& sum) {
  std::map<std::string, double> ordered;
  if (sum.identity_offset() != 0.0) {
    ordered.emplace(std::string(sum.num_qubits(), 'I'), sum.identity_offset());
  }
  for (const auto& t : sum.terms()) {
    ordered.emplace(t.word.to_string(), t.coefficient);
  }
  std::string out;
  char buffer[64];
  for (const auto& [word, coeff] : ordered) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", coeff);
    out += buffer;
    out += ' ';
    out += word;
    out += '\n';
  }
  return out;
}

}  // namespace paulivar
