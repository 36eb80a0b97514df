#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paulivar/errors.hpp"

namespace paulivar {

/// An n-qubit word over {I, X, Y, Z} in symplectic (bit-pair) encoding:
/// one x-bit and one z-bit per qubit, packed into 64-bit words.
///
///   I = (0,0)   X = (1,0)   Y = (1,1)   Z = (0,1)
///
/// The encoding makes commutation checks word-parallel: two strings fully
/// commute iff popcount((x1 & z2) ^ (z1 & x2)) is even, and qubit-wise
/// commute iff no position has two distinct non-identity letters.
class PauliString {
 public:
  PauliString() = default;

  /// The all-identity string on `n` qubits.
  explicit PauliString(std::size_t n);

  /// Parses a word such as "XIZY". Throws ParseError on characters outside
  /// {I,X,Y,Z} or on an empty word.
  static PauliString from_word(std::string_view word);

  std::size_t num_qubits() const { return n_; }

  /// Letter at position `i` as one of 'I', 'X', 'Y', 'Z'.
  char letter(std::size_t i) const;

  void set_letter(std::size_t i, char c);

  bool is_identity() const;

  /// Number of non-identity positions.
  std::size_t weight() const;

  std::string to_string() const;

  bool x_bit(std::size_t i) const { return bit(x_, i); }
  bool z_bit(std::size_t i) const { return bit(z_, i); }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

  bool operator==(const PauliString& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
  }
  bool operator!=(const PauliString& other) const { return !(*this == other); }

  /// Lexicographic comparison of the letter words (I < X < Y < Z).
  bool operator<(const PauliString& other) const;

  std::size_t hash() const;

 private:
  friend bool qwc_commutes(const PauliString&, const PauliString&);
  friend bool fc_commutes(const PauliString&, const PauliString&);
  friend std::pair<std::complex<double>, PauliString> pauli_product(
      const PauliString&, const PauliString&);

  static bool bit(const std::vector<std::uint64_t>& w, std::size_t i) {
    return (w[i >> 6] >> (i & 63)) & 1u;
  }
  static void set_bit(std::vector<std::uint64_t>& w, std::size_t i, bool v) {
    if (v)
      w[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
      w[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    return p.hash();
  }
};

/// True iff P and Q agree at every position up to identities (the qubit-wise
/// commutation rule: no position carries two distinct non-identity letters).
bool qwc_commutes(const PauliString& p, const PauliString& q);

/// True iff P and Q commute as operators: the number of positions with two
/// distinct non-identity letters is even.
bool fc_commutes(const PauliString& p, const PauliString& q);

/// Operator product P*Q = phase * R with phase in {+1, -1, +i, -i} and R a
/// Pauli string. When P and Q commute the phase is real.
std::pair<std::complex<double>, PauliString> pauli_product(
    const PauliString& p, const PauliString& q);

/// A real linear combination of Pauli strings. The identity component is
/// split out into `identity_offset` at construction time; stored terms are
/// non-identity with nonzero coefficients and preserve first-appearance
/// order of the source text, which downstream algorithms use as the
/// tie-breaking "input order".
class PauliSum {
 public:
  struct Term {
    PauliString word;
    double coefficient;
  };

  PauliSum() = default;
  PauliSum(std::size_t n, std::vector<Term> terms, double identity_offset);

  std::size_t num_qubits() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  double identity_offset() const { return identity_offset_; }

  /// Sum of |c_P| over stored (non-identity) terms.
  double l1_norm() const;

  /// Index of a term by word, or npos when absent.
  std::size_t find(const PauliString& word) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
  double identity_offset_ = 0.0;
};

/// Parses the one-term-per-line text format:
///
///   # comment
///   -0.811 IIII
///   0.172  ZIII
///
/// Coefficients accept scientific notation. Duplicate words are summed into
/// the first occurrence; terms whose summed coefficient is exactly zero are
/// dropped; the identity word is moved to identity_offset. Throws ParseError
/// (with line number) on malformed coefficients, illegal characters, or
/// inconsistent word lengths.
PauliSum parse_pauli_sum(std::string_view text);

/// Canonical serialization: one term per line, ordered lexicographically by
/// word (the identity word included when the offset is nonzero), with
/// coefficients printed to 17 significant digits so that parse/serialize
/// round-trips are bit-exact.
std::string serialize_pauli_sum(const PauliSum& sum);

}  // namespace paulivar
