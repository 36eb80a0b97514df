#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string_view>
#include <unordered_map>

#include "paulivar/cover.hpp"
#include "paulivar/pauli.hpp"
#include "paulivar/rng.hpp"

namespace paulivar {

/// Dense n-qubit pure state: 2^n complex amplitudes. Qubit i addresses bit
/// (n-1-i) of the amplitude index, so the word order of a Pauli string and
/// the bit order of a basis label read the same way.
using StateVector = Eigen::VectorXcd;

/// Recovers n from the amplitude count; throws unless the size is a power
/// of two.
std::size_t num_qubits_of(const StateVector& psi);

/// Computational basis state |bits>, e.g. basis_state("01").
StateVector basis_state(std::string_view bits);

/// Haar-ish random unit vector (i.i.d. standard normal components via
/// inverse-CDF sampling, then normalized). Deterministic per seed.
StateVector random_state(std::size_t n, std::uint64_t seed);

/// P |psi>.
StateVector apply_pauli(const PauliString& p, const StateVector& psi);

/// <psi| P |psi>. The imaginary part must vanish to 1e-10 (it does for any
/// state and Hermitian P); larger values raise InternalError.
double expectation(const StateVector& psi, const PauliString& p);

/// identity_offset + sum_P c_P <psi| P |psi>.
double pauli_sum_expectation(const StateVector& psi, const PauliSum& o);

/// O |psi| including the identity offset.
StateVector apply_pauli_sum(const PauliSum& o, const StateVector& psi);

struct GroundStateOptions {
  double tol = 1e-8;            // relative residual against the l1 norm
  int krylov_dim = 64;
  int max_matvecs = 10000;
  std::uint64_t seed = 7;       // start-vector seed
  /// Re-solve from an independent start vector and compare minimizers; a
  /// matching energy with a distinct eigenvector flags a degenerate ground
  /// space. Costs a second Lanczos run.
  bool detect_degeneracy = true;
};

struct GroundStateResult {
  double energy;
  StateVector state;
  double residual;              // ||O psi - E psi||
  int matvecs;
  /// The ground space looks degenerate; the returned state is one
  /// representative and downstream variance numbers depend on the choice.
  bool degenerate_hint;
};

/// Smallest eigenpair of O by Lanczos iteration with full
/// reorthogonalization and restarts. Converges when
/// ||O psi - E psi|| <= tol * sum|c_P|; throws ConvergenceError (carrying
/// the best residual) at the matvec cap, and PreconditionError for n > 24.
GroundStateResult ground_state(const PauliSum& o, double tol = 1e-8,
                               const GroundStateOptions& options = {});

/// Samples a joint outcome for a family of pairwise commuting Pauli strings
/// by sequential projection: for each string in order, draw +-1 from the
/// Born rule of the current state, then project and renormalize. Because
/// the strings commute the joint law does not depend on the order. Returns
/// outcomes aligned with `group`.
std::vector<int> measure_group(StateVector psi,
                               std::span<const PauliString> group,
                               RandomSource& rng);

/// State-conditional first and second moments of the cover's Pauli strings:
/// means mu_P for every vertex and pair moments tr(psi P Q) for every
/// unordered intra-group pair. All downstream variance formulas consume
/// only this table.
class CovarianceTable {
 public:
  CovarianceTable(std::vector<double> means, std::size_t num_vertices);

  double mean(std::size_t v) const { return means_[v]; }
  const std::vector<double>& means() const { return means_; }

  /// tr(psi P_i P_j); requires the pair to have been tabulated (diagonal
  /// entries are always 1).
  double pair_moment(std::size_t i, std::size_t j) const;
  bool has_pair(std::size_t i, std::size_t j) const;
  void set_pair_moment(std::size_t i, std::size_t j, double value);

  /// Cov(X_i, X_j) = tr(psi P_i P_j) - mu_i mu_j.
  double covariance(std::size_t i, std::size_t j) const {
    return pair_moment(i, j) - means_[i] * means_[j];
  }

 private:
  std::uint64_t key(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::uint64_t>(i) * num_vertices_ + j;
  }
  std::vector<double> means_;
  std::size_t num_vertices_;
  std::unordered_map<std::uint64_t, double> moments_;
};

/// Builds the covariance table for a cover: means for every vertex of `o`
/// and pair moments for every unordered intra-group pair, computed as
/// phase * <psi| R |psi> with (phase, R) = P*Q. Raises PreconditionError
/// when an intra-group pair does not commute under the cover's mode.
CovarianceTable covariance_table(const StateVector& psi,
                                 const GroupCover& cover, const PauliSum& o);

}  // namespace paulivar
