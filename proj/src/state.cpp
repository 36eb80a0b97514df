#include "paulivar/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "paulivar/normal.hpp"

namespace paulivar {

namespace {

struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::complex<double> y_phase = 1.0;  // i^(#Y)
};

PauliMasks masks_of(const PauliString& p, std::size_t n) {
  if (n > 48) {
    throw PreconditionError("statevector operations support at most 48 qubits");
  }
  PauliMasks m;
  std::size_t y_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
    if (p.x_bit(i)) m.x |= bit;
    if (p.z_bit(i)) m.z |= bit;
    if (p.x_bit(i) && p.z_bit(i)) ++y_count;
  }
  static const std::complex<double> kPhases[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  m.y_phase = kPhases[y_count & 3];
  return m;
}

int parity_sign(std::uint64_t v) {
  return (std::popcount(v) & 1) ? -1 : 1;
}

}  // namespace

std::size_t num_qubits_of(const StateVector& psi) {
  const auto size = static_cast<std::uint64_t>(psi.size());
  if (size == 0 || (size & (size - 1)) != 0) {
    throw PreconditionError("statevector length is not a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(size));
}

StateVector basis_state(std::string_view bits) {
  const std::size_t n = bits.size();
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ParseError("basis label must consist of 0s and 1s");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  StateVector psi = StateVector::Zero(std::int64_t{1} << n);
  psi[static_cast<std::int64_t>(index)] = 1.0;
  return psi;
}

StateVector random_state(std::size_t n, std::uint64_t seed) {
  RandomSource rng(seed);
  StateVector psi(std::int64_t{1} << n);
  for (std::int64_t i = 0; i < psi.size(); ++i) {
    const double re = inverse_normal_cdf(
        std::min(1.0 - 1e-16, std::max(1e-16, rng.next_double())));
    const double im = inverse_normal_cdf(
        std::min(1.0 - 1e-16, std::max(1e-16, rng.next_double())));
    psi[i] = {re, im};
  }
  psi.normalize();
  return psi;
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
  const std::size_t n = num_qubits_of(psi);
  if (p.num_qubits() != n) {
    throw PreconditionError("apply_pauli: qubit count mismatch");
  }
  const PauliMasks m = masks_of(p, n);
  StateVector out(psi.size());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(psi.size()); ++b) {
    out[static_cast<std::int64_t>(b ^ m.x)] =
        m.y_phase * static_cast<double>(parity_sign(b & m.z)) *
        psi[static_cast<std::int64_t>(b)];
  }
  return out;
}

double expectation(const StateVector& psi, const PauliString& p) {
  const std::size_t n = num_qubits_of(psi);
  if (p.num_qubits() != n) {
    throw PreconditionError("expectation: qubit count mismatch");
  }
  const PauliMasks m = masks_of(p, n);
  std::complex<double> acc = 0.0;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(psi.size()); ++b) {
    acc += std::conj(psi[static_cast<std::int64_t>(b ^ m.x)]) * m.y_phase *
           static_cast<double>(parity_sign(b & m.z)) *
           psi[static_cast<std::int64_t>(b)];
  }
  if (std::abs(acc.imag()) >= 1e-10) {
    throw InternalError("expectation of a Pauli string came out complex");
  }
  return acc.real();
}

double pauli_sum_expectation(const StateVector& psi, const PauliSum& o) {
  double value = o.identity_offset();
  for (const auto& t : o.terms()) {
    value += t.coefficient * expectation(psi, t.word);
  }
  return value;
}

StateVector apply_pauli_sum(const PauliSum& o, const StateVector& psi) {
  const std::size_t n = num_qubits_of(psi);
  StateVector out = o.identity_offset() * psi;
  for (const auto& t : o.terms()) {
    const PauliMasks m = masks_of(t.word, n);
    const std::complex<double> scale = t.coefficient * m.y_phase;
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(psi.size());
         ++b) {
      out[static_cast<std::int64_t>(b ^ m.x)] +=
          scale * static_cast<double>(parity_sign(b & m.z)) *
          psi[static_cast<std::int64_t>(b)];
    }
  }
  return out;
}

namespace {

// One Lanczos sweep from `start`, building at most `m` basis vectors with
// full reorthogonalization. Returns the smallest Ritz pair.
struct SweepResult {
  double theta;
  StateVector ritz;
  double next_gap;  // distance to the second Ritz value, inf if none
};

SweepResult lanczos_sweep(const PauliSum& o, const StateVector& start,
                          int m, int& matvecs, double breakdown_scale) {
  const std::int64_t dim = start.size();
  Eigen::MatrixXcd basis(dim, m);
  Eigen::VectorXd alpha(m), beta(m);
  basis.col(0) = start.normalized();

  int built = 0;
  for (int k = 0; k < m; ++k) {
    StateVector w = apply_pauli_sum(o, basis.col(k));
    ++matvecs;
    w -= o.identity_offset() * basis.col(k);  // work on the traceless part
    if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
    alpha[k] = (basis.col(k).adjoint() * w).real()(0);
    w -= alpha[k] * basis.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        w -= (basis.col(j).adjoint() * w)(0) * basis.col(j);
      }
    }
    beta[k] = w.norm();
    built = k + 1;
    if (beta[k] < 1e-12 * breakdown_scale || k + 1 == m) break;
    basis.col(k + 1) = w / beta[k];
  }

  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
  for (int k = 0; k < built; ++k) {
    tri(k, k) = alpha[k];
    if (k + 1 < built) tri(k, k + 1) = tri(k + 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
  const Eigen::VectorXd evals = solver.eigenvalues();
  SweepResult result;
  result.theta = evals[0];
  result.next_gap = built > 1 ? evals[1] - evals[0]
                              : std::numeric_limits<double>::infinity();
  result.ritz =
      basis.leftCols(built) * solver.eigenvectors().col(0).cast<std::complex<double>>();
  result.ritz.normalize();
  return result;
}

}  // namespace

namespace {

GroundStateResult ground_state_single(const PauliSum& o, double tol,
                                      const GroundStateOptions& options) {
  const std::int64_t dim = std::int64_t{1} << o.num_qubits();
  const double l1 = o.l1_norm();
  const double target = tol * std::max(l1, 1e-300);
  // Cap the Krylov dimension so the stored basis stays near 2 GB; restarts
  // make up for a shorter sweep at the largest sizes.
  const std::int64_t memory_cap =
      std::max<std::int64_t>(8, (std::int64_t{1} << 27) / dim);
  const int m = static_cast<int>(std::min<std::int64_t>(
      std::min<std::int64_t>(options.krylov_dim, dim), memory_cap));

  StateVector start = random_state(o.num_qubits(), options.seed);
  int matvecs = 0;
  double best_residual = std::numeric_limits<double>::infinity();

  while (matvecs < options.max_matvecs) {
    const SweepResult sweep =
        lanczos_sweep(o, start, m, matvecs, std::max(l1, 1.0));
    StateVector applied = apply_pauli_sum(o, sweep.ritz);
    ++matvecs;
    applied -= o.identity_offset() * sweep.ritz;
    const double residual = (applied - sweep.theta * sweep.ritz).norm();
    best_residual = std::min(best_residual, residual);
    if (residual <= target) {
      // A second Ritz value this close already hints at degeneracy.
      const bool near_degenerate =
          sweep.next_gap < 1e-8 * std::max(1.0, std::abs(sweep.theta));
      return {sweep.theta + o.identity_offset(), sweep.ritz, residual,
              matvecs, near_degenerate};
    }
    start = sweep.ritz;
  }
  throw ConvergenceError(
      "ground_state: no convergence after " + std::to_string(matvecs) +
          " matvecs (best residual " + std::to_string(best_residual) + ")",
      best_residual);
}

}  // namespace

GroundStateResult ground_state(const PauliSum& o, double tol,
                               const GroundStateOptions& options) {
  if (o.num_qubits() > 24) {
    throw PreconditionError("ground_state supports at most 24 qubits");
  }
  if (tol <= 0.0) {
    throw PreconditionError("ground_state: tolerance must be positive");
  }
  GroundStateResult result = ground_state_single(o, tol, options);
  if (options.detect_degeneracy && !result.degenerate_hint) {
    // Lanczos converges to a single vector inside a degenerate eigenspace,
    // so multiplicity is invisible to a single run. A second run from an
    // independent start lands elsewhere in the eigenspace when one exists.
    GroundStateOptions probe = options;
    probe.seed = derive_seed(options.seed, 0x600d57a7e);
    probe.detect_degeneracy = false;
    const GroundStateResult second = ground_state_single(o, tol, probe);
    result.matvecs += second.matvecs;
    const double scale = std::max(1.0, std::abs(result.energy));
    if (std::abs(second.energy - result.energy) < 1e-6 * scale) {
      const double overlap =
          std::abs((result.state.adjoint() * second.state)(0));
      if (overlap < 0.999) result.degenerate_hint = true;
    }
  }
  return result;
}

std::vector<int> measure_group(StateVector psi,
                               std::span<const PauliString> group,
                               RandomSource& rng) {
  for (std::size_t a = 0; a < group.size(); ++a) {
    for (std::size_t b = a + 1; b < group.size(); ++b) {
      if (!fc_commutes(group[a], group[b])) {
        throw PreconditionError(
            "measure_group: strings do not pairwise commute");
      }
    }
  }
  std::vector<int> outcomes;
  outcomes.reserve(group.size());
  for (const PauliString& p : group) {
    const double mean = expectation(psi, p);
    const double p_plus = std::clamp(0.5 * (1.0 + mean), 0.0, 1.0);
    const int outcome = rng.next_double() < p_plus ? 1 : -1;
    const StateVector projected =
        0.5 * (psi + static_cast<double>(outcome) * apply_pauli(p, psi));
    const double norm = projected.norm();
    if (norm < 1e-14) {
      throw InternalError("measure_group: drawn outcome has zero probability");
    }
    psi = projected / norm;
    outcomes.push_back(outcome);
  }
  return outcomes;
}

CovarianceTable::CovarianceTable(std::vector<double> means,
                                 std::size_t num_vertices)
    : means_(std::move(means)), num_vertices_(num_vertices) {}

double CovarianceTable::pair_moment(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  const auto it = moments_.find(key(i, j));
  if (it == moments_.end()) {
    throw PreconditionError("covariance table is missing a pair moment");
  }
  return it->second;
}

bool CovarianceTable::has_pair(std::size_t i, std::size_t j) const {
  return i == j || moments_.count(key(i, j)) > 0;
}

void CovarianceTable::set_pair_moment(std::size_t i, std::size_t j,
                                      double value) {
  moments_[key(i, j)] = value;
}

CovarianceTable covariance_table(const StateVector& psi,
                                 const GroupCover& cover, const PauliSum& o) {
  if (cover.num_vertices() != o.num_terms()) {
    throw PreconditionError("cover does not index this observable");
  }
  const auto& terms = o.terms();
  std::vector<double> means(terms.size());
  for (std::size_t v = 0; v < terms.size(); ++v) {
    means[v] = expectation(psi, terms[v].word);
  }
  CovarianceTable table(std::move(means), terms.size());

  const bool qwc = cover.mode() == CommutationMode::QWC;
  for (const auto& group : cover.groups()) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const std::size_t i = group[a], j = group[b];
        const PauliString& p = terms[i].word;
        const PauliString& q = terms[j].word;
        const bool ok = qwc ? qwc_commutes(p, q) : fc_commutes(p, q);
        if (!ok) {
          throw PreconditionError("cover has a non-commuting intra-group pair: " +
                                  p.to_string() + ", " + q.to_string());
        }
        if (table.has_pair(i, j)) continue;
        const auto [phase, r] = pauli_product(p, q);
        if (std::abs(phase.imag()) > 1e-14) {
          throw InternalError("commuting pair produced an imaginary phase");
        }
        table.set_pair_moment(i, j, phase.real() * expectation(psi, r));
      }
    }
  }
  return table;
}

}  // namespace paulivar
