#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "qfci/integrals.hpp"
#include "qfci/pauli.hpp"
#include "qfci/types.hpp"

namespace qfci {

/// Elementary gates for exponentials of Pauli strings. `rx` counts
/// R_x(-pi/2) basis changes.
struct GateCounts {
  std::uint64_t hadamard = 0;
  std::uint64_t cnot = 0;
  std::uint64_t rx = 0;
  std::uint64_t rz = 0;
  std::uint64_t controlled_rz = 0;
  std::uint64_t total = 0;

  GateCounts& operator+=(const GateCounts& o) noexcept;
  friend GateCounts operator+(GateCounts a, const GateCounts& b) noexcept { return a += b; }
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

/// Template cost of exp(i theta s): 2 H per X, 2 R_x per Y, a CNOT ladder of
/// 2(weight-1) and one central R_z (controlled when `controlled`). Throws
/// EmptyString for the identity word.
GateCounts count_string_exponential(const PauliWord& word, bool controlled);
inline GateCounts count_string_exponential(const PauliString& s, bool controlled) {
  return count_string_exponential(s.word, controlled);
}

/// One Trotter slice of the operator. An identity string is a phase on the
/// control alone and counts as one R_z (or nothing when uncontrolled).
GateCounts count_operator(const PauliOperator& op, bool controlled);
/// count_operator(op, true): a single controlled action of U.
GateCounts count_controlled_u(const PauliOperator& op);

/// C(n_orb, n_alpha) * C(n_orb, n_beta).
std::uint64_t fci_dimension(int n_orb, int n_alpha, int n_beta);

/// Integrals with every entry drawn uniformly from [-1, 1) and symmetrized
/// (one-body symmetric, two-body 8-fold), so no term vanishes. Half filling.
MolecularIntegrals random_dense_integrals(int n_orb, std::mt19937_64& rng);

struct ScalingPoint {
  int n_so = 0;
  std::uint64_t fci_dim = 0;
  std::size_t n_strings = 0;
  GateCounts counts;
};

/// Jordan-Wigner image and controlled gate count of the integrals; the FCI
/// dimension uses the file's electron count and spin.
ScalingPoint scaling_point(const MolecularIntegrals& mi);

/// Least-squares slope of log(y) against log(x). Needs >= 2 points with
/// positive values; throws InvalidArgument otherwise.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qfci
