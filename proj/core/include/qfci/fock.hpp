#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "qfci/types.hpp"

namespace qfci {

/// Binomial coefficient; returns 0 outside 0 <= k <= n.
std::uint64_t binomial(int n, int k);

/// C(n_orb, n_alpha) * C(n_orb, n_beta).
std::uint64_t sector_dimension(int n_orb, Sector sector);

/// All determinants of a sector in ascending bitmask order.
std::vector<Determinant> sector_determinants(int n_orb, Sector sector);

/// Sector of a determinant in the blocked alpha-then-beta ordering.
Sector sector_of(Determinant det, int n_orb);

inline Determinant alpha_mask(int n_orb) { return (Determinant{1} << n_orb) - 1; }

/// Fermionic sign (-1)^(number of occupied modes below `mode`).
inline int parity_below(Determinant det, int mode) noexcept {
  const Determinant below = (Determinant{1} << mode) - 1;
  return (std::popcount(det & below) & 1) ? -1 : 1;
}

/// Result of a ladder operator acting on a determinant; empty when the
/// operator annihilates the state.
struct LadderResult {
  Determinant det;
  int sign;
};

inline std::optional<LadderResult> annihilate(Determinant det, int mode) noexcept {
  const Determinant bit = Determinant{1} << mode;
  if (!(det & bit)) return std::nullopt;
  return LadderResult{det ^ bit, parity_below(det, mode)};
}

inline std::optional<LadderResult> create(Determinant det, int mode) noexcept {
  const Determinant bit = Determinant{1} << mode;
  if (det & bit) return std::nullopt;
  return LadderResult{det ^ bit, parity_below(det, mode)};
}

}  // namespace qfci
