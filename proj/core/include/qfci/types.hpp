#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qfci {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Occupation bitmask over spin orbitals. Bit j set means spin orbital j
/// (equivalently qubit j) is occupied. Qubit j is bit j of a basis index.
using Determinant = std::uint64_t;

/// Particle-number sector of a determinant space.
struct Sector {
  int n_alpha = 0;
  int n_beta = 0;

  friend bool operator==(const Sector&, const Sector&) = default;
  friend auto operator<=>(const Sector&, const Sector&) = default;
};

}  // namespace qfci
