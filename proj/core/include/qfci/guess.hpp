#pragma once

#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qfci/hamiltonian.hpp"
#include "qfci/integrals.hpp"
#include "qfci/statevector.hpp"
#include "qfci/types.hpp"

namespace qfci {

struct GuessEntry {
  Determinant mask;
  Complex amplitude;
};

/// Sparse initial wavefunction over occupation bitmasks (alpha modes
/// 0..n_orb-1, beta modes n_orb..2n_orb-1).
struct GuessState {
  int n_qubits = 0;
  std::vector<GuessEntry> entries;
  std::string label;
  bool mixed_sector = false;

  double norm() const noexcept;
  /// Throws DegenerateState on a zero norm.
  void normalize();
  /// Checks unit norm (1e-12), that masks fit n_qubits and are distinct, and
  /// a common sector unless mixed_sector. Throws ConsistencyError.
  void validate() const;
};

/// Lowest n_alpha alpha and n_beta beta spin orbitals occupied.
GuessState hf_determinant(int n_orb, int n_alpha, int n_beta);

/// Throws ConsistencyError when the sector disagrees with the electron count
/// or spin recorded in the integral file; writes the same message to `warn`
/// first when given.
void check_sector_metadata(Sector sector, const MolecularIntegrals& mi, std::ostream* warn = nullptr);

enum class Coupling { Singlet, Triplet };

/// (|a_alpha b_beta> +/- |a_beta b_alpha>)/sqrt(2) on top of a doubly
/// occupied core: + for singlet, - for triplet (M_S = 0). Each determinant
/// is the core plus the two open-shell bits; the sign is that of the masks
/// as stored, without reordering operators.
GuessState open_shell_csf(int n_orb, std::span<const int> core, int a, int b, Coupling coupling);

/// Reads `amplitude bitstring` lines (leftmost character = qubit 0, '#'
/// comments), keeps |amplitude| > threshold, renormalizes.
GuessState load_amplitude_guess(std::istream& in, double threshold);
GuessState load_amplitude_guess(const std::filesystem::path& path, double threshold);

/// Writes the format read by load_amplitude_guess (real parts only).
void write_amplitude_guess(std::ostream& out, const GuessState& guess);

/// Occupation string with qubit 0 leftmost.
std::string occupation_string(Determinant mask, int n_qubits);

/// Standard complex normal amplitudes over every determinant of the sector,
/// normalized.
GuessState random_sector_state(int n_orb, Sector sector, std::mt19937_64& rng);

StateVector to_statevector(const GuessState& guess);
/// Nonzero amplitudes of `psi`, in ascending mask order.
GuessState from_statevector(const StateVector& psi, std::string label = {});

/// Ground or excited root of H restricted to determinants with `core`
/// doubly occupied and `sector` electrons distributed over `active`
/// orbitals (a CASCI wavefunction), as a guess.
GuessState casci_guess(const FermionHamiltonian& ham, int n_orb, std::span<const int> core,
                       std::span<const int> active, Sector active_sector, int root = 0);

}  // namespace qfci
