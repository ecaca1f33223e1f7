#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qfci/integrals.hpp"
#include "qfci/pauli.hpp"
#include "qfci/types.hpp"

namespace qfci {

struct LadderOp {
  int mode;
  bool creation;

  friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

/// coefficient * ops[0] ops[1] ... (leftmost operator applied last).
/// Zero ops is the identity (core energy), two is a one-body term, four a
/// two-body term.
struct FermionTerm {
  double coefficient = 0.0;
  std::vector<LadderOp> ops;
};

/// A second-quantized Hamiltonian as an ordered list of terms.
struct FermionHamiltonian {
  int n_modes = 0;
  std::vector<FermionTerm> terms;

  std::size_t size() const noexcept { return terms.size(); }
};

/// Emits, in order: the core-energy identity term, one term h_pq a+_p a_q per
/// nonzero h entry (row-major), and one term (1/2)<pq|rs> a+_p a+_q a_s a_r
/// per nonzero g entry (row-major over p, q, r, s).
FermionHamiltonian build_second_quantized(const SpinOrbitalIntegrals& soi);

/// Jordan-Wigner image, qubit j <-> mode j, |1> = occupied. Like strings are
/// merged and strings below PauliOperator::kPruneThreshold dropped.
PauliOperator jordan_wigner(const FermionHamiltonian& ham);
PauliOperator jordan_wigner(std::span<const FermionTerm> terms, int n_qubits);

/// out = H |psi> computed by acting with ladder operators on occupation
/// bitstrings. `out` must not alias `psi`.
void apply_fermion(const FermionHamiltonian& ham, std::span<const Complex> psi,
                   std::span<Complex> out);

/// H |psi> for either representation.
Amplitudes apply_operator(const PauliOperator& op, std::span<const Complex> psi);
Amplitudes apply_operator(const FermionHamiltonian& ham, std::span<const Complex> psi);

/// Matrix elements of one term applied to a determinant: the resulting
/// determinant and signed coefficient, or nothing if annihilated.
struct TermAction {
  Determinant det;
  double value;
};
bool act(const FermionTerm& term, Determinant det, TermAction& result) noexcept;

/// Dense matrix of H over the full 2^n Fock space, from the fermionic action.
Eigen::MatrixXd fermion_dense(const FermionHamiltonian& ham);

/// Hamiltonian matrix over an explicit determinant list (sorted ascending).
/// Elements connecting to determinants outside the list are dropped.
Eigen::MatrixXd hamiltonian_in_basis(const FermionHamiltonian& ham,
                                     std::span<const Determinant> basis);

struct SectorSpectrum {
  Sector sector;
  std::vector<Determinant> determinants;  // ascending
  Eigen::VectorXd eigenvalues;            // ascending
  Eigen::MatrixXd eigenvectors;           // columns over `determinants`

  std::size_t dimension() const noexcept { return determinants.size(); }
};

inline constexpr std::size_t kDefaultSectorCap = 20000;

/// Dense diagonalization of H restricted to a particle-number sector.
/// Throws SectorTooLarge when the sector exceeds `cap` determinants.
SectorSpectrum exact_eigensolve(const FermionHamiltonian& ham, Sector sector,
                                std::size_t cap = kDefaultSectorCap);

/// Same, over an arbitrary determinant list (used for active-space guesses).
SectorSpectrum diagonalize_in_basis(const FermionHamiltonian& ham, Sector sector,
                                    std::vector<Determinant> basis);

}  // namespace qfci
