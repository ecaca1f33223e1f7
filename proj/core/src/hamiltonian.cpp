#include "qfci/hamiltonian.hpp"

#include <algorithm>
#include <string>

#include "qfci/errors.hpp"
#include "qfci/fock.hpp"

namespace qfci {

FermionHamiltonian build_second_quantized(const SpinOrbitalIntegrals& soi) {
  const int n = soi.n_so;
  FermionHamiltonian ham;
  ham.n_modes = n;
  ham.terms.push_back({soi.core_energy, {}});
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double v = soi.h(p, q);
      if (v != 0.0) ham.terms.push_back({v, {{p, true}, {q, false}}});
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = soi.g(p, q, r, s);
          if (v != 0.0) ham.terms.push_back({0.5 * v, {{p, true}, {q, true}, {s, false}, {r, false}}});
        }
  return ham;
}

namespace {

// a+_j = Z_{<j} (X_j - iY_j)/2,  a_j = Z_{<j} (X_j + iY_j)/2
void ladder_strings(const LadderOp& op, PauliString out[2]) {
  PauliWord zs{0, (std::uint64_t{1} << op.mode) - 1};
  PauliWord xw = zs;
  xw.set(op.mode, Pauli::X);
  PauliWord yw = zs;
  yw.set(op.mode, Pauli::Y);
  out[0] = {Complex{0.5, 0.0}, xw};
  out[1] = {Complex{0.0, op.creation ? -0.5 : 0.5}, yw};
}

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

PauliOperator jordan_wigner(std::span<const FermionTerm> terms, int n_qubits) {
  if (n_qubits > 64) throw InvalidArgument("at most 64 qubits supported");
  PauliOperator result(n_qubits);
  std::vector<PauliString> acc;
  std::vector<PauliString> next;
  for (const auto& term : terms) {
    acc.assign(1, {Complex{term.coefficient, 0.0}, PauliWord{}});
    for (const auto& op : term.ops) {
      if (op.mode < 0 || op.mode >= n_qubits)
        throw IndexOutOfRange("mode " + std::to_string(op.mode) + " outside register");
      PauliString pieces[2];
      ladder_strings(op, pieces);
      next.clear();
      for (const auto& a : acc) {
        for (const auto& b : pieces) {
          auto prod = multiply(a.word, b.word);
          next.push_back({a.coefficient * b.coefficient * kIPow[prod.phase_power], prod.word});
        }
      }
      acc.swap(next);
    }
    for (const auto& s : acc) result.add(s.word, s.coefficient);
  }
  result.prune();
  return result;
}

PauliOperator jordan_wigner(const FermionHamiltonian& ham) {
  return jordan_wigner(ham.terms, ham.n_modes);
}

bool act(const FermionTerm& term, Determinant det, TermAction& result) noexcept {
  int sign = 1;
  for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
    auto r = it->creation ? create(det, it->mode) : annihilate(det, it->mode);
    if (!r) return false;
    det = r->det;
    sign *= r->sign;
  }
  result = {det, sign * term.coefficient};
  return true;
}

void apply_fermion(const FermionHamiltonian& ham, std::span<const Complex> psi,
                   std::span<Complex> out) {
  const std::size_t dim = std::size_t{1} << ham.n_modes;
  if (psi.size() != dim || out.size() != dim)
    throw DimensionMismatch("Hamiltonian on " + std::to_string(ham.n_modes) +
                            " modes applied to vector of size " + std::to_string(psi.size()));
  std::fill(out.begin(), out.end(), Complex{});
  TermAction r{};
  for (std::size_t b = 0; b < dim; ++b) {
    const Complex a = psi[b];
    if (a == Complex{}) continue;
    for (const auto& term : ham.terms)
      if (act(term, b, r)) out[r.det] += r.value * a;
  }
}

Amplitudes apply_operator(const PauliOperator& op, std::span<const Complex> psi) {
  Amplitudes out(psi.size());
  apply_pauli(op, psi, out);
  return out;
}

Amplitudes apply_operator(const FermionHamiltonian& ham, std::span<const Complex> psi) {
  Amplitudes out(psi.size());
  apply_fermion(ham, psi, out);
  return out;
}

Eigen::MatrixXd fermion_dense(const FermionHamiltonian& ham) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << ham.n_modes);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  TermAction r{};
  for (Eigen::Index col = 0; col < dim; ++col)
    for (const auto& term : ham.terms)
      if (act(term, static_cast<Determinant>(col), r)) m(static_cast<Eigen::Index>(r.det), col) += r.value;
  return m;
}

Eigen::MatrixXd hamiltonian_in_basis(const FermionHamiltonian& ham,
                                     std::span<const Determinant> basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  TermAction r{};
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (const auto& term : ham.terms) {
      if (!act(term, basis[col], r)) continue;
      auto it = std::lower_bound(basis.begin(), basis.end(), r.det);
      if (it == basis.end() || *it != r.det) continue;
      m(it - basis.begin(), col) += r.value;
    }
  }
  return m;
}

SectorSpectrum diagonalize_in_basis(const FermionHamiltonian& ham, Sector sector,
                                    std::vector<Determinant> basis) {
  std::sort(basis.begin(), basis.end());
  SectorSpectrum spec;
  spec.sector = sector;
  if (basis.empty()) return spec;
  Eigen::MatrixXd h = hamiltonian_in_basis(ham, basis);
  // symmetrize away accumulation-order noise
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw Error("sector eigensolver failed to converge");
  spec.determinants = std::move(basis);
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();
  return spec;
}

SectorSpectrum exact_eigensolve(const FermionHamiltonian& ham, Sector sector, std::size_t cap) {
  const int n_orb = ham.n_modes / 2;
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > n_orb || sector.n_beta > n_orb)
    throw InvalidArgument("sector (" + std::to_string(sector.n_alpha) + ", " +
                          std::to_string(sector.n_beta) + ") is not valid for " +
                          std::to_string(n_orb) + " orbitals");
  const auto dim = sector_dimension(n_orb, sector);
  if (dim > cap)
    throw SectorTooLarge("sector dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(cap));
  return diagonalize_in_basis(ham, sector, sector_determinants(n_orb, sector));
}

}  // namespace qfci
