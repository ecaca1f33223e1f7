#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace qfci {

/// Dense rank-4 real tensor with row-major (i, j, k, l) layout.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int i, int j, int k, int l) noexcept {
    return data_[index(i, j, k, l)];
  }
  double operator()(int i, int j, int k, int l) const noexcept {
    return data_[index(i, j, k, l)];
  }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t index(int i, int j, int k, int l) const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Spatial-orbital integrals as read from an FCIDUMP file.
///
/// `two_body(p, q, r, s)` is the chemists'-notation integral (pq|rs) and is
/// stored fully expanded over its 8-fold permutational symmetry.
struct MolecularIntegrals {
  int n_orb = 0;
  int n_elec = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  Eigen::MatrixXd one_body;
  Tensor4 two_body;
  std::vector<int> orbsym;  // parsed, not used by the algorithms

  static MolecularIntegrals zeros(int n_orb, int n_elec = 0, int ms2 = 0);
};

/// Spin-orbital integrals in blocked ordering: index p < n_orb is the alpha
/// spin orbital of spatial orbital p, index n_orb + p is its beta partner.
///
/// `g(p, q, r, s)` is the physicists'-notation integral <pq|rs>.
struct SpinOrbitalIntegrals {
  int n_so = 0;
  double core_energy = 0.0;
  Eigen::MatrixXd h;
  Tensor4 g;

  int n_orb() const noexcept { return n_so / 2; }
};

inline int spin_of(int spin_orbital, int n_orb) noexcept {
  return spin_orbital < n_orb ? 0 : 1;
}
inline int spatial_of(int spin_orbital, int n_orb) noexcept {
  return spin_orbital < n_orb ? spin_orbital : spin_orbital - n_orb;
}

/// Parses an FCIDUMP stream. Throws ParseError (with line number) on
/// malformed input and ConsistencyError on conflicting duplicate entries.
MolecularIntegrals parse_fcidump(std::istream& in);
MolecularIntegrals parse_fcidump_file(const std::filesystem::path& path);

/// Writes integrals in FCIDUMP form (canonical 8-fold unique entries only).
void write_fcidump(std::ostream& out, const MolecularIntegrals& mi, double tol = 0.0);

SpinOrbitalIntegrals to_spin_orbitals(const MolecularIntegrals& mi);

}  // namespace qfci
