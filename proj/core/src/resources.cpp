#include "qfci/resources.hpp"

#include <cmath>

#include "qfci/errors.hpp"
#include "qfci/fock.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/statevector.hpp"

namespace qfci {

GateCounts& GateCounts::operator+=(const GateCounts& o) noexcept {
  hadamard += o.hadamard;
  cnot += o.cnot;
  rx += o.rx;
  rz += o.rz;
  controlled_rz += o.controlled_rz;
  total += o.total;
  return *this;
}

GateCounts count_string_exponential(const PauliWord& word, bool controlled) {
  if (word.is_identity()) throw EmptyString("Pauli string has no non-identity factor");
  GateCounts c;
  c.hadamard = 2 * static_cast<std::uint64_t>(word.count(Pauli::X));
  c.rx = 2 * static_cast<std::uint64_t>(word.count(Pauli::Y));
  c.cnot = 2 * static_cast<std::uint64_t>(word.weight() - 1);
  (controlled ? c.controlled_rz : c.rz) = 1;
  c.total = c.hadamard + c.rx + c.cnot + 1;
  return c;
}

GateCounts count_operator(const PauliOperator& op, bool controlled) {
  GateCounts sum;
  for (const auto& s : op.terms()) {
    if (s.word.is_identity()) {
      if (controlled) {
        ++sum.rz;
        ++sum.total;
      }
      continue;
    }
    sum += count_string_exponential(s.word, controlled);
  }
  return sum;
}

GateCounts count_controlled_u(const PauliOperator& op) { return count_operator(op, true); }

std::uint64_t fci_dimension(int n_orb, int n_alpha, int n_beta) {
  if (n_orb < 0 || n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb)
    throw InvalidArgument("invalid sector");
  return binomial(n_orb, n_alpha) * binomial(n_orb, n_beta);
}

MolecularIntegrals random_dense_integrals(int n_orb, std::mt19937_64& rng) {
  if (n_orb < 1) throw InvalidArgument("n_orb must be positive");
  const auto draw = [&rng] { return 2.0 * uniform01(rng) - 1.0; };
  MolecularIntegrals mi = MolecularIntegrals::zeros(n_orb, n_orb, n_orb % 2);
  mi.core_energy = draw();
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q <= p; ++q) mi.one_body(p, q) = mi.one_body(q, p) = draw();
  auto& g = mi.two_body;
  for (int p = 0; p < n_orb; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n_orb; ++r)
        for (int s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          const double v = draw();
          g(p, q, r, s) = g(q, p, r, s) = g(p, q, s, r) = g(q, p, s, r) = v;
          g(r, s, p, q) = g(s, r, p, q) = g(r, s, q, p) = g(s, r, q, p) = v;
        }
  return mi;
}

ScalingPoint scaling_point(const MolecularIntegrals& mi) {
  const PauliOperator op = jordan_wigner(build_second_quantized(to_spin_orbitals(mi)));
  ScalingPoint pt;
  pt.n_so = 2 * mi.n_orb;
  const int n_alpha = (mi.n_elec + mi.ms2) / 2;
  const int n_beta = mi.n_elec - n_alpha;
  pt.fci_dim = fci_dimension(mi.n_orb, n_alpha, n_beta);
  pt.n_strings = op.size();
  pt.counts = count_controlled_u(op);
  return pt;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("log-log fit needs distinct x values");
  return (n * sxy - sx * sy) / den;
}

}  // namespace qfci
