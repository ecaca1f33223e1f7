#include "qfci/propagator.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "qfci/fock.hpp"

namespace qfci {

EvolutionWindow::EvolutionWindow(double e_max, double e_min) : e_max_(e_max), e_min_(e_min) {
  if (!std::isfinite(e_max) || !std::isfinite(e_min) || !(e_max > e_min))
    throw InvalidArgument("evolution window requires finite e_max > e_min");
}

double EvolutionWindow::tau() const noexcept { return 2.0 * std::numbers::pi / width(); }

std::uint64_t recommend_slices(const EvolutionWindow& window, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const double t = window.tau();
  const double n = std::ceil(t * t / epsilon);
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

// ---------------------------------------------------------------------------
// SpectralDecomposition

SpectralDecomposition::SpectralDecomposition(int n_modes, std::vector<SectorSpectrum> sectors)
    : n_modes_(n_modes), sectors_(std::move(sectors)) {
  if (n_modes < 1 || n_modes > 28) throw InvalidArgument("unsupported mode count");
  where_.assign(std::size_t{1} << n_modes, Location{});
  std::size_t covered = 0;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const auto& dets = sectors_[s].determinants;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      auto& loc = where_.at(dets[i]);
      if (loc.sector >= 0) throw InvalidArgument("determinant appears in two sectors");
      loc = {static_cast<std::int32_t>(s), static_cast<std::int32_t>(i)};
      ++covered;
    }
  }
  complete_ = covered == where_.size();
}

SpectralDecomposition SpectralDecomposition::full(const FermionHamiltonian& ham, std::size_t cap) {
  const int n_orb = ham.n_modes / 2;
  std::vector<Sector> all;
  for (int b = 0; b <= n_orb; ++b)
    for (int a = 0; a <= n_orb; ++a) all.push_back({a, b});
  return for_sectors(ham, all, cap);
}

SpectralDecomposition SpectralDecomposition::for_sectors(const FermionHamiltonian& ham,
                                                         std::span<const Sector> sectors,
                                                         std::size_t cap) {
  std::vector<SectorSpectrum> spectra;
  spectra.reserve(sectors.size());
  for (const auto& s : sectors) spectra.push_back(exact_eigensolve(ham, s, cap));
  return SpectralDecomposition(ham.n_modes, std::move(spectra));
}

SpectralDecomposition SpectralDecomposition::for_state(const FermionHamiltonian& ham,
                                                       std::span<const Complex> psi,
                                                       std::size_t cap) {
  const int n_orb = ham.n_modes / 2;
  if (psi.size() != (std::size_t{1} << ham.n_modes))
    throw DimensionMismatch("state size does not match the Hamiltonian's Fock space");
  std::vector<Sector> sectors;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    if (psi[b] == Complex{}) continue;
    const Sector s = sector_of(b, n_orb);
    if (std::find(sectors.begin(), sectors.end(), s) == sectors.end()) sectors.push_back(s);
  }
  std::sort(sectors.begin(), sectors.end());
  return for_sectors(ham, sectors, cap);
}

int SpectralDecomposition::find(Sector sector) const noexcept {
  for (std::size_t i = 0; i < sectors_.size(); ++i)
    if (sectors_[i].sector == sector) return static_cast<int>(i);
  return -1;
}

std::vector<EigenComponent> SpectralDecomposition::expand(std::span<const Complex> psi) const {
  if (psi.size() != where_.size()) throw DimensionMismatch("state size does not match decomposition");
  for (std::size_t b = 0; b < psi.size(); ++b)
    if (where_[b].sector < 0 && psi[b] != Complex{})
      throw MissingSector("state populates a sector without an eigendecomposition");
  std::vector<EigenComponent> out;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const auto& spec = sectors_[s];
    const auto d = static_cast<Eigen::Index>(spec.dimension());
    Eigen::VectorXcd x(d);
    for (Eigen::Index j = 0; j < d; ++j) x[j] = psi[spec.determinants[j]];
    const Eigen::VectorXcd c = spec.eigenvectors.transpose().cast<Complex>() * x;
    for (Eigen::Index i = 0; i < d; ++i) out.push_back({s, i, spec.eigenvalues[i], c[i]});
  }
  return out;
}

Amplitudes SpectralDecomposition::eigenvector(std::size_t sector, Eigen::Index index) const {
  const auto& spec = sectors_.at(sector);
  Amplitudes v(where_.size());
  for (std::size_t j = 0; j < spec.dimension(); ++j)
    v[spec.determinants[j]] = spec.eigenvectors(static_cast<Eigen::Index>(j), index);
  return v;
}

// ---------------------------------------------------------------------------
// Exact propagation

namespace {

void check_joint(const SpectralDecomposition& spectra, const StateVector& joint, int control) {
  if (joint.n_qubits() != spectra.n_modes() + 1)
    throw DimensionMismatch("joint register must hold one control plus " +
                            std::to_string(spectra.n_modes()) + " system qubits");
  if (control < 0 || control >= joint.n_qubits())
    throw IndexOutOfRange("control qubit outside the joint register");
}

// power * phase reduced to [0, 1). For power = 2^j the product is exact.
double scaled_turns(std::uint64_t power, double phase) {
  const double w = static_cast<double>(power) * phase;
  return w - std::floor(w);
}

}  // namespace

void controlled_u_power_exact(const SpectralDecomposition& spectra, const EvolutionWindow& window,
                              std::uint64_t power, StateVector& joint, int control) {
  check_joint(spectra, joint, control);
  spectra.phase_components(joint.unitary_view(), control, [&](double e) {
    return scaled_turns(power, window.phase_of(e));
  });
}

void controlled_evolution_power(const SpectralDecomposition& spectra,
                                const EvolutionWindow& window, std::uint64_t power,
                                StateVector& joint, int control) {
  check_joint(spectra, joint, control);
  spectra.phase_components(joint.unitary_view(), control, [&](double e) {
    return scaled_turns(power, -e / window.width());
  });
}

void apply_u_power_exact(const SpectralDecomposition& spectra, const EvolutionWindow& window,
                         std::uint64_t power, std::span<Complex> psi) {
  if (psi.size() != (std::size_t{1} << spectra.n_modes()))
    throw DimensionMismatch("state size does not match decomposition");
  spectra.phase_components(psi, -1, [&](double e) { return scaled_turns(power, window.phase_of(e)); });
}

// ---------------------------------------------------------------------------
// Trotter

TrotterPlan TrotterPlan::in_emission_order(const FermionHamiltonian& ham, std::uint64_t n_slices) {
  TrotterPlan plan;
  plan.term_order.resize(ham.size());
  for (std::size_t i = 0; i < ham.size(); ++i) plan.term_order[i] = i;
  plan.n_slices = n_slices;
  return plan;
}

void TrotterPlan::validate(std::size_t n_terms) const {
  if (n_slices < 1) throw InvalidArgument("Trotter plan needs at least one slice");
  if (term_order.size() != n_terms) throw InvalidArgument("term order is not a permutation");
  std::vector<char> seen(n_terms, 0);
  for (auto i : term_order) {
    if (i >= n_terms || seen[i]) throw InvalidArgument("term order is not a permutation");
    seen[i] = 1;
  }
}

namespace {

using OpsKey = std::vector<std::pair<int, bool>>;

OpsKey key_of(const std::vector<LadderOp>& ops) {
  OpsKey k;
  for (const auto& op : ops) k.emplace_back(op.mode, op.creation);
  return k;
}

OpsKey adjoint_key(const std::vector<LadderOp>& ops) {
  OpsKey k;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) k.emplace_back(it->mode, !it->creation);
  return k;
}

Determinant deposit(std::size_t local, const std::vector<int>& modes) {
  Determinant d = 0;
  for (std::size_t b = 0; b < modes.size(); ++b)
    if ((local >> b) & 1u) d |= Determinant{1} << modes[b];
  return d;
}

std::size_t extract(Determinant det, const std::vector<int>& modes) {
  std::size_t local = 0;
  for (std::size_t b = 0; b < modes.size(); ++b)
    if ((det >> modes[b]) & 1u) local |= std::size_t{1} << b;
  return local;
}

}  // namespace

TrotterPropagator::TrotterPropagator(const FermionHamiltonian& ham, const EvolutionWindow& window,
                                     TrotterPlan plan)
    : n_modes_(ham.n_modes), window_(window), plan_(std::move(plan)) {
  plan_.validate(ham.size());
  const double theta = window_.tau() / static_cast<double>(plan_.n_slices);

  std::map<OpsKey, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < ham.size(); ++i) by_key[key_of(ham.terms[i].ops)].push_back(i);

  std::vector<char> used(ham.size(), 0);
  double scalar = 0.0;
  for (std::size_t x : plan_.term_order) {
    if (used[x]) continue;
    used[x] = 1;
    const auto& term = ham.terms[x];
    if (term.ops.empty()) {
      scalar += term.coefficient;
      continue;
    }
    std::vector<std::size_t> group{x};
    const OpsKey adj = adjoint_key(term.ops);
    if (adj != key_of(term.ops)) {
      auto it = by_key.find(adj);
      std::size_t partner = ham.size();
      if (it != by_key.end())
        for (auto j : it->second)
          if (!used[j]) {
            partner = j;
            break;
          }
      // Without a partner the group is kept only if it turns out Hermitian
      // (e.g. an identically zero term); the check below rejects the rest.
      if (partner != ham.size()) {
        used[partner] = 1;
        group.push_back(partner);
      }
    }

    Factor f;
    Determinant parity = 0;
    for (const auto& op : term.ops) {
      if (op.mode < 0 || op.mode >= n_modes_) throw IndexOutOfRange("term mode outside register");
      f.active_mask |= Determinant{1} << op.mode;
      parity ^= (Determinant{1} << op.mode) - 1;
    }
    for (int m = 0; m < n_modes_; ++m)
      if ((f.active_mask >> m) & 1u) f.modes.push_back(m);
    f.spectator_parity = parity & ~f.active_mask;

    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << f.modes.size());
    Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(local_dim, local_dim);
    TermAction r{};
    for (Eigen::Index col = 0; col < local_dim; ++col) {
      const Determinant d = deposit(static_cast<std::size_t>(col), f.modes);
      for (auto idx : group)
        if (act(ham.terms[idx], d, r)) m0(static_cast<Eigen::Index>(extract(r.det, f.modes)), col) += r.value;
    }
    if ((m0 - m0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m0.cwiseAbs().maxCoeff()))
      throw InvalidArgument("term group " + std::to_string(x) + " is not Hermitian");
    if (m0.isZero(0.0)) continue;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m0);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<Complex>();
    Eigen::VectorXcd ph_plus(local_dim), ph_minus(local_dim);
    for (Eigen::Index i = 0; i < local_dim; ++i) {
      const double a = theta * es.eigenvalues()[i];
      ph_plus[i] = {std::cos(a), -std::sin(a)};
      ph_minus[i] = {std::cos(a), std::sin(a)};
    }
    f.plus = v * ph_plus.asDiagonal() * v.adjoint();
    f.minus = v * ph_minus.asDiagonal() * v.adjoint();
    factors_.push_back(std::move(f));
  }
  const double total = window_.tau() * (window_.e_max() - scalar);
  global_phase_ = {std::cos(total), std::sin(total)};
}

void TrotterPropagator::apply_slice(std::span<Complex> psi) const {
  const std::size_t dim = psi.size();
  Complex in[16];
  for (const auto& f : factors_) {
    const std::size_t local_dim = std::size_t{1} << f.modes.size();
    Determinant offsets[16];
    for (std::size_t t = 0; t < local_dim; ++t) offsets[t] = deposit(t, f.modes);
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & f.active_mask) continue;
      const bool odd = std::popcount(base & f.spectator_parity) & 1;
      const Eigen::MatrixXcd& u = odd ? f.minus : f.plus;
      for (std::size_t t = 0; t < local_dim; ++t) in[t] = psi[base | offsets[t]];
      for (std::size_t row = 0; row < local_dim; ++row) {
        Complex acc{};
        for (std::size_t col = 0; col < local_dim; ++col)
          acc += u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) * in[col];
        psi[base | offsets[row]] = acc;
      }
    }
  }
}

void TrotterPropagator::apply(std::span<Complex> psi, std::uint64_t power) const {
  if (psi.size() != (std::size_t{1} << n_modes_))
    throw DimensionMismatch("state size does not match the Trotter propagator");
  for (std::uint64_t p = 0; p < power; ++p) {
    for (std::uint64_t s = 0; s < plan_.n_slices; ++s) apply_slice(psi);
    for (auto& a : psi) a *= global_phase_;
  }
}

void TrotterPropagator::apply_controlled(StateVector& joint, int control, std::uint64_t power) const {
  if (joint.n_qubits() != n_modes_ + 1)
    throw DimensionMismatch("joint register must hold one control plus the system");
  if (control < 0 || control >= joint.n_qubits())
    throw IndexOutOfRange("control qubit outside the joint register");
  auto amps = joint.unitary_view();
  const std::size_t low = (std::size_t{1} << control) - 1;
  const auto joint_index = [&](std::size_t s) {
    return ((s & ~low) << 1) | (std::size_t{1} << control) | (s & low);
  };
  Amplitudes branch(std::size_t{1} << n_modes_);
  for (std::size_t s = 0; s < branch.size(); ++s) branch[s] = amps[joint_index(s)];
  apply(branch, power);
  for (std::size_t s = 0; s < branch.size(); ++s) amps[joint_index(s)] = branch[s];
}

void trotter_u(const FermionHamiltonian& ham, const EvolutionWindow& window,
               const TrotterPlan& plan, std::span<Complex> psi) {
  TrotterPropagator(ham, window, plan).apply(psi, 1);
}

}  // namespace qfci
