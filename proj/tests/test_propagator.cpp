#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qfci/errors.hpp"
#include "qfci/fock.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/propagator.hpp"

using namespace qfci;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const MolecularIntegrals& h2_integrals() {
  static const auto mi = parse_fcidump_file(oracle::data_path(oracle::kH2Fixture));
  return mi;
}

const FermionHamiltonian& h2() {
  static const auto ham = build_second_quantized(to_spin_orbitals(h2_integrals()));
  return ham;
}

// U = exp(i tau (e_max - H)) from the dense oracle Hamiltonian.
Eigen::MatrixXcd dense_u(const Eigen::MatrixXd& H, const EvolutionWindow& w, double power = 1.0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXcd V = es.eigenvectors().cast<Complex>();
  Eigen::VectorXcd d(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    d[i] = std::polar(1.0, power * w.tau() * (w.e_max() - es.eigenvalues()[i]));
  return V * d.asDiagonal() * V.adjoint();
}

Amplitudes random_sector_vector(int n_orb, Sector s, std::mt19937_64& rng) {
  return oracle::random_state_on(sector_determinants(n_orb, s), std::size_t{1} << (2 * n_orb), rng);
}

double distance(std::span<const Complex> a, const Eigen::VectorXcd& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[static_cast<Eigen::Index>(i)]);
  return std::sqrt(s);
}

Eigen::VectorXcd as_vector(std::span<const Complex> a) {
  return Eigen::Map<const Eigen::VectorXcd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

}  // namespace

TEST(Window, Validation) {
  EXPECT_THROW(EvolutionWindow(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(EvolutionWindow(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(EvolutionWindow(NAN, 1.0), InvalidArgument);
  const EvolutionWindow w(-37.5, -39.0);
  EXPECT_NEAR(w.tau(), kTwoPi / 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(w.energy_of(w.phase_of(-38.2)), -38.2);
}

TEST(RecommendSlices, Examples) {
  EXPECT_EQ(recommend_slices(EvolutionWindow(kTwoPi, 0.0), 1.0), 1u);
  const EvolutionWindow paper(-37.5, -39.0);
  const long double tau = 2.0L * std::numbers::pi_v<long double> / 1.5L;
  const auto expect = static_cast<std::uint64_t>(std::ceil(tau * tau / 1e-6L));
  EXPECT_EQ(recommend_slices(paper, 1e-6), expect);
  EXPECT_EQ(recommend_slices(paper, 1e-6), 17545964u);
  EXPECT_EQ(recommend_slices(paper, 100.0), 1u);
  EXPECT_THROW(recommend_slices(paper, 0.0), InvalidArgument);
}

TEST(ExactPropagator, EigenstatePhaseOnReadout) {
  const EvolutionWindow w(1.0, -2.0);
  const auto spectra = SpectralDecomposition::full(h2());
  const auto s = static_cast<std::size_t>(spectra.find({1, 1}));
  const auto u0 = spectra.eigenvector(s, 0);
  auto joint = StateVector::from_amplitudes(u0).with_ancilla();
  apply_gate(joint, Gate::hadamard(), 4);
  controlled_u_power_exact(spectra, w, 1, joint, 4);
  const double e = spectra.sectors()[s].eigenvalues[0];
  const double expect = kTwoPi * (w.e_max() - e) / w.width();
  for (std::size_t i = 0; i < 16; ++i) {
    if (std::abs(u0[i]) < 1e-6) continue;
    const Complex ratio = joint[i | 16] / joint[i];
    EXPECT_NEAR(std::abs(ratio - std::polar(1.0, expect)), 0.0, 1e-12);
  }
}

TEST(ExactPropagator, WindowEdgeIsIdentity) {
  const auto spectra = SpectralDecomposition::full(h2());
  const auto s = static_cast<std::size_t>(spectra.find({1, 1}));
  const double e0 = spectra.sectors()[s].eigenvalues[0];
  const EvolutionWindow w(e0, e0 - 2.0);
  const auto u0 = spectra.eigenvector(s, 0);
  auto joint = StateVector::from_amplitudes(u0).with_ancilla();
  apply_gate(joint, Gate::hadamard(), 4);
  const auto before = joint;
  controlled_u_power_exact(spectra, w, 1, joint, 4);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(std::abs(joint[i] - before[i]), 0.0, 1e-12);
}

TEST(ExactPropagator, MatchesDenseOracleForEveryEigenpairAndPower) {
  const EvolutionWindow w(1.0, -2.0);
  const auto spectra = SpectralDecomposition::full(h2());
  const Eigen::MatrixXd H = oracle::dense_hamiltonian(h2_integrals());
  std::mt19937_64 rng(4);
  std::vector<std::uint64_t> all(16);
  for (std::uint64_t i = 0; i < 16; ++i) all[i] = i;
  for (std::uint64_t power : {1ull, 2ull, 8ull, 1ull << 19}) {
    auto psi = oracle::random_state_on(all, 16, rng);
    const Eigen::VectorXcd ref = dense_u(H, w, static_cast<double>(power)) * as_vector(psi);
    apply_u_power_exact(spectra, w, power, psi);
    // large powers amplify eigenvalue rounding: allow power * 1e-13
    EXPECT_LT(distance(psi, ref), 1e-10 + static_cast<double>(power) * 1e-13) << power;
  }
  for (std::size_t s = 0; s < spectra.sectors().size(); ++s)
    for (Eigen::Index i = 0; i < spectra.sectors()[s].eigenvalues.size(); ++i) {
      auto v = spectra.eigenvector(s, i);
      const auto before = v;
      apply_u_power_exact(spectra, w, 1, v);
      const Complex ph = std::polar(1.0, w.tau() * (w.e_max() - spectra.sectors()[s].eigenvalues[i]));
      for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(std::abs(v[k] - ph * before[k]), 0.0, 1e-10);
    }
}

TEST(ExactPropagator, PowerCompositionAndNorm) {
  const EvolutionWindow w(0.5, -1.5);
  const auto spectra = SpectralDecomposition::full(h2());
  std::mt19937_64 rng(8);
  std::vector<std::uint64_t> all(32);
  for (std::uint64_t i = 0; i < 32; ++i) all[i] = i;
  auto a = StateVector::from_amplitudes(oracle::random_state_on(all, 32, rng));
  auto b = a;
  controlled_u_power_exact(spectra, w, 6, a, 4);
  controlled_u_power_exact(spectra, w, 3, b, 4);
  controlled_u_power_exact(spectra, w, 3, b, 4);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-10);
  EXPECT_NEAR(a.norm(), 1.0, 1e-10);
}

TEST(ExactPropagator, CircuitIdentitySplitForm) {
  const EvolutionWindow w(0.7, -1.9);
  const auto spectra = SpectralDecomposition::full(h2());
  std::mt19937_64 rng(10);
  std::vector<std::uint64_t> all(32);
  for (std::uint64_t i = 0; i < 32; ++i) all[i] = i;
  const auto start = StateVector::from_amplitudes(oracle::random_state_on(all, 32, rng));
  for (std::uint64_t power : {1ull, 5ull, 1024ull}) {
    auto a = start, b = start;
    controlled_u_power_exact(spectra, w, power, a, 4);
    controlled_evolution_power(spectra, w, power, b, 4);
    const double turns = static_cast<double>(power) * w.e_max() / w.width();
    apply_gate(b, Gate::rz_phase(turns - std::floor(turns)), 4);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-9);
  }
}

TEST(ExactPropagator, MissingSector) {
  const EvolutionWindow w(1.0, -2.0);
  const std::vector<Sector> only{{1, 1}};
  const auto spectra = SpectralDecomposition::for_sectors(h2(), only);
  EXPECT_FALSE(spectra.complete());
  std::vector<Complex> psi(16);
  psi[0b0011] = 1.0;  // two alpha electrons
  auto joint = StateVector::from_amplitudes(psi).with_ancilla();
  apply_gate(joint, Gate::hadamard(), 4);
  EXPECT_THROW(controlled_u_power_exact(spectra, w, 1, joint, 4), MissingSector);
  std::vector<Complex> ok(16);
  ok[0b0101] = 1.0;
  auto j2 = StateVector::from_amplitudes(ok).with_ancilla();
  EXPECT_NO_THROW(controlled_u_power_exact(spectra, w, 1, j2, 4));
  EXPECT_TRUE(SpectralDecomposition::for_state(h2(), ok).covers(0b0101));
}

TEST(Trotter, PlanValidation) {
  TrotterPlan p = TrotterPlan::in_emission_order(h2(), 4);
  EXPECT_NO_THROW(p.validate(h2().size()));
  p.term_order[0] = p.term_order[1];
  EXPECT_THROW(p.validate(h2().size()), InvalidArgument);
  TrotterPlan zero = TrotterPlan::in_emission_order(h2(), 0);
  EXPECT_THROW(zero.validate(h2().size()), InvalidArgument);
  EXPECT_THROW(TrotterPropagator(h2(), EvolutionWindow(1, -2), zero), InvalidArgument);
}

TEST(Trotter, CommutingHamiltonianIsExact) {
  auto mi = MolecularIntegrals::zeros(3, 2, 0);
  mi.core_energy = 0.4;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int p = 0; p < 3; ++p) {
    mi.one_body(p, p) = u(rng);
    for (int q = 0; q <= p; ++q) mi.two_body(p, p, q, q) = mi.two_body(q, q, p, p) = 0.5 * u(rng);
  }
  const auto ham = build_second_quantized(to_spin_orbitals(mi));
  const EvolutionWindow w(2.0, -3.0);
  const Eigen::MatrixXd H = oracle::dense_hamiltonian(mi);
  std::vector<std::uint64_t> all(64);
  for (std::uint64_t i = 0; i < 64; ++i) all[i] = i;
  for (std::uint64_t n : {1ull, 3ull}) {
    auto psi = oracle::random_state_on(all, 64, rng);
    const Eigen::VectorXcd ref = dense_u(H, w) * as_vector(psi);
    trotter_u(ham, w, TrotterPlan::in_emission_order(ham, n), psi);
    EXPECT_LT(distance(psi, ref), 1e-12);
  }
}

TEST(Trotter, FirstOrderErrorHalvesWithSlices) {
  const EvolutionWindow w(1.0, -2.0);
  const Eigen::MatrixXcd U = dense_u(oracle::dense_hamiltonian(h2_integrals()), w);
  std::mt19937_64 rng(15);
  const auto psi0 = random_sector_vector(2, {1, 1}, rng);
  const Eigen::VectorXcd ref = U * as_vector(psi0);
  const auto err = [&](std::uint64_t n) {
    auto psi = psi0;
    trotter_u(h2(), w, TrotterPlan::in_emission_order(h2(), n), psi);
    return distance(psi, ref);
  };
  for (std::uint64_t n0 : {4ull, 16ull}) {
    const double ratio = err(2 * n0) / err(n0);
    EXPECT_GE(ratio, 0.4) << n0;
    EXPECT_LE(ratio, 0.6) << n0;
  }
}

TEST(Trotter, RecommendedSlicesMeetTolerance) {
  // A wide window keeps tau^2 / epsilon affordable.
  const EvolutionWindow w(2.0, -8.0);
  const double eps = 1e-6;
  const auto n = recommend_slices(w, eps);
  const TrotterPropagator trot(h2(), w, TrotterPlan::in_emission_order(h2(), n));
  const Eigen::MatrixXcd U = dense_u(oracle::dense_hamiltonian(h2_integrals()), w);
  std::mt19937_64 rng(16);
  for (int t = 0; t < 2; ++t) {
    auto psi = random_sector_vector(2, {1, 1}, rng);
    const Eigen::VectorXcd ref = U * as_vector(psi);
    trot.apply(psi);
    const double c = distance(psi, ref) / eps;
    EXPECT_LE(c, 10.0);
    RecordProperty("empirical_constant_" + std::to_string(t), std::to_string(c));
  }
}

TEST(Trotter, PowersControlAndNorm) {
  const EvolutionWindow w(1.0, -2.0);
  const TrotterPropagator trot(h2(), w, TrotterPlan::in_emission_order(h2(), 8));
  std::mt19937_64 rng(17);
  std::vector<std::uint64_t> all(16);
  for (std::uint64_t i = 0; i < 16; ++i) all[i] = i;
  const auto psi0 = oracle::random_state_on(all, 16, rng);
  auto a = psi0, b = psi0;
  trot.apply(a, 3);
  for (int i = 0; i < 3; ++i) trot.apply(b);
  EXPECT_LT(distance(a, as_vector(b)), 1e-13);
  double nrm = 0.0;
  for (auto x : a) nrm += std::norm(x);
  EXPECT_NEAR(nrm, 1.0, 1e-10);

  // controlled form: control-0 branch untouched, control-1 branch = U^3 psi
  auto joint = StateVector::from_amplitudes(psi0).with_ancilla();
  apply_gate(joint, Gate::hadamard(), 4);
  const auto before = joint;
  trot.apply_controlled(joint, 4, 3);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(joint[i], before[i]);
    EXPECT_NEAR(std::abs(joint[i | 16] - a[i] / std::sqrt(2.0)), 0.0, 1e-13);
  }
}
