#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qfci/errors.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/statevector.hpp"
#include "qfci/types.hpp"

namespace qfci {

/// Energy interval [e_min, e_max] mapped onto phases in [0, 1):
/// U = exp(i tau (e_max - H)), tau = 2 pi / (e_max - e_min).
class EvolutionWindow {
 public:
  /// Throws InvalidArgument unless e_max > e_min (both finite).
  EvolutionWindow(double e_max, double e_min);

  double e_max() const noexcept { return e_max_; }
  double e_min() const noexcept { return e_min_; }
  double width() const noexcept { return e_max_ - e_min_; }
  /// Radians per hartree.
  double tau() const noexcept;

  /// Phase (turns) of the eigenvalue e^{i tau (e_max - E)}; not reduced mod 1.
  Turns phase_of(double energy) const noexcept { return (e_max_ - energy) / width(); }
  /// Inverse of phase_of.
  double energy_of(Turns phase) const noexcept { return e_max_ - phase * width(); }
  bool contains(double energy) const noexcept { return energy >= e_min_ && energy <= e_max_; }

 private:
  double e_max_;
  double e_min_;
};

/// Smallest N >= 1 with N >= tau^2 / epsilon. Throws InvalidArgument when
/// epsilon <= 0.
std::uint64_t recommend_slices(const EvolutionWindow& window, double epsilon);

/// One eigencomponent of a state: amplitude <u_i|psi>.
struct EigenComponent {
  std::size_t sector;
  Eigen::Index index;
  double energy;
  Complex amplitude;

  double weight() const noexcept { return std::norm(amplitude); }
};

/// Eigendecompositions for a set of particle-number sectors, with a lookup
/// from determinant to (sector, position).
class SpectralDecomposition {
 public:
  SpectralDecomposition(int n_modes, std::vector<SectorSpectrum> sectors);

  /// Every sector of the Fock space.
  static SpectralDecomposition full(const FermionHamiltonian& ham,
                                    std::size_t cap = kDefaultSectorCap);
  static SpectralDecomposition for_sectors(const FermionHamiltonian& ham,
                                           std::span<const Sector> sectors,
                                           std::size_t cap = kDefaultSectorCap);
  /// Sectors populated by `psi` (amplitudes over 2^n_modes).
  static SpectralDecomposition for_state(const FermionHamiltonian& ham,
                                         std::span<const Complex> psi,
                                         std::size_t cap = kDefaultSectorCap);

  int n_modes() const noexcept { return n_modes_; }
  const std::vector<SectorSpectrum>& sectors() const noexcept { return sectors_; }
  bool complete() const noexcept { return complete_; }

  /// Index of `sector` in sectors(), or -1.
  int find(Sector sector) const noexcept;
  bool covers(Determinant det) const noexcept { return where_[det].sector >= 0; }

  /// All eigencomponents of `psi`, including zero-weight ones. Throws
  /// MissingSector if psi has amplitude on an uncovered determinant.
  std::vector<EigenComponent> expand(std::span<const Complex> psi) const;

  /// Dense eigenvector of (sector, index) embedded in the 2^n Fock space.
  Amplitudes eigenvector(std::size_t sector, Eigen::Index index) const;

  /// Multiplies each eigencomponent of the selected branch by
  /// e^{2 pi i phase(E)}. `control < 0` acts on the full vector; otherwise
  /// only on basis states with that bit set, the remaining bits forming the
  /// system index.
  template <typename PhaseFn>
  void phase_components(std::span<Complex> amps, int control, PhaseFn&& phase_turns) const;

 private:
  struct Location {
    std::int32_t sector = -1;
    std::int32_t index = -1;
  };

  int n_modes_;
  std::vector<SectorSpectrum> sectors_;
  std::vector<Location> where_;
  bool complete_ = false;
};

/// Applies |0><0| (x) I + |1><1| (x) U^power on `joint`, U = e^{i tau (e_max - H)},
/// by phase-multiplying eigencomponents of the control-1 branch.
void controlled_u_power_exact(const SpectralDecomposition& spectra, const EvolutionWindow& window,
                              std::uint64_t power, StateVector& joint, int control);

/// Controlled e^{-i tau H power}. Followed by Gate::rz_phase of
/// power * e_max / width turns on the control it equals controlled_u_power_exact.
void controlled_evolution_power(const SpectralDecomposition& spectra,
                                const EvolutionWindow& window, std::uint64_t power,
                                StateVector& joint, int control);

/// Uncontrolled U^power on a system-register vector.
void apply_u_power_exact(const SpectralDecomposition& spectra, const EvolutionWindow& window,
                         std::uint64_t power, std::span<Complex> psi);

/// Ordering and slice count for the first-order product formula.
struct TrotterPlan {
  std::vector<std::size_t> term_order;
  std::uint64_t n_slices = 1;

  /// Emission order of the Hamiltonian's terms.
  static TrotterPlan in_emission_order(const FermionHamiltonian& ham, std::uint64_t n_slices);
  /// Throws InvalidArgument unless term_order is a permutation of
  /// [0, n_terms) and n_slices >= 1.
  void validate(std::size_t n_terms) const;
};

/// Precompiled first-order Trotter approximation of U = e^{i tau (e_max - H)}:
///   U ~ e^{i tau e_max} (prod_X e^{-i tau h_X / N})^N.
/// Each non-self-adjoint term is merged with its adjoint partner (at the
/// position of whichever comes first in the plan) so every factor is
/// unitary; each factor is the exact exponential on its <= 4 active modes.
class TrotterPropagator {
 public:
  TrotterPropagator(const FermionHamiltonian& ham, const EvolutionWindow& window, TrotterPlan plan);

  std::size_t factor_count() const noexcept { return factors_.size(); }
  const TrotterPlan& plan() const noexcept { return plan_; }

  /// psi <- U_trot^power psi on the system register.
  void apply(std::span<Complex> psi, std::uint64_t power = 1) const;

  /// Controlled version on a joint register.
  void apply_controlled(StateVector& joint, int control, std::uint64_t power) const;

 private:
  struct Factor {
    std::vector<int> modes;                // ascending active modes
    Determinant active_mask = 0;
    Determinant spectator_parity = 0;      // spectators contributing a sign
    Eigen::MatrixXcd plus;                 // exp(-i theta M0)
    Eigen::MatrixXcd minus;                // exp(+i theta M0)
  };

  void apply_slice(std::span<Complex> psi) const;

  int n_modes_;
  EvolutionWindow window_;
  TrotterPlan plan_;
  std::vector<Factor> factors_;
  Complex global_phase_;  // e^{i tau e_max} times all scalar (identity) factors^N
};

/// Convenience: compiles and applies one U_trot.
void trotter_u(const FermionHamiltonian& ham, const EvolutionWindow& window,
               const TrotterPlan& plan, std::span<Complex> psi);

/// Common interface for the phase-estimation drivers.
class ControlledUnitary {
 public:
  virtual ~ControlledUnitary() = default;
  virtual int n_system_qubits() const = 0;
  virtual void apply_controlled_power(StateVector& joint, int control,
                                      std::uint64_t power) const = 0;
};

class ExactControlledU final : public ControlledUnitary {
 public:
  ExactControlledU(const SpectralDecomposition& spectra, EvolutionWindow window)
      : spectra_(spectra), window_(window) {}
  int n_system_qubits() const override { return spectra_.n_modes(); }
  void apply_controlled_power(StateVector& joint, int control, std::uint64_t power) const override {
    controlled_u_power_exact(spectra_, window_, power, joint, control);
  }
  const EvolutionWindow& window() const noexcept { return window_; }

 private:
  const SpectralDecomposition& spectra_;
  EvolutionWindow window_;
};

class TrotterControlledU final : public ControlledUnitary {
 public:
  explicit TrotterControlledU(const TrotterPropagator& trotter, int n_modes)
      : trotter_(trotter), n_modes_(n_modes) {}
  int n_system_qubits() const override { return n_modes_; }
  void apply_controlled_power(StateVector& joint, int control, std::uint64_t power) const override {
    trotter_.apply_controlled(joint, control, power);
  }

 private:
  const TrotterPropagator& trotter_;
  int n_modes_;
};

// ---------------------------------------------------------------------------

template <typename PhaseFn>
void SpectralDecomposition::phase_components(std::span<Complex> amps, int control,
                                             PhaseFn&& phase_turns) const {
  const std::size_t sys_dim = std::size_t{1} << n_modes_;
  const auto joint_index = [control](std::size_t s) -> std::size_t {
    if (control < 0) return s;
    const std::size_t low = (std::size_t{1} << control) - 1;
    return ((s & ~low) << 1) | (std::size_t{1} << control) | (s & low);
  };
  if (!complete_) {
    for (std::size_t s = 0; s < sys_dim; ++s) {
      if (where_[s].sector < 0 && amps[joint_index(s)] != Complex{})
        throw MissingSector("state populates a sector without an eigendecomposition");
    }
  }
  thread_local Eigen::VectorXd xr, xi, cr, ci;
  for (const auto& spec : sectors_) {
    const auto d = static_cast<Eigen::Index>(spec.dimension());
    xr.resize(d);
    xi.resize(d);
    bool any = false;
    for (Eigen::Index j = 0; j < d; ++j) {
      const Complex a = amps[joint_index(spec.determinants[j])];
      xr[j] = a.real();
      xi[j] = a.imag();
      any = any || a != Complex{};
    }
    if (!any) continue;
    cr.noalias() = spec.eigenvectors.transpose() * xr;
    ci.noalias() = spec.eigenvectors.transpose() * xi;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double w = phase_turns(spec.eigenvalues[i]);
      const double ang = 2.0 * std::numbers::pi * (w - std::floor(w));
      const Complex c = Complex{cr[i], ci[i]} * Complex{std::cos(ang), std::sin(ang)};
      cr[i] = c.real();
      ci[i] = c.imag();
    }
    xr.noalias() = spec.eigenvectors * cr;
    xi.noalias() = spec.eigenvectors * ci;
    for (Eigen::Index j = 0; j < d; ++j) amps[joint_index(spec.determinants[j])] = {xr[j], xi[j]};
  }
}

}  // namespace qfci
