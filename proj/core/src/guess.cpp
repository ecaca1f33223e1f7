#include "qfci/guess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qfci/errors.hpp"
#include "qfci/fock.hpp"

namespace qfci {

namespace {

void check_orbital(int n_orb, int p, const char* what) {
  if (p < 0 || p >= n_orb)
    throw IndexOutOfRange(std::string(what) + " orbital " + std::to_string(p) + " outside [0, " +
                          std::to_string(n_orb) + ")");
}

void check_n_orb(int n_orb) {
  if (n_orb < 1 || n_orb > 32) throw InvalidArgument("n_orb must lie in [1, 32]");
}

}  // namespace

double GuessState::norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries) s += std::norm(e.amplitude);
  return std::sqrt(s);
}

void GuessState::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw DegenerateState("guess has zero norm");
  for (auto& e : entries) e.amplitude /= n;
}

void GuessState::validate() const {
  if (entries.empty()) throw ConsistencyError("guess has no entries");
  if (std::abs(norm() - 1.0) > 1e-12) throw ConsistencyError("guess is not normalized");
  const Determinant limit = n_qubits >= 64 ? ~Determinant{0} : (Determinant{1} << n_qubits) - 1;
  std::vector<Determinant> masks;
  masks.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.mask & ~limit) throw ConsistencyError("bitmask exceeds the register");
    masks.push_back(e.mask);
  }
  std::sort(masks.begin(), masks.end());
  if (std::adjacent_find(masks.begin(), masks.end()) != masks.end())
    throw ConsistencyError("duplicate bitmask in guess");
  if (mixed_sector) return;
  const int n_orb = n_qubits / 2;
  const Sector first = sector_of(entries.front().mask, n_orb);
  for (const auto& e : entries)
    if (sector_of(e.mask, n_orb) != first)
      throw ConsistencyError("guess mixes particle-number sectors without being flagged");
}

GuessState hf_determinant(int n_orb, int n_alpha, int n_beta) {
  check_n_orb(n_orb);
  if (n_alpha < 0 || n_beta < 0) throw InvalidArgument("negative electron count");
  if (n_alpha > n_orb || n_beta > n_orb)
    throw ElectronCountExceedsOrbitals("more electrons of one spin than orbitals");
  const Determinant alpha = (Determinant{1} << n_alpha) - 1;
  const Determinant beta = ((Determinant{1} << n_beta) - 1) << n_orb;
  return {2 * n_orb, {{alpha | beta, Complex{1.0, 0.0}}}, "HF", false};
}

void check_sector_metadata(Sector sector, const MolecularIntegrals& mi, std::ostream* warn) {
  std::string problem;
  if (sector.n_alpha + sector.n_beta != mi.n_elec)
    problem = "sector holds " + std::to_string(sector.n_alpha + sector.n_beta) +
              " electrons but the integral file declares NELEC=" + std::to_string(mi.n_elec);
  else if (sector.n_alpha - sector.n_beta != mi.ms2)
    problem = "sector has 2S_z=" + std::to_string(sector.n_alpha - sector.n_beta) +
              " but the integral file declares MS2=" + std::to_string(mi.ms2);
  if (problem.empty()) return;
  if (warn) *warn << "warning: " << problem << '\n';
  throw ConsistencyError(problem);
}

GuessState open_shell_csf(int n_orb, std::span<const int> core, int a, int b, Coupling coupling) {
  check_n_orb(n_orb);
  check_orbital(n_orb, a, "open-shell");
  check_orbital(n_orb, b, "open-shell");
  if (a == b) throw OverlapWithCore("open-shell orbitals must differ");
  Determinant closed = 0;
  for (int p : core) {
    check_orbital(n_orb, p, "core");
    closed |= (Determinant{1} << p) | (Determinant{1} << (p + n_orb));
  }
  const auto alpha = [](int p) { return Determinant{1} << p; };
  const auto beta = [n_orb](int p) { return Determinant{1} << (p + n_orb); };
  if (closed & (alpha(a) | alpha(b)))
    throw OverlapWithCore("open-shell orbital is doubly occupied in the core");

  const double s = 1.0 / std::sqrt(2.0);
  const double sign = coupling == Coupling::Singlet ? 1.0 : -1.0;
  GuessState g;
  g.n_qubits = 2 * n_orb;
  g.entries = {{closed | alpha(a) | beta(b), Complex{s, 0.0}},
               {closed | beta(a) | alpha(b), Complex{sign * s, 0.0}}};
  g.label = coupling == Coupling::Singlet ? "CSF singlet" : "CSF triplet";
  return g;
}

std::string occupation_string(Determinant mask, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((mask >> q) & 1u) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

GuessState load_amplitude_guess(std::istream& in, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be non-negative");
  GuessState g;
  g.n_qubits = -1;
  std::string line;
  std::size_t line_no = 0;
  std::size_t read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string amp_text, bits, extra;
    if (!(fields >> amp_text)) continue;  // blank or comment-only
    if (!(fields >> bits) || (fields >> extra))
      throw MalformedLine("expected `amplitude bitstring`", line_no);
    double amp = 0.0;
    try {
      std::size_t used = 0;
      amp = std::stod(amp_text, &used);
      if (used != amp_text.size()) throw std::invalid_argument(amp_text);
    } catch (const std::exception&) {
      throw MalformedLine("bad amplitude '" + amp_text + "'", line_no);
    }
    if (!std::isfinite(amp)) throw MalformedLine("non-finite amplitude", line_no);
    if (bits.size() > 64 || bits.find_first_not_of("01") != std::string::npos)
      throw MalformedLine("bad occupation string '" + bits + "'", line_no);
    if (bits.size() % 2 != 0) throw MalformedLine("occupation string length must be even", line_no);
    const int n = static_cast<int>(bits.size());
    if (g.n_qubits >= 0 && n != g.n_qubits)
      throw MalformedLine("occupation string length differs from earlier lines", line_no);
    g.n_qubits = n;
    ++read;
    if (!(std::abs(amp) > threshold)) continue;
    Determinant mask = 0;
    for (int q = 0; q < n; ++q)
      if (bits[static_cast<std::size_t>(q)] == '1') mask |= Determinant{1} << q;
    for (const auto& e : g.entries)
      if (e.mask == mask) throw MalformedLine("duplicate occupation string", line_no);
    g.entries.push_back({mask, Complex{amp, 0.0}});
  }
  if (g.entries.empty())
    throw EmptyAfterThreshold(std::to_string(read) + " configurations read, none above threshold");
  g.normalize();
  const int n_orb = g.n_qubits / 2;
  const Sector first = sector_of(g.entries.front().mask, n_orb);
  for (const auto& e : g.entries) g.mixed_sector = g.mixed_sector || sector_of(e.mask, n_orb) != first;
  std::ostringstream label;
  label << "amplitudes tresh " << threshold;
  g.label = label.str();
  return g;
}

GuessState load_amplitude_guess(const std::filesystem::path& path, double threshold) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open guess file " + path.string());
  return load_amplitude_guess(in, threshold);
}

void write_amplitude_guess(std::ostream& out, const GuessState& guess) {
  out << "# " << guess.label << '\n';
  const auto old = out.precision(17);
  for (const auto& e : guess.entries)
    out << e.amplitude.real() << "  " << occupation_string(e.mask, guess.n_qubits) << '\n';
  out.precision(old);
}

GuessState random_sector_state(int n_orb, Sector sector, std::mt19937_64& rng) {
  check_n_orb(n_orb);
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > n_orb || sector.n_beta > n_orb)
    throw ElectronCountExceedsOrbitals("sector does not fit the orbitals");
  // Box-Muller on our own uniforms keeps the stream portable across
  // standard libraries.
  const auto gaussian_pair = [&rng]() {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return Complex{r * std::cos(t), r * std::sin(t)};
  };
  GuessState g;
  g.n_qubits = 2 * n_orb;
  for (Determinant d : sector_determinants(n_orb, sector)) g.entries.push_back({d, gaussian_pair()});
  g.normalize();
  g.label = "random";
  return g;
}

StateVector to_statevector(const GuessState& guess) {
  Amplitudes amps(std::size_t{1} << guess.n_qubits);
  for (const auto& e : guess.entries) {
    if (e.mask >= amps.size()) throw ConsistencyError("bitmask exceeds the register");
    amps[e.mask] = e.amplitude;
  }
  return StateVector::from_amplitudes(std::move(amps));
}

GuessState from_statevector(const StateVector& psi, std::string label) {
  GuessState g;
  g.n_qubits = psi.n_qubits();
  g.label = std::move(label);
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (amps[i] != Complex{}) g.entries.push_back({static_cast<Determinant>(i), amps[i]});
  if (!g.entries.empty()) {
    const int n_orb = g.n_qubits / 2;
    const Sector first = sector_of(g.entries.front().mask, n_orb);
    for (const auto& e : g.entries)
      g.mixed_sector = g.mixed_sector || sector_of(e.mask, n_orb) != first;
  }
  return g;
}

GuessState casci_guess(const FermionHamiltonian& ham, int n_orb, std::span<const int> core,
                       std::span<const int> active, Sector active_sector, int root) {
  check_n_orb(n_orb);
  if (ham.n_modes != 2 * n_orb) throw DimensionMismatch("Hamiltonian does not match n_orb");
  const int n_act = static_cast<int>(active.size());
  if (n_act < 1) throw InvalidArgument("empty active space");
  Determinant closed = 0;
  Determinant used = 0;
  for (int p : core) {
    check_orbital(n_orb, p, "core");
    closed |= (Determinant{1} << p) | (Determinant{1} << (p + n_orb));
    used |= Determinant{1} << p;
  }
  for (int p : active) {
    check_orbital(n_orb, p, "active");
    if (used & (Determinant{1} << p)) throw OverlapWithCore("orbital listed twice in core/active");
    used |= Determinant{1} << p;
  }
  // Map active-space determinants onto full-register bitmasks.
  std::vector<Determinant> basis;
  for (Determinant local : sector_determinants(n_act, active_sector)) {
    Determinant mask = closed;
    for (int i = 0; i < n_act; ++i) {
      if ((local >> i) & 1u) mask |= Determinant{1} << active[static_cast<std::size_t>(i)];
      if ((local >> (i + n_act)) & 1u)
        mask |= Determinant{1} << (active[static_cast<std::size_t>(i)] + n_orb);
    }
    basis.push_back(mask);
  }
  std::sort(basis.begin(), basis.end());
  const int n_core = static_cast<int>(core.size());
  const Sector full{active_sector.n_alpha + n_core, active_sector.n_beta + n_core};
  const SectorSpectrum spec = diagonalize_in_basis(ham, full, basis);
  if (root < 0 || root >= static_cast<int>(spec.dimension()))
    throw IndexOutOfRange("CASCI root out of range");
  GuessState g;
  g.n_qubits = 2 * n_orb;
  for (std::size_t j = 0; j < spec.dimension(); ++j)
    g.entries.push_back({spec.determinants[j], Complex{spec.eigenvectors(static_cast<Eigen::Index>(j), root), 0.0}});
  g.normalize();
  g.label = "CAS(" + std::to_string(active_sector.n_alpha + active_sector.n_beta) + "," +
            std::to_string(n_act) + ")";
  return g;
}

}  // namespace qfci
