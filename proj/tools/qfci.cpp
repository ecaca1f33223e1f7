// qfci: batch driver for iterative phase estimation scans.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfci/errors.hpp"
#include "qfci/guess.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/integrals.hpp"
#include "qfci/phase_estimation.hpp"
#include "qfci/propagator.hpp"
#include "qfci/scan.hpp"

namespace {

qfci::Sector parse_sector(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw qfci::InvalidArgument("sector must be n_alpha,n_beta");
  return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

qfci::IpeaVariant parse_variant(const std::string& v) {
  return (v == "B" || v == "b") ? qfci::IpeaVariant::B : qfci::IpeaVariant::A;
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw qfci::Error("cannot write " + path);
  fn(out);
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<int> bits;
  std::optional<double> emax, emin;
  std::vector<int> reps;
  std::optional<int> samples, threads;
  std::optional<std::string> csv, json;
};

int cmd_run(const RunOptions& o) {
  qfci::ScanConfig cfg = qfci::load_scan_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.variant) cfg.variant = parse_variant(*o.variant);
  if (o.bits) cfg.m = *o.bits;
  if (o.emax) cfg.e_max = *o.emax;
  if (o.emin) cfg.e_min = *o.emin;
  if (!o.reps.empty()) cfg.repetitions = o.reps;
  if (o.samples) cfg.samples = *o.samples;
  if (o.threads) cfg.threads = *o.threads;
  if (o.csv) cfg.csv = *o.csv;
  if (o.json) cfg.json = *o.json;

  const auto report = qfci::run_scan(cfg);
  if (cfg.csv.empty())
    qfci::write_scan_csv(std::cout, report);
  qfci::write_scan_outputs(report);

  int failed = 0;
  for (const auto& p : report.points) {
    if (p.error) {
      ++failed;
      std::cerr << "point '" << p.label << "' failed: " << *p.error << '\n';
    } else if (!p.window_brackets) {
      std::cerr << "point '" << p.label << "': guess populates eigenvalues outside the window\n";
    }
  }
  if (cfg.variant == qfci::IpeaVariant::A && cfg.samples > 0) {
    for (const auto& p : report.points)
      if (p.min_energy)
        std::cerr << p.label << ": lowest decoded energy " << *p.min_energy << " seen "
                  << p.min_energy_count << " of " << cfg.samples << " runs\n";
    std::cerr << "note: " << qfci::kWindowCaveat << '\n';
  }
  std::cerr << report.points.size() - failed << " of " << report.points.size()
            << " points completed\n";
  return 0;
}

int cmd_scaling(const std::vector<int>& sizes, const std::vector<std::string>& files,
                std::uint64_t seed, const std::string& csv, const std::string& json) {
  qfci::ScalingReport rep;
  if (!files.empty()) {
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    rep = qfci::scaling_from_files(paths);
  } else {
    rep = qfci::scaling_from_sizes(sizes, seed);
  }
  emit(csv, [&](std::ostream& out) { qfci::write_scaling_csv(out, rep); });
  if (!json.empty()) emit(json, [&](std::ostream& out) { qfci::write_scaling_json(out, rep); });
  std::cerr << "fitted log-log slope of gate total vs n_so: " << rep.slope << '\n';
  return 0;
}

int cmd_spectrum(const std::string& fcidump, const std::string& sector, int count) {
  const auto mi = qfci::parse_fcidump_file(fcidump);
  const auto ham = qfci::build_second_quantized(qfci::to_spin_orbitals(mi));
  const auto spec = qfci::exact_eigensolve(ham, parse_sector(sector));
  const auto n = std::min<Eigen::Index>(count, spec.eigenvalues.size());
  for (Eigen::Index i = 0; i < n; ++i) std::printf("%d %.12f\n", static_cast<int>(i), spec.eigenvalues[i]);
  return 0;
}

int cmd_pauli(const std::string& fcidump, const std::string& out_path) {
  const auto mi = qfci::parse_fcidump_file(fcidump);
  const auto op = qfci::jordan_wigner(qfci::build_second_quantized(qfci::to_spin_orbitals(mi)));
  emit(out_path, [&](std::ostream& out) { op.write_text(out); });
  return 0;
}

int cmd_casci(const std::string& fcidump, const std::vector<int>& core, const std::vector<int>& active,
              const std::string& sector, int root, const std::string& out_path) {
  const auto mi = qfci::parse_fcidump_file(fcidump);
  const auto ham = qfci::build_second_quantized(qfci::to_spin_orbitals(mi));
  const auto g = qfci::casci_guess(ham, mi.n_orb, core, active, parse_sector(sector), root);
  emit(out_path, [&](std::ostream& out) { qfci::write_amplitude_guess(out, g); });
  return 0;
}

struct IpeaOptions {
  std::string fcidump, sector = "1,1", guess = "hf", variant = "A";
  double emax = 0.0, emin = -1.0;
  int bits = 20, reps = 1;
  std::uint64_t seed = 0, trotter = 0;
};

int cmd_ipea(const IpeaOptions& o) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto mi = qfci::parse_fcidump_file(o.fcidump);
  const auto ham = qfci::build_second_quantized(qfci::to_spin_orbitals(mi));
  const qfci::Sector sector = parse_sector(o.sector);
  std::mt19937_64 rng(o.seed);
  auto spec = qfci::GuessSpec::parse(o.guess);
  qfci::GuessState guess;
  switch (spec.kind) {
    case qfci::GuessSpec::Kind::HF:
      guess = qfci::hf_determinant(mi.n_orb, sector.n_alpha, sector.n_beta);
      break;
    case qfci::GuessSpec::Kind::CSF:
      guess = qfci::open_shell_csf(mi.n_orb, spec.core, spec.open_a, spec.open_b, spec.coupling);
      break;
    case qfci::GuessSpec::Kind::File:
      guess = qfci::load_amplitude_guess(spec.file, spec.threshold);
      break;
    case qfci::GuessSpec::Kind::Random:
      guess = qfci::random_sector_state(mi.n_orb, sector, rng);
      break;
  }
  const auto psi = qfci::to_statevector(guess);
  const qfci::EvolutionWindow window(o.emax, o.emin);
  qfci::IpeaConfig cfg(window);
  cfg.m = o.bits;
  cfg.variant = parse_variant(o.variant);
  cfg.repetitions_per_bit = o.reps;

  std::optional<qfci::SpectralDecomposition> spectra;
  std::optional<qfci::TrotterPropagator> trotter;
  std::unique_ptr<qfci::ControlledUnitary> u;
  if (o.trotter > 0) {
    trotter.emplace(ham, window, qfci::TrotterPlan::in_emission_order(ham, o.trotter));
    u = std::make_unique<qfci::TrotterControlledU>(*trotter, ham.n_modes);
  } else {
    spectra.emplace(qfci::SpectralDecomposition::for_state(ham, psi.amplitudes()));
    u = std::make_unique<qfci::ExactControlledU>(*spectra, window);
  }
  qfci::OutcomeRecord rec;
  if (cfg.variant == qfci::IpeaVariant::A) {
    rec = qfci::ipea_a_run(psi, *u, cfg, rng).record;
  } else {
    rec = qfci::ipea_b_run([&psi] { return psi; }, *u, cfg, rng);
  }
  const double secs = std::chrono::duration<double>(clock::now() - t0).count();
  std::string bits;
  for (auto b : rec.bits.bits) bits += static_cast<char>('0' + b);
  std::printf("bits 0.%s\nenergy %.10f\nresolution %.3e\nseconds %.3f\n", bits.c_str(), rec.energy,
              window.width() * std::ldexp(1.0, -cfg.m), secs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum FCI via iterative phase estimation on a simulated register"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a scan described by a config file");
  run_cmd->add_option("--config", run.config, "Scan config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--variant", run.variant, "IPEA variant")->check(CLI::IsMember({"A", "B", "a", "b"}));
  run_cmd->add_option("--bits", run.bits, "Phase bits m");
  run_cmd->add_option("--emax", run.emax, "Window upper energy (hartree)");
  run_cmd->add_option("--emin", run.emin, "Window lower energy (hartree)");
  run_cmd->add_option("--reps", run.reps, "Repetitions per bit (variant B), e.g. 11,31,51,101")
      ->delimiter(',');
  run_cmd->add_option("--samples", run.samples,
                      "Seeded runs per point; with variant A also reports the lowest energy found");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--csv", run.csv, "CSV output path");
  run_cmd->add_option("--json", run.json, "JSON sidecar path");

  std::vector<int> sizes;
  std::vector<std::string> scale_files;
  std::uint64_t scale_seed = 0;
  std::string scale_csv, scale_json;
  auto* scale_cmd = app.add_subcommand("scaling", "Gate-count scaling report");
  auto* sizes_opt = scale_cmd->add_option("--sizes", sizes, "Spin-orbital counts, e.g. 4,8,12")->delimiter(',');
  auto* files_opt = scale_cmd->add_option("--fcidump", scale_files, "Integral files instead of random tensors");
  sizes_opt->excludes(files_opt);
  scale_cmd->add_option("--seed", scale_seed, "Seed for random tensors");
  scale_cmd->add_option("--csv", scale_csv, "CSV output path (default stdout)");
  scale_cmd->add_option("--json", scale_json, "JSON output path");

  std::string sp_file, sp_sector = "1,1";
  int sp_count = 10;
  auto* spec_cmd = app.add_subcommand("spectrum", "Lowest eigenvalues of a sector");
  spec_cmd->add_option("--fcidump", sp_file)->required()->check(CLI::ExistingFile);
  spec_cmd->add_option("--sector", sp_sector, "n_alpha,n_beta");
  spec_cmd->add_option("--count", sp_count);

  std::string pa_file, pa_out;
  auto* pauli_cmd = app.add_subcommand("pauli", "Export the Jordan-Wigner operator");
  pauli_cmd->add_option("--fcidump", pa_file)->required()->check(CLI::ExistingFile);
  pauli_cmd->add_option("--out", pa_out, "Output path (default stdout)");

  std::string ca_file, ca_sector = "1,1", ca_out;
  std::vector<int> ca_core, ca_active;
  int ca_root = 0;
  auto* casci_cmd = app.add_subcommand("casci", "Write a CASCI amplitude guess file");
  casci_cmd->add_option("--fcidump", ca_file)->required()->check(CLI::ExistingFile);
  casci_cmd->add_option("--core", ca_core, "Doubly occupied orbitals")->delimiter(',');
  casci_cmd->add_option("--active", ca_active, "Active orbitals")->required()->delimiter(',');
  casci_cmd->add_option("--sector", ca_sector, "Active electrons n_alpha,n_beta");
  casci_cmd->add_option("--root", ca_root);
  casci_cmd->add_option("--out", ca_out, "Output path (default stdout)");

  IpeaOptions ip;
  auto* ipea_cmd = app.add_subcommand("ipea", "One IPEA run on an integral file");
  ipea_cmd->add_option("--fcidump", ip.fcidump)->required()->check(CLI::ExistingFile);
  ipea_cmd->add_option("--sector", ip.sector, "n_alpha,n_beta");
  ipea_cmd->add_option("--guess", ip.guess, "hf | csf:... | file:path:threshold | random");
  ipea_cmd->add_option("--emax", ip.emax)->required();
  ipea_cmd->add_option("--emin", ip.emin)->required();
  ipea_cmd->add_option("--bits", ip.bits);
  ipea_cmd->add_option("--seed", ip.seed);
  ipea_cmd->add_option("--variant", ip.variant)->check(CLI::IsMember({"A", "B", "a", "b"}));
  ipea_cmd->add_option("--reps", ip.reps, "Repetitions per bit (variant B)");
  ipea_cmd->add_option("--trotter", ip.trotter, "Trotter slices (0 = exact propagator)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*scale_cmd) return cmd_scaling(sizes, scale_files, scale_seed, scale_csv, scale_json);
    if (*spec_cmd) return cmd_spectrum(sp_file, sp_sector, sp_count);
    if (*pauli_cmd) return cmd_pauli(pa_file, pa_out);
    if (*casci_cmd) return cmd_casci(ca_file, ca_core, ca_active, ca_sector, ca_root, ca_out);
    if (*ipea_cmd) return cmd_ipea(ip);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
