#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qfci/guess.hpp"
#include "qfci/phase_estimation.hpp"
#include "qfci/resources.hpp"

namespace qfci {

/// How a scan point builds its initial state. Text forms:
///   hf
///   csf:<singlet|triplet>:<a>:<b>[:<core,orbitals>]
///   file:<path>:<threshold>
///   random
struct GuessSpec {
  enum class Kind { HF, CSF, File, Random };
  Kind kind = Kind::HF;
  Coupling coupling = Coupling::Singlet;
  int open_a = 0;
  int open_b = 0;
  std::vector<int> core;
  std::filesystem::path file;
  double threshold = 0.0;

  std::string to_string() const;
  /// Throws InvalidArgument.
  static GuessSpec parse(const std::string& text);
};

struct ScanPoint {
  std::string label;
  std::filesystem::path fcidump;
  Sector sector;
  GuessSpec guess;
  int target = 0;  // eigen index within `sector`, ascending energy
};

struct ScanConfig {
  std::vector<ScanPoint> points;
  double e_max = 0.0;
  double e_min = -1.0;
  int m = 20;
  IpeaVariant variant = IpeaVariant::A;
  std::vector<int> repetitions{1};  // version B settings, each odd
  std::uint64_t seed = 0;
  int samples = 0;  // seeded runs per point and setting; 0 = analytic only
  int threads = 0;  // 0 = hardware concurrency
  std::filesystem::path csv;
  std::filesystem::path json;

  EvolutionWindow window() const { return {e_max, e_min}; }
  /// Checks the window, bit count, repetitions and that every referenced
  /// file exists. Throws InvalidArgument.
  void validate() const;
};

/// Reads the key-value config format (see README). Relative paths are
/// resolved against `base_dir`. Throws ParseError.
ScanConfig parse_scan_config(std::istream& in, const std::filesystem::path& base_dir = {});
ScanConfig load_scan_config(const std::filesystem::path& path);

struct RepetitionResult {
  int repetitions = 1;
  double probability = 0.0;  // version B exact recursion
  double pruned_mass = 0.0;
  std::optional<double> sampled;
};

struct PointResult {
  std::string label;
  std::string guess;
  Sector sector;
  int target = 0;
  std::optional<std::string> error;

  double fci_energy = 0.0;
  double overlap2 = 0.0;
  bool window_brackets = true;  // every populated eigenvalue inside [e_min, e_max]
  SuccessProbability analytic_a;
  std::vector<RepetitionResult> version_b;

  // Sampled version A runs (samples > 0).
  std::optional<double> sampled_a;
  std::optional<double> min_energy;
  int min_energy_count = 0;
};

struct ScanReport {
  ScanConfig config;
  std::vector<PointResult> points;
};

/// Master seed -> independent stream seed for (point, setting).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t setting);

/// Runs every point (in parallel); failures are stored per point.
ScanReport run_scan(const ScanConfig& cfg);
PointResult run_point(const ScanConfig& cfg, std::size_t index);

/// CSV with one row per (point x repetition setting); header always written.
void write_scan_csv(std::ostream& out, const ScanReport& report);
void write_scan_json(std::ostream& out, const ScanReport& report);
/// Writes to cfg.csv / cfg.json when set.
void write_scan_outputs(const ScanReport& report);

inline constexpr const char* kWindowCaveat =
    "lowest-energy selection is only meaningful when [e_min, e_max] brackets every eigenvalue "
    "populated by the guess; energies outside the window alias into it";

struct ScalingReport {
  std::vector<std::string> labels;
  std::vector<ScalingPoint> rows;
  double slope = 0.0;  // d log(gate_total) / d log(n_so)
};

/// Random dense integrals for each even n_so in `sizes` (>= 2 sizes).
ScalingReport scaling_from_sizes(const std::vector<int>& sizes, std::uint64_t seed);
/// Integral files instead of random tensors.
ScalingReport scaling_from_files(const std::vector<std::filesystem::path>& files);

void write_scaling_csv(std::ostream& out, const ScalingReport& report);
void write_scaling_json(std::ostream& out, const ScalingReport& report);

}  // namespace qfci
