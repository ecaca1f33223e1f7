#include "qfci/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qfci/errors.hpp"
#include "qfci/fock.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/integrals.hpp"

namespace qfci {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw InvalidArgument("bad integer for " + what + ": '" + s + "'");
  }
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad number for " + what + ": '" + s + "'");
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path;
}

GuessState build_guess(const GuessSpec& spec, int n_orb, Sector sector, std::mt19937_64& rng) {
  switch (spec.kind) {
    case GuessSpec::Kind::HF:
      return hf_determinant(n_orb, sector.n_alpha, sector.n_beta);
    case GuessSpec::Kind::CSF:
      return open_shell_csf(n_orb, spec.core, spec.open_a, spec.open_b, spec.coupling);
    case GuessSpec::Kind::File:
      return load_amplitude_guess(spec.file, spec.threshold);
    case GuessSpec::Kind::Random:
      return random_sector_state(n_orb, sector, rng);
  }
  throw InvalidArgument("unknown guess kind");
}

constexpr std::uint64_t kGuessStream = ~std::uint64_t{0};

}  // namespace

std::string GuessSpec::to_string() const {
  switch (kind) {
    case Kind::HF:
      return "hf";
    case Kind::Random:
      return "random";
    case Kind::File: {
      std::ostringstream s;
      s << "file:" << file.string() << ':' << threshold;
      return s.str();
    }
    case Kind::CSF: {
      std::string s = std::string("csf:") + (coupling == Coupling::Singlet ? "singlet" : "triplet") +
                      ':' + std::to_string(open_a) + ':' + std::to_string(open_b);
      if (!core.empty()) {
        s += ':';
        for (std::size_t i = 0; i < core.size(); ++i)
          s += (i ? "," : "") + std::to_string(core[i]);
      }
      return s;
    }
  }
  return {};
}

GuessSpec GuessSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  GuessSpec g;
  if (t == "hf" || t == "HF") return g;
  if (t == "random") {
    g.kind = Kind::Random;
    return g;
  }
  if (t.rfind("file:", 0) == 0) {
    const auto last = t.rfind(':');
    if (last <= 5) throw InvalidArgument("guess file spec needs file:<path>:<threshold>");
    g.kind = Kind::File;
    g.file = t.substr(5, last - 5);
    g.threshold = to_double(t.substr(last + 1), "guess threshold");
    return g;
  }
  if (t.rfind("csf:", 0) == 0) {
    const auto parts = split(t.substr(4), ':');
    if (parts.size() < 3 || parts.size() > 4)
      throw InvalidArgument("CSF spec needs csf:<singlet|triplet>:<a>:<b>[:<core>]");
    g.kind = Kind::CSF;
    if (parts[0] == "singlet")
      g.coupling = Coupling::Singlet;
    else if (parts[0] == "triplet")
      g.coupling = Coupling::Triplet;
    else
      throw InvalidArgument("unknown coupling '" + parts[0] + "'");
    g.open_a = to_int(parts[1], "open orbital");
    g.open_b = to_int(parts[2], "open orbital");
    if (parts.size() == 4 && !parts[3].empty())
      for (const auto& c : split(parts[3], ',')) g.core.push_back(to_int(c, "core orbital"));
    return g;
  }
  throw InvalidArgument("unknown guess spec '" + t + "'");
}

void ScanConfig::validate() const {
  (void)window();
  if (m < 1 || m > 48) throw InvalidArgument("bits must lie in [1, 48]");
  if (repetitions.empty()) throw InvalidArgument("at least one repetition setting is required");
  for (int r : repetitions)
    if (r < 1 || r % 2 == 0) throw InvalidArgument("repetitions must be positive and odd");
  if (samples < 0) throw InvalidArgument("samples must be non-negative");
  for (const auto& p : points) {
    if (!std::filesystem::exists(p.fcidump))
      throw InvalidArgument("point '" + p.label + "': missing file " + p.fcidump.string());
    if (p.guess.kind == GuessSpec::Kind::File && !std::filesystem::exists(p.guess.file))
      throw InvalidArgument("point '" + p.label + "': missing file " + p.guess.file.string());
    if (p.target < 0) throw InvalidArgument("point '" + p.label + "': negative target");
  }
}

ScanConfig parse_scan_config(std::istream& in, const std::filesystem::path& base_dir) {
  ScanConfig cfg;
  cfg.csv.clear();
  cfg.json.clear();
  bool have_emax = false, have_emin = false;
  ScanPoint* point = nullptr;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line == "[point]") {
        cfg.points.emplace_back();
        point = &cfg.points.back();
        point->label = "point " + std::to_string(cfg.points.size());
        continue;
      }
      if (line.front() == '[') throw ParseError("unknown section " + line, line_no);
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (point) {
        if (key == "label")
          point->label = value;
        else if (key == "fcidump")
          point->fcidump = resolve(base_dir, value);
        else if (key == "sector") {
          const auto parts = split(value, ',');
          if (parts.size() != 2) throw ParseError("sector needs n_alpha,n_beta", line_no);
          point->sector = {to_int(parts[0], key), to_int(parts[1], key)};
        } else if (key == "guess") {
          point->guess = GuessSpec::parse(value);
          if (point->guess.kind == GuessSpec::Kind::File)
            point->guess.file = resolve(base_dir, point->guess.file.string());
        } else if (key == "target")
          point->target = to_int(value, key);
        else
          throw ParseError("unknown point key '" + key + "'", line_no);
        continue;
      }
      if (key == "emax") {
        cfg.e_max = to_double(value, key);
        have_emax = true;
      } else if (key == "emin") {
        cfg.e_min = to_double(value, key);
        have_emin = true;
      } else if (key == "bits")
        cfg.m = to_int(value, key);
      else if (key == "variant") {
        if (value == "A" || value == "a")
          cfg.variant = IpeaVariant::A;
        else if (value == "B" || value == "b")
          cfg.variant = IpeaVariant::B;
        else
          throw ParseError("variant must be A or B", line_no);
      } else if (key == "reps") {
        cfg.repetitions.clear();
        for (const auto& r : split(value, ',')) cfg.repetitions.push_back(to_int(r, key));
      } else if (key == "seed")
        cfg.seed = std::stoull(value);
      else if (key == "samples")
        cfg.samples = to_int(value, key);
      else if (key == "threads")
        cfg.threads = to_int(value, key);
      else if (key == "csv")
        cfg.csv = resolve(base_dir, value);
      else if (key == "json")
        cfg.json = resolve(base_dir, value);
      else
        throw ParseError("unknown key '" + key + "'", line_no);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what(), line_no);
  }
  if (!have_emax || !have_emin) throw ParseError("emax and emin are required", 0);
  return cfg;
}

ScanConfig load_scan_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_scan_config(in, path.parent_path());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t setting) {
  return splitmix64(splitmix64(splitmix64(master) ^ point) ^ setting);
}

PointResult run_point(const ScanConfig& cfg, std::size_t index) {
  const ScanPoint& pt = cfg.points.at(index);
  PointResult res;
  res.label = pt.label;
  res.guess = pt.guess.to_string();
  res.sector = pt.sector;
  res.target = pt.target;
  const bool version_b = cfg.variant == IpeaVariant::B;
  const std::vector<int> settings = version_b ? cfg.repetitions : std::vector<int>{1};
  for (int r : settings) res.version_b.push_back({r, 0.0, 0.0, std::nullopt});
  try {
    const EvolutionWindow window = cfg.window();
    const MolecularIntegrals mi = parse_fcidump_file(pt.fcidump);
    check_sector_metadata(pt.sector, mi);
    const FermionHamiltonian ham = build_second_quantized(to_spin_orbitals(mi));

    std::mt19937_64 guess_rng(derive_seed(cfg.seed, index, kGuessStream));
    GuessState guess = build_guess(pt.guess, mi.n_orb, pt.sector, guess_rng);
    if (guess.n_qubits != 2 * mi.n_orb)
      throw DimensionMismatch("guess register does not match the integral file");
    guess.validate();
    const StateVector psi = to_statevector(guess);

    // Diagonalize the populated sectors plus the target's own.
    std::vector<Sector> sectors{pt.sector};
    for (const auto& e : guess.entries) sectors.push_back(sector_of(e.mask, mi.n_orb));
    std::sort(sectors.begin(), sectors.end());
    sectors.erase(std::unique(sectors.begin(), sectors.end()), sectors.end());
    const SpectralDecomposition spectra = SpectralDecomposition::for_sectors(ham, sectors);
    const auto s = static_cast<std::size_t>(spectra.find(pt.sector));
    if (static_cast<std::size_t>(pt.target) >= spectra.sectors()[s].dimension())
      throw IndexOutOfRange("target eigen index exceeds the sector dimension");
    res.fci_energy = spectra.sectors()[s].eigenvalues[pt.target];

    const auto weights = phase_weights(spectra, window, psi.amplitudes());
    const std::size_t target = component_index(spectra, s, pt.target);
    res.overlap2 = weights[target].weight;
    for (const auto& c : spectra.expand(psi.amplitudes()))
      if (c.weight() > 1e-14 && !window.contains(c.energy)) res.window_brackets = false;
    res.analytic_a = ipea_a_success_probability(weights, target, cfg.m);

    const auto [down, up] = rounded_outcomes(weights[target].phase, cfg.m);
    const auto success = [&](const OutcomeRecord& r) {
      const auto b = r.bits.integer();
      return b == down || b == up;
    };
    const ExactControlledU u(spectra, window);
    IpeaConfig ipea(window);
    ipea.m = cfg.m;

    for (std::size_t k = 0; k < settings.size(); ++k) {
      auto& rr = res.version_b[k];
      if (version_b) {
        const auto vb = ipea_b_success_probability(weights, target, cfg.m, rr.repetitions);
        rr.probability = vb.probability;
        rr.pruned_mass = vb.pruned_mass;
      } else {
        rr.probability = res.analytic_a.total();
      }
      if (cfg.samples == 0) continue;
      std::mt19937_64 rng(derive_seed(cfg.seed, index, k));
      int hits = 0;
      if (version_b) {
        ipea.variant = IpeaVariant::B;
        ipea.repetitions_per_bit = rr.repetitions;
        const GuessBuilder builder = [&psi] { return psi; };
        for (int i = 0; i < cfg.samples; ++i) hits += success(ipea_b_run(builder, u, ipea, rng));
      } else {
        std::optional<double> lowest;
        int count = 0;
        for (int i = 0; i < cfg.samples; ++i) {
          const auto run = ipea_a_run(psi, u, ipea, rng);
          hits += success(run.record);
          const double e = run.record.energy;
          if (!lowest || e < *lowest) {
            lowest = e;
            count = 1;
          } else if (e == *lowest) {
            ++count;
          }
        }
        res.min_energy = lowest;
        res.min_energy_count = count;
        res.sampled_a = static_cast<double>(hits) / cfg.samples;
      }
      rr.sampled = static_cast<double>(hits) / cfg.samples;
    }
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

ScanReport run_scan(const ScanConfig& cfg) {
  cfg.validate();
  ScanReport report;
  report.config = cfg;
  report.points.resize(cfg.points.size());
  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, cfg.points.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cfg.points.size(); i = next++) report.points[i] = run_point(cfg, i);
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return report;
}

void write_scan_csv(std::ostream& out, const ScanReport& report) {
  out << "label,guess,n_alpha,n_beta,target,variant,repetitions,fci_energy,overlap2,"
         "overlap2_scaled,p_down,p_up,p_tot,p_success,pruned_mass,samples,sampled_success,"
         "min_energy,min_energy_count,window_brackets,error\n";
  const bool version_b = report.config.variant == IpeaVariant::B;
  for (const auto& p : report.points) {
    for (const auto& r : p.version_b) {
      out << csv_field(p.label) << ',' << csv_field(p.guess) << ',' << p.sector.n_alpha << ','
          << p.sector.n_beta << ',' << p.target << ',' << (version_b ? 'B' : 'A') << ','
          << r.repetitions << ',';
      if (p.error) {
        out << ",,,,,,,," << report.config.samples << ",,,,," << csv_field(*p.error) << '\n';
        continue;
      }
      out << number(p.fci_energy) << ',' << number(p.overlap2) << ',' << number(0.81 * p.overlap2)
          << ',' << number(p.analytic_a.p_down) << ',' << number(p.analytic_a.p_up) << ','
          << number(p.analytic_a.total()) << ',' << number(r.probability) << ','
          << number(r.pruned_mass) << ',' << report.config.samples << ','
          << (r.sampled ? number(*r.sampled) : "") << ','
          << (p.min_energy ? number(*p.min_energy) : "") << ','
          << (p.min_energy ? std::to_string(p.min_energy_count) : "") << ','
          << (p.window_brackets ? "true" : "false") << ",\n";
    }
  }
}

void write_scan_json(std::ostream& out, const ScanReport& report) {
  using nlohmann::json;
  const auto& c = report.config;
  json cfg = {{"emax", c.e_max},
              {"emin", c.e_min},
              {"bits", c.m},
              {"variant", c.variant == IpeaVariant::B ? "B" : "A"},
              {"repetitions", c.repetitions},
              {"seed", c.seed},
              {"samples", c.samples}};
  json points = json::array();
  for (const auto& p : report.points) {
    json j = {{"label", p.label},
              {"guess", p.guess},
              {"sector", {p.sector.n_alpha, p.sector.n_beta}},
              {"target", p.target}};
    if (p.error) {
      j["error"] = *p.error;
      points.push_back(std::move(j));
      continue;
    }
    j["error"] = nullptr;
    j["fci_energy"] = p.fci_energy;
    j["overlap2"] = p.overlap2;
    j["overlap2_scaled"] = 0.81 * p.overlap2;
    j["window_brackets"] = p.window_brackets;
    j["variant_a"] = {{"p_down", p.analytic_a.p_down},
                      {"p_up", p.analytic_a.p_up},
                      {"p_tot", p.analytic_a.total()}};
    json settings = json::array();
    for (const auto& r : p.version_b) {
      json s = {{"repetitions", r.repetitions},
                {"probability", r.probability},
                {"pruned_mass", r.pruned_mass}};
      s["sampled"] = r.sampled ? json(*r.sampled) : json(nullptr);
      settings.push_back(std::move(s));
    }
    j["settings"] = std::move(settings);
    if (p.min_energy)
      j["lowest_energy"] = {{"energy", *p.min_energy}, {"count", p.min_energy_count}};
    points.push_back(std::move(j));
  }
  json doc = {{"format", "qfci-scan/1"}, {"config", cfg}, {"points", points}, {"caveat", kWindowCaveat}};
  out << doc.dump(2) << '\n';
}

void write_scan_outputs(const ScanReport& report) {
  if (!report.config.csv.empty()) {
    std::ofstream f(report.config.csv);
    if (!f) throw Error("cannot write " + report.config.csv.string());
    write_scan_csv(f, report);
  }
  if (!report.config.json.empty()) {
    std::ofstream f(report.config.json);
    if (!f) throw Error("cannot write " + report.config.json.string());
    write_scan_json(f, report);
  }
}

namespace {

void fit(ScalingReport& r) {
  std::vector<double> x, y;
  for (const auto& row : r.rows) {
    x.push_back(row.n_so);
    y.push_back(static_cast<double>(row.counts.total));
  }
  r.slope = loglog_slope(x, y);
}

}  // namespace

ScalingReport scaling_from_sizes(const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 2) throw InvalidArgument("scaling needs at least two sizes");
  ScalingReport r;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int n_so = sizes[i];
    if (n_so < 2 || n_so % 2 != 0 || n_so > 40)
      throw InvalidArgument("spin-orbital counts must be even and in [2, 40]");
    std::mt19937_64 rng(derive_seed(seed, i, static_cast<std::uint64_t>(n_so)));
    r.labels.push_back("random n_so=" + std::to_string(n_so));
    r.rows.push_back(scaling_point(random_dense_integrals(n_so / 2, rng)));
  }
  fit(r);
  return r;
}

ScalingReport scaling_from_files(const std::vector<std::filesystem::path>& files) {
  if (files.size() < 2) throw InvalidArgument("scaling needs at least two integral files");
  ScalingReport r;
  for (const auto& f : files) {
    r.labels.push_back(f.filename().string());
    r.rows.push_back(scaling_point(parse_fcidump_file(f)));
  }
  fit(r);
  return r;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "label,n_basis,fci_dim,pauli_strings,hadamard,cnot,rx,rz,controlled_rz,gate_total\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const auto& c = r.counts;
    out << csv_field(report.labels[i]) << ',' << r.n_so << ',' << r.fci_dim << ',' << r.n_strings
        << ',' << c.hadamard << ',' << c.cnot << ',' << c.rx << ',' << c.rz << ','
        << c.controlled_rz << ',' << c.total << '\n';
  }
}

void write_scaling_json(std::ostream& out, const ScalingReport& report) {
  using nlohmann::json;
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const auto& c = r.counts;
    rows.push_back({{"label", report.labels[i]},
                    {"n_so", r.n_so},
                    {"fci_dim", r.fci_dim},
                    {"pauli_strings", r.n_strings},
                    {"counts",
                     {{"hadamard", c.hadamard},
                      {"cnot", c.cnot},
                      {"rx", c.rx},
                      {"rz", c.rz},
                      {"controlled_rz", c.controlled_rz},
                      {"total", c.total}}}});
  }
  out << json{{"format", "qfci-scaling/1"}, {"rows", rows}, {"slope", report.slope}}.dump(2) << '\n';
}

}  // namespace qfci
