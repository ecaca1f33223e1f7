#include "qfci/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "qfci/errors.hpp"

namespace qfci {

namespace {

constexpr double kDuplicateTolerance = 1e-10;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::optional<long> to_long(const std::string& token) {
  long v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string token) {
  // Fortran writers sometimes emit 1.0D-03.
  std::replace(token.begin(), token.end(), 'D', 'E');
  std::replace(token.begin(), token.end(), 'd', 'e');
  if (!token.empty() && token.front() == '+') token.erase(token.begin());
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Header {
  std::map<std::string, std::vector<std::string>> values;
  std::size_t last_line = 0;
};

// Reads the `&FCI ... &END` (or `/`) namelist. Leaves the stream positioned
// at the first body line.
Header read_header(std::istream& in, std::size_t& line_no) {
  std::string text;
  std::string line;
  bool started = false;
  bool finished = false;
  while (!finished && std::getline(in, line)) {
    ++line_no;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (std::all_of(u.begin(), u.end(), [](unsigned char c) { return std::isspace(c); }))
          continue;
        throw ParseError("expected '&FCI' namelist header", line_no);
      }
      started = true;
      u = u.substr(pos + 4);
    }
    for (const char* term : {"&END", "/END", "/"}) {
      auto pos = u.find(term);
      if (pos != std::string::npos) {
        u = u.substr(0, pos);
        finished = true;
        break;
      }
    }
    text += ' ';
    text += u;
  }
  if (!started) throw ParseError("empty input: missing '&FCI' header", line_no);
  if (!finished) throw ParseError("unterminated namelist header", line_no);

  std::string spaced;
  for (char c : text) {
    if (c == ',') {
      spaced += ' ';
    } else if (c == '=') {
      spaced += " = ";
    } else {
      spaced += c;
    }
  }
  std::vector<std::string> tokens;
  std::istringstream ts(spaced);
  for (std::string t; ts >> t;) tokens.push_back(t);

  Header header;
  header.last_line = line_no;
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
      key = tokens[i];
      header.values[key];
      ++i;
      continue;
    }
    if (tokens[i] == "=" || key.empty())
      throw ParseError("malformed namelist near '" + tokens[i] + "'", line_no);
    header.values[key].push_back(tokens[i]);
  }
  return header;
}

int header_int(const Header& h, const std::string& key, std::optional<int> fallback) {
  auto it = h.values.find(key);
  if (it == h.values.end()) {
    if (fallback) return *fallback;
    throw ParseError("header is missing " + key, h.last_line);
  }
  if (it->second.size() != 1)
    throw ParseError(key + " must have exactly one value", h.last_line);
  auto v = to_long(it->second.front());
  if (!v) throw ParseError(key + " is not an integer: " + it->second.front(), h.last_line);
  return static_cast<int>(*v);
}

class IntegralAssembler {
 public:
  explicit IntegralAssembler(MolecularIntegrals& mi)
      : mi_(mi),
        one_seen_(static_cast<std::size_t>(mi.n_orb) * mi.n_orb, 0),
        two_seen_(static_cast<std::size_t>(mi.n_orb) * mi.n_orb * mi.n_orb * mi.n_orb, 0) {}

  void core(double v, std::size_t line) {
    check(core_seen_, mi_.core_energy, v, line, "core energy");
    mi_.core_energy = v;
    core_seen_ = 1;
  }

  void one(int p, int q, double v, std::size_t line) {
    auto& seen = one_seen_[canonical_one(p, q)];
    check(seen, mi_.one_body(p, q), v, line, "one-body");
    mi_.one_body(p, q) = mi_.one_body(q, p) = v;
    seen = 1;
  }

  void two(int p, int q, int r, int s, double v, std::size_t line) {
    auto& seen = two_seen_[canonical_two(p, q, r, s)];
    check(seen, mi_.two_body(p, q, r, s), v, line, "two-body");
    for (auto [a, b, c, d] : std::array<std::array<int, 4>, 8>{{{p, q, r, s},
                                                               {q, p, r, s},
                                                               {p, q, s, r},
                                                               {q, p, s, r},
                                                               {r, s, p, q},
                                                               {s, r, p, q},
                                                               {r, s, q, p},
                                                               {s, r, q, p}}}) {
      mi_.two_body(a, b, c, d) = v;
    }
    seen = 1;
  }

 private:
  static void check(char seen, double old_value, double v, std::size_t line, const char* what) {
    if (seen && std::abs(old_value - v) > kDuplicateTolerance) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "line " << line << ": conflicting duplicate " << what
          << " entry (" << old_value << " vs " << v << ")";
      throw ConsistencyError(msg.str());
    }
  }

  std::size_t canonical_one(int p, int q) const {
    return static_cast<std::size_t>(std::min(p, q)) * mi_.n_orb + std::max(p, q);
  }

  std::size_t canonical_two(int p, int q, int r, int s) const {
    const auto n = static_cast<std::size_t>(mi_.n_orb);
    std::size_t pq = std::min(p, q) * n + std::max(p, q);
    std::size_t rs = std::min(r, s) * n + std::max(r, s);
    return std::min(pq, rs) * n * n + std::max(pq, rs);
  }

  MolecularIntegrals& mi_;
  char core_seen_ = 0;
  std::vector<char> one_seen_;
  std::vector<char> two_seen_;
};

}  // namespace

MolecularIntegrals MolecularIntegrals::zeros(int n_orb, int n_elec, int ms2) {
  MolecularIntegrals mi;
  mi.n_orb = n_orb;
  mi.n_elec = n_elec;
  mi.ms2 = ms2;
  mi.one_body = Eigen::MatrixXd::Zero(n_orb, n_orb);
  mi.two_body = Tensor4(n_orb);
  return mi;
}

MolecularIntegrals parse_fcidump(std::istream& in) {
  std::size_t line_no = 0;
  const Header header = read_header(in, line_no);

  const int norb = header_int(header, "NORB", std::nullopt);
  const int nelec = header_int(header, "NELEC", std::nullopt);
  const int ms2 = header_int(header, "MS2", 0);
  if (norb < 1) throw ParseError("NORB must be positive", header.last_line);
  if (nelec < 0 || nelec > 2 * norb)
    throw ParseError("NELEC must lie in [0, 2*NORB]", header.last_line);
  if (auto it = header.values.find("UHF"); it != header.values.end()) {
    for (const auto& v : it->second) {
      if (v.find('T') != std::string::npos)
        throw ParseError("unrestricted (UHF) integral files are not supported", header.last_line);
    }
  }

  MolecularIntegrals mi = MolecularIntegrals::zeros(norb, nelec, ms2);
  if (auto it = header.values.find("ORBSYM"); it != header.values.end()) {
    for (const auto& v : it->second) {
      auto sym = to_long(v);
      if (!sym) throw ParseError("ORBSYM entry is not an integer: " + v, header.last_line);
      mi.orbsym.push_back(static_cast<int>(*sym));
    }
  }

  IntegralAssembler assembler(mi);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '(')
      throw ParseError("complex integrals are not supported", line_no);
    if (tokens.size() != 5)
      throw ParseError("expected 'value i j k l', got " + std::to_string(tokens.size()) + " fields",
                       line_no);
    auto value = to_double(tokens[0]);
    if (!value) throw ParseError("bad integral value '" + tokens[0] + "'", line_no);
    std::array<int, 4> idx{};
    for (int t = 0; t < 4; ++t) {
      auto v = to_long(tokens[t + 1]);
      if (!v) throw ParseError("bad orbital index '" + tokens[t + 1] + "'", line_no);
      if (*v < 0 || *v > norb)
        throw ParseError("orbital index " + tokens[t + 1] + " outside [0, NORB]", line_no);
      idx[t] = static_cast<int>(*v);
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      assembler.core(*value, line_no);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      assembler.one(i - 1, j - 1, *value, line_no);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy record; not part of the Hamiltonian
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      assembler.two(i - 1, j - 1, k - 1, l - 1, *value, line_no);
    } else {
      throw ParseError("unrecognized index pattern", line_no);
    }
  }
  return mi;
}

MolecularIntegrals parse_fcidump_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open FCIDUMP file: " + path.string());
  return parse_fcidump(in);
}

void write_fcidump(std::ostream& out, const MolecularIntegrals& mi, double tol) {
  const int n = mi.n_orb;
  out << " &FCI NORB=" << n << ",NELEC=" << mi.n_elec << ",MS2=" << mi.ms2 << ",\n";
  out << "  ORBSYM=";
  for (int p = 0; p < n; ++p)
    out << (p < static_cast<int>(mi.orbsym.size()) ? mi.orbsym[p] : 1) << ',';
  out << "\n  ISYM=1,\n &END\n";
  out << std::setprecision(17);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          const double v = mi.two_body(p, q, r, s);
          if (std::abs(v) > tol)
            out << v << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1 << '\n';
        }
      }
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      const double v = mi.one_body(p, q);
      if (std::abs(v) > tol) out << v << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    }
  }
  out << mi.core_energy << " 0 0 0 0\n";
}

SpinOrbitalIntegrals to_spin_orbitals(const MolecularIntegrals& mi) {
  const int n = mi.n_orb;
  SpinOrbitalIntegrals so;
  so.n_so = 2 * n;
  so.core_energy = mi.core_energy;
  so.h = Eigen::MatrixXd::Zero(so.n_so, so.n_so);
  so.g = Tensor4(so.n_so);

  for (int sigma = 0; sigma < 2; ++sigma) {
    const int off = sigma * n;
    so.h.block(off, off, n, n) = mi.one_body;
  }
  // <p sigma, q tau | r sigma, s tau> = (pr|qs)
  for (int sigma = 0; sigma < 2; ++sigma) {
    for (int tau = 0; tau < 2; ++tau) {
      const int a = sigma * n;
      const int b = tau * n;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) so.g(a + p, b + q, a + r, b + s) = mi.two_body(p, r, q, s);
    }
  }
  return so;
}

}  // namespace qfci
