#include "qfci/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "qfci/errors.hpp"

namespace qfci {

namespace {

constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

Pauli PauliWord::factor(int qubit) const noexcept {
  const bool bx = (x >> qubit) & 1u;
  const bool bz = (z >> qubit) & 1u;
  if (bx && bz) return Pauli::Y;
  if (bx) return Pauli::X;
  if (bz) return Pauli::Z;
  return Pauli::I;
}

void PauliWord::set(int qubit, Pauli p) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x &= ~bit;
  z &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z |= bit;
}

int PauliWord::weight() const noexcept { return std::popcount(x | z); }

int PauliWord::count(Pauli p) const noexcept {
  switch (p) {
    case Pauli::X:
      return std::popcount(x & ~z);
    case Pauli::Y:
      return std::popcount(x & z);
    case Pauli::Z:
      return std::popcount(z & ~x);
    case Pauli::I:
      return 64 - weight();
  }
  return 0;
}

PauliProduct multiply(const PauliWord& a, const PauliWord& b) noexcept {
  // Write P = i^{|x&z|} X^x Z^z. Moving Z^{za} past X^{xb} costs (-1)^{|za&xb|}.
  const int ya = std::popcount(a.x & a.z);
  const int yb = std::popcount(b.x & b.z);
  PauliWord w{a.x ^ b.x, a.z ^ b.z};
  const int yw = std::popcount(w.x & w.z);
  int power = ya + yb - yw + 2 * std::popcount(a.z & b.x);
  power %= 4;
  if (power < 0) power += 4;
  return {w, power};
}

void PauliOperator::add(const PauliWord& word, Complex coefficient) {
  auto [it, inserted] = index_.try_emplace(word, terms_.size());
  if (inserted) {
    terms_.push_back({coefficient, word});
  } else {
    terms_[it->second].coefficient += coefficient;
  }
}

void PauliOperator::prune(double threshold) {
  std::vector<PauliString> kept;
  kept.reserve(terms_.size());
  for (const auto& t : terms_)
    if (std::abs(t.coefficient) >= threshold) kept.push_back(t);
  terms_ = std::move(kept);
  index_.clear();
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].word, i);
}

double PauliOperator::max_imaginary() const noexcept {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coefficient.imag()));
  return m;
}

std::string PauliOperator::word_string(const PauliWord& word) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(static_cast<std::size_t>(n_qubits_), 'I');
  for (int q = 0; q < n_qubits_; ++q) s[q] = kLetters[static_cast<int>(word.factor(q))];
  return s;
}

void PauliOperator::write_text(std::ostream& out) const {
  std::ostringstream line;
  for (const auto& t : terms_) {
    line.str("");
    line << std::setprecision(17) << t.coefficient.real();
    if (t.coefficient.imag() != 0.0) line << std::showpos << t.coefficient.imag() << 'i' << std::noshowpos;
    out << line.str() << "  " << word_string(t.word) << '\n';
  }
}

PauliOperator PauliOperator::read_text(std::istream& in) {
  std::vector<std::pair<Complex, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string coeff, word;
    if (!(ls >> coeff)) continue;
    if (coeff.front() == '#') continue;
    if (!(ls >> word)) throw ParseError("expected 'coeff word'", line_no);
    Complex c;
    std::istringstream cs(coeff);
    double re = 0, im = 0;
    if (!(cs >> re)) throw ParseError("bad coefficient '" + coeff + "'", line_no);
    if (cs.peek() != std::char_traits<char>::eof()) {
      if (!(cs >> im) || cs.get() != 'i') throw ParseError("bad coefficient '" + coeff + "'", line_no);
    }
    c = {re, im};
    if (n < 0) n = static_cast<int>(word.size());
    if (static_cast<int>(word.size()) != n) throw ParseError("inconsistent word length", line_no);
    rows.emplace_back(c, word);
  }
  PauliOperator op(std::max(n, 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    PauliWord w;
    for (int q = 0; q < n; ++q) {
      switch (rows[r].second[q]) {
        case 'I': break;
        case 'X': w.set(q, Pauli::X); break;
        case 'Y': w.set(q, Pauli::Y); break;
        case 'Z': w.set(q, Pauli::Z); break;
        default: throw ParseError("bad Pauli letter in '" + rows[r].second + "'", 0);
      }
    }
    op.add(w, rows[r].first);
  }
  return op;
}

Eigen::MatrixXcd PauliOperator::dense() const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : terms_) {
    const Complex base = t.coefficient * kIPowers[std::popcount(t.word.x & t.word.z) % 4];
    for (std::size_t col = 0; col < dim; ++col) {
      const std::size_t row = col ^ t.word.x;
      const double sign = (std::popcount(col & t.word.z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += sign * base;
    }
  }
  return m;
}

void apply_pauli(const PauliOperator& op, std::span<const Complex> psi, std::span<Complex> out) {
  const std::size_t dim = std::size_t{1} << op.n_qubits();
  if (psi.size() != dim || out.size() != dim)
    throw DimensionMismatch("Pauli operator on " + std::to_string(op.n_qubits()) +
                            " qubits applied to vector of size " + std::to_string(psi.size()));
  std::fill(out.begin(), out.end(), Complex{});
  // P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>
  for (const auto& t : op.terms()) {
    const Complex base = t.coefficient * kIPowers[std::popcount(t.word.x & t.word.z) % 4];
    const std::uint64_t flip = t.word.x;
    const std::uint64_t zmask = t.word.z;
    for (std::size_t b = 0; b < dim; ++b) {
      const Complex a = psi[b];
      if (a == Complex{}) continue;
      out[b ^ flip] += ((std::popcount(b & zmask) & 1) ? -base : base) * a;
    }
  }
}

}  // namespace qfci
