#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qfci/types.hpp"

namespace qfci {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Pauli word in symplectic form: X on bits of `x` only, Z on bits of `z`
/// only, Y where both are set. Identity factors are implicit.
struct PauliWord {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  Pauli factor(int qubit) const noexcept;
  void set(int qubit, Pauli p) noexcept;
  int weight() const noexcept;
  bool is_identity() const noexcept { return (x | z) == 0; }
  int count(Pauli p) const noexcept;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
};

struct PauliWordHash {
  std::size_t operator()(const PauliWord& w) const noexcept {
    return std::hash<std::uint64_t>{}(w.x * 0x9E3779B97F4A7C15ull ^ w.z);
  }
};

/// Product of two words: a * b = phase * word, phase = i^{phase_power}.
struct PauliProduct {
  PauliWord word;
  int phase_power;  // 0..3
};
PauliProduct multiply(const PauliWord& a, const PauliWord& b) noexcept;

struct PauliString {
  Complex coefficient;
  PauliWord word;
};

/// Weighted sum of Pauli strings; strings with equal words are merged.
class PauliOperator {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  explicit PauliOperator(int n_qubits = 0) : n_qubits_(n_qubits) {}

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliString>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Adds `coefficient * word`, merging with an existing equal word.
  void add(const PauliWord& word, Complex coefficient);

  /// Drops strings with |coefficient| below `threshold`.
  void prune(double threshold = kPruneThreshold);

  /// Largest |Im c| over all coefficients.
  double max_imaginary() const noexcept;

  /// Word as text, qubit 0 leftmost (e.g. "ZIIX").
  std::string word_string(const PauliWord& word) const;

  /// Lines `coeff  word`; imaginary parts are written only when nonzero.
  void write_text(std::ostream& out) const;
  static PauliOperator read_text(std::istream& in);

  Eigen::MatrixXcd dense() const;

 private:
  int n_qubits_;
  std::vector<PauliString> terms_;
  std::unordered_map<PauliWord, std::size_t, PauliWordHash> index_;
};

/// out = op |psi>; `out` must not alias `psi`.
void apply_pauli(const PauliOperator& op, std::span<const Complex> psi, std::span<Complex> out);

}  // namespace qfci
