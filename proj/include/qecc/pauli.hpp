#pragma once

// Binary symplectic representation of n-fold Pauli operators.
//
// A Pauli string on n qubits is stored as two packed bit vectors (z|x).
// Per qubit: I = (0|0), X = (0|1), Y = (1|1), Z = (1|0). Global phases are
// dropped, so the group product is a componentwise XOR.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qecc {

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };  // value = (z << 1) | x

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Index into a (pI, px, py, pz) probability vector.
constexpr int prob_index(Pauli p) {
  switch (p) {
    case Pauli::I: return 0;
    case Pauli::X: return 1;
    case Pauli::Y: return 2;
    case Pauli::Z: return 3;
  }
  return 0;
}

constexpr Pauli pauli_from_prob_index(int k) {
  constexpr Pauli order[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  return order[k & 3];
}

using BitVector = std::vector<std::uint8_t>;

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n);

  static PauliString identity(std::size_t n) { return PauliString(n); }
  /// "IIXII" style labels; throws std::invalid_argument on unknown labels.
  static PauliString from_labels(std::string_view labels);
  /// "00000|00100" style (z|x) bits.
  static PauliString from_binary(std::string_view bits);

  std::string to_labels() const;
  std::string to_binary() const;

  std::size_t size() const { return n_; }
  Pauli get(std::size_t q) const;
  void set(std::size_t q, Pauli p);

  bool z(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1U; }
  bool x(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1U; }
  void flip_z(std::size_t q) { z_[q >> 6] ^= std::uint64_t{1} << (q & 63); }
  void flip_x(std::size_t q) { x_[q >> 6] ^= std::uint64_t{1} << (q & 63); }

  std::size_t weight() const;
  bool is_identity() const;

  /// Phaseless group product (XOR of the symplectic parts).
  PauliString& operator*=(const PauliString& other);
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }

  bool operator==(const PauliString& other) const = default;

  const std::vector<std::uint64_t>& z_words() const { return z_; }
  const std::vector<std::uint64_t>& x_words() const { return x_; }
  std::vector<std::uint64_t>& z_words() { return z_; }
  std::vector<std::uint64_t>& x_words() { return x_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> z_;
  std::vector<std::uint64_t> x_;
};

/// (z.x'^T + z'.x^T) mod 2; 0 iff the operators commute.
int symplectic_product(const PauliString& u, const PauliString& v);
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

/// Stabilizer generators as rows; construction checks pairwise commutation.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix(std::vector<PauliString> rows, std::size_t k);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<PauliString>& rows() const { return rows_; }

 private:
  std::vector<PauliString> rows_;
  std::size_t n_;
  std::size_t k_;
};

BitVector syndrome(const ParityCheckMatrix& h, const PauliString& e);
/// Syndrome packed with the first row as the most significant bit.
std::uint32_t syndrome_index(const ParityCheckMatrix& h, const PauliString& e);

/// Incrementally built GF(2) row basis over the 2n-bit (z|x) vectors.
class Gf2Span {
 public:
  explicit Gf2Span(std::size_t n) : n_(n) {}

  /// Returns false if v was already in the span.
  bool insert(const PauliString& v);
  bool contains(const PauliString& v) const;
  std::size_t rank() const { return basis_.size(); }

 private:
  PauliString reduce(PauliString v) const;
  static long pivot_of(const PauliString& v);

  std::size_t n_;
  std::vector<PauliString> basis_;
  std::vector<long> pivots_;
};

}  // namespace qecc
