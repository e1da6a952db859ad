#pragma once

// Qubit-register permutations for concatenated codes, and their quality
// metrics (spread, dispersion).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "qecc/pauli.hpp"
#include "qecc/rng.hpp"

namespace qecc {

class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless map is a bijection of {0..N-1}.
  explicit Permutation(std::vector<std::uint32_t> map);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::uint32_t operator[](std::size_t i) const { return map_[i]; }
  const std::vector<std::uint32_t>& map() const { return map_; }
  Permutation inverse() const;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> map_;
};

bool is_bijection(const std::vector<std::uint32_t>& map);

class SRandomError : public std::runtime_error {
 public:
  SRandomError(const std::string& what, std::size_t attempts) : std::runtime_error(what), attempts_(attempts) {}
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t attempts_;
};

Permutation random_interleaver(std::size_t n, Rng& rng);

/// Randomized greedy: each position takes a uniformly chosen unused value more
/// than S away from the S previous outputs. When none is left the placement
/// stalls and a random unused value is traded into an earlier slot if both
/// ends still satisfy the condition; an attempt restarts after 10 N stalls.
/// Throws SRandomError after max_restarts restarts.
Permutation s_random(std::size_t n, std::size_t s, Rng& rng, std::size_t max_restarts = 100);
/// The defining condition, checked exhaustively.
bool satisfies_s_random(const Permutation& p, std::size_t s);

/// pi(i) = (alpha^i mod (N+1)) - 1; N+1 prime, alpha a primitive root.
Permutation welch_costas(std::size_t n, std::uint64_t alpha);
bool is_prime(std::uint64_t v);
bool is_primitive_root(std::uint64_t alpha, std::uint64_t prime);

/// JPL / CCSDS recurrence with primes 31..67; k1 must divide N.
Permutation jpl(std::size_t n, std::size_t k1 = 8);

/// Largest s with |pi(i) - pi(j)| > s whenever 0 < |i - j| < s.
std::size_t spread(const Permutation& p);
/// Distinct displacement vectors (j - i, pi(j) - pi(i)), i < j, over C(N, 2).
double dispersion(const Permutation& p);
double dispersion_serial(const Permutation& p);

/// Output qubit i carries input qubit pi(i).
PauliString apply_interleaver(const Permutation& p, const PauliString& e);
PauliString apply_deinterleaver(const Permutation& p, const PauliString& e);

/// "N" on the first line, then N whitespace-separated 0-based targets.
void write_permutation(std::ostream& os, const Permutation& p);
Permutation read_permutation(std::istream& is);

}  // namespace qecc
