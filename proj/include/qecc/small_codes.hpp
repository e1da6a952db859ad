#pragma once

// Small stabilizer codes decoded by exhaustive enumeration: lookup (QMLD
// over single errors), exact posterior marginals and degenerate ML decoding.
// All 4^n errors are tabulated, so n is limited to 10.

#include <array>
#include <cstdint>
#include <vector>

#include "qecc/channels.hpp"
#include "qecc/pauli.hpp"

namespace qecc {

inline constexpr std::size_t kMaxEnumeratedQubits = 10;

/// Error index: base-4 digits, qubit q at 4^q, digit = prob_index (I, X, Y, Z).
PauliString error_from_index(std::uint32_t index, std::size_t n);
std::uint32_t index_of_error(const PauliString& e);

struct StabilizerCode {
  ParityCheckMatrix H;
  // pair i: x_logicals[i] anticommutes with z_logicals[i] only
  std::vector<PauliString> x_logicals;
  std::vector<PauliString> z_logicals;
  std::vector<PauliString> lookup;  // indexed by syndrome_index

  // enumeration tables
  std::vector<std::vector<std::uint32_t>> errors_by_syndrome;
  std::vector<std::uint8_t> error_class;  // logical class of e * lookup(s(e))

  std::size_t n() const { return H.n(); }
  std::size_t k() const { return H.k(); }
  std::size_t num_syndromes() const { return lookup.size(); }
  std::size_t num_classes() const { return std::size_t{1} << (2 * k()); }
  /// Logical operator of class c: per logical qubit two bits (x | z << 1).
  PauliString logical_of_class(std::size_t c) const;
};

/// Symplectic pairs spanning the normalizer modulo the stabilizer group.
void compute_logicals(const ParityCheckMatrix& h, std::vector<PauliString>& xs, std::vector<PauliString>& zs);

/// Rows must be independent; k = n - rows.
StabilizerCode make_stabilizer_code(const std::vector<PauliString>& rows);
StabilizerCode five_qubit_code();

std::uint32_t syndrome_key(const StabilizerCode& code, const BitVector& s);
PauliString decode_lookup(const StabilizerCode& code, const BitVector& s);
PauliString decode_lookup(const StabilizerCode& code, std::uint32_t syndrome_idx);

/// Per-qubit posterior over (I, X, Y, Z) given the syndrome, for an iid
/// Pauli channel.
using Marginals = std::vector<std::array<double, 4>>;
Marginals posterior_marginals(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params);
Marginals posterior_marginals(const StabilizerCode& code, const BitVector& s, const PauliChannelParams& params);
/// Plain loop over the syndrome's error list, no threading.
Marginals posterior_marginals_serial(const StabilizerCode& code, std::uint32_t syndrome_idx,
                                     const PauliChannelParams& params);

struct DqmldResult {
  std::size_t logical_class = 0;
  PauliString correction;
  std::vector<double> class_probability;  // normalized over the classes
};

DqmldResult decode_dqmld(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params);
DqmldResult decode_dqmld(const StabilizerCode& code, const BitVector& s, const PauliChannelParams& params);
/// Most probable single error with the syndrome (lowest index on ties).
PauliString decode_qmld(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params);

/// Logical class of an error with zero syndrome.
std::size_t logical_class_of(const StabilizerCode& code, const PauliString& residual);
bool in_stabilizer_group(const StabilizerCode& code, const PauliString& e);
bool is_degenerate_success(const StabilizerCode& code, const PauliString& true_error, const PauliString& correction);

}  // namespace qecc
