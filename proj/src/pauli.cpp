#include "qecc/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qecc {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("Pauli strings differ in qubit count: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': case '_': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: break;
  }
  throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
}

PauliString::PauliString(std::size_t n) : n_(n), z_(words_for(n), 0), x_(words_for(n), 0) {}

PauliString PauliString::from_labels(std::string_view labels) {
  PauliString p(labels.size());
  for (std::size_t q = 0; q < labels.size(); ++q) p.set(q, pauli_from_char(labels[q]));
  return p;
}

PauliString PauliString::from_binary(std::string_view bits) {
  const auto bar = bits.find('|');
  if (bar == std::string_view::npos) throw std::invalid_argument("binary Pauli form needs a '|' separator");
  const auto zs = bits.substr(0, bar);
  const auto xs = bits.substr(bar + 1);
  if (zs.size() != xs.size()) throw std::invalid_argument("z and x halves differ in length");
  PauliString p(zs.size());
  for (std::size_t q = 0; q < zs.size(); ++q) {
    for (auto [ch, is_z] : {std::pair{zs[q], true}, std::pair{xs[q], false}}) {
      if (ch != '0' && ch != '1') throw std::invalid_argument(std::string("bad bit '") + ch + "'");
      if (ch == '1') is_z ? p.flip_z(q) : p.flip_x(q);
    }
  }
  return p;
}

std::string PauliString::to_labels() const {
  std::string s(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) s[q] = pauli_char(get(q));
  return s;
}

std::string PauliString::to_binary() const {
  std::string s;
  s.reserve(2 * n_ + 1);
  for (std::size_t q = 0; q < n_; ++q) s.push_back(z(q) ? '1' : '0');
  s.push_back('|');
  for (std::size_t q = 0; q < n_; ++q) s.push_back(x(q) ? '1' : '0');
  return s;
}

Pauli PauliString::get(std::size_t q) const {
  return static_cast<Pauli>((static_cast<unsigned>(z(q)) << 1) | static_cast<unsigned>(x(q)));
}

void PauliString::set(std::size_t q, Pauli p) {
  const auto v = static_cast<unsigned>(p);
  const std::uint64_t mask = std::uint64_t{1} << (q & 63);
  auto& zw = z_[q >> 6];
  auto& xw = x_[q >> 6];
  zw = (v & 2U) ? (zw | mask) : (zw & ~mask);
  xw = (v & 1U) ? (xw | mask) : (xw & ~mask);
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < z_.size(); ++i) w += static_cast<std::size_t>(std::popcount(z_[i] | x_[i]));
  return w;
}

bool PauliString::is_identity() const {
  for (std::size_t i = 0; i < z_.size(); ++i)
    if (z_[i] | x_[i]) return false;
  return true;
}

PauliString& PauliString::operator*=(const PauliString& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < z_.size(); ++i) {
    z_[i] ^= other.z_[i];
    x_[i] ^= other.x_[i];
  }
  return *this;
}

int symplectic_product(const PauliString& u, const PauliString& v) {
  require_same_size(u, v);
  const auto& uz = u.z_words();
  const auto& ux = u.x_words();
  const auto& vz = v.z_words();
  const auto& vx = v.x_words();
  unsigned parity = 0;
  for (std::size_t i = 0; i < uz.size(); ++i)
    parity ^= static_cast<unsigned>(std::popcount((uz[i] & vx[i]) ^ (vz[i] & ux[i])));
  return static_cast<int>(parity & 1U);
}

PauliString pauli_multiply(const PauliString& a, const PauliString& b) { return a * b; }

ParityCheckMatrix::ParityCheckMatrix(std::vector<PauliString> rows, std::size_t k)
    : rows_(std::move(rows)), n_(rows_.empty() ? 0 : rows_.front().size()), k_(k) {
  for (const auto& r : rows_)
    if (r.size() != n_) throw std::invalid_argument("parity check rows differ in length");
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = i + 1; j < rows_.size(); ++j)
      if (symplectic_product(rows_[i], rows_[j]) != 0)
        throw std::invalid_argument("stabilizer rows " + std::to_string(i) + " and " + std::to_string(j) +
                                    " anticommute");
}

BitVector syndrome(const ParityCheckMatrix& h, const PauliString& e) {
  if (e.size() != h.n()) throw std::invalid_argument("error length does not match code length");
  BitVector s(h.num_rows());
  for (std::size_t r = 0; r < h.num_rows(); ++r) s[r] = static_cast<std::uint8_t>(symplectic_product(h.rows()[r], e));
  return s;
}

std::uint32_t syndrome_index(const ParityCheckMatrix& h, const PauliString& e) {
  if (h.num_rows() > 32) throw std::invalid_argument("syndrome_index supports at most 32 rows");
  std::uint32_t idx = 0;
  for (const auto& row : h.rows()) idx = (idx << 1) | static_cast<std::uint32_t>(symplectic_product(row, e));
  return idx;
}

long Gf2Span::pivot_of(const PauliString& v) {
  // Pivot over the concatenated (z|x) vector: z bits first.
  const auto& zw = v.z_words();
  for (std::size_t i = 0; i < zw.size(); ++i)
    if (zw[i]) return static_cast<long>(i * 64 + static_cast<std::size_t>(std::countr_zero(zw[i])));
  const auto& xw = v.x_words();
  const long off = static_cast<long>(zw.size() * 64);
  for (std::size_t i = 0; i < xw.size(); ++i)
    if (xw[i]) return off + static_cast<long>(i * 64 + static_cast<std::size_t>(std::countr_zero(xw[i])));
  return -1;
}

PauliString Gf2Span::reduce(PauliString v) const {
  const long off = static_cast<long>(v.z_words().size() * 64);
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    const long p = pivots_[b];
    const bool set = p < off ? v.z(static_cast<std::size_t>(p)) : v.x(static_cast<std::size_t>(p - off));
    if (set) v *= basis_[b];
  }
  return v;
}

bool Gf2Span::insert(const PauliString& v) {
  if (v.size() != n_) throw std::invalid_argument("vector length does not match span");
  PauliString r = reduce(v);
  const long p = pivot_of(r);
  if (p < 0) return false;
  // Keep the basis fully reduced so reduce() can do a single pass.
  const long off = static_cast<long>(r.z_words().size() * 64);
  for (auto& b : basis_) {
    const bool set = p < off ? b.z(static_cast<std::size_t>(p)) : b.x(static_cast<std::size_t>(p - off));
    if (set) b *= r;
  }
  basis_.push_back(std::move(r));
  pivots_.push_back(p);
  return true;
}

bool Gf2Span::contains(const PauliString& v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length does not match span");
  return reduce(v).is_identity();
}

}  // namespace qecc
