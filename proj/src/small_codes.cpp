#include "qecc/small_codes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qecc {

namespace {

constexpr std::size_t kMarginalChunk = 4096;
constexpr std::size_t kParallelQubits = 8;

using Bits = std::vector<std::uint8_t>;  // (z | x), length 2n

Bits to_bits(const PauliString& p) {
  const std::size_t n = p.size();
  Bits b(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    b[q] = p.z(q);
    b[n + q] = p.x(q);
  }
  return b;
}

PauliString from_bits(const Bits& b) {
  const std::size_t n = b.size() / 2;
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (b[q]) p.flip_z(q);
    if (b[n + q]) p.flip_x(q);
  }
  return p;
}

// Null space of the symplectic-product constraints: all v with <row, v> = 0.
std::vector<PauliString> normalizer_basis(const ParityCheckMatrix& h) {
  const std::size_t n = h.n(), cols = 2 * n;
  std::vector<Bits> a;
  for (const auto& r : h.rows()) {
    // <r, v> = r.x . v.z + r.z . v.x, i.e. a plain dot product with (r.x | r.z)
    Bits b = to_bits(r), sw(cols);
    for (std::size_t q = 0; q < n; ++q) {
      sw[q] = b[n + q];
      sw[n + q] = b[q];
    }
    a.push_back(std::move(sw));
  }
  std::vector<std::size_t> pivcol;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && !a[p][c]) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != row && a[i][c])
        for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= a[row][j];
    pivcol.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivcol) is_pivot[c] = true;
  std::vector<PauliString> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Bits v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i)
      if (a[i][f]) v[pivcol[i]] = 1;
    out.push_back(from_bits(v));
  }
  return out;
}

std::array<double, 4> probs(const PauliChannelParams& params) {
  params.validate();
  return params.as_array();
}

double error_probability(std::uint32_t idx, std::size_t n, const std::array<double, 4>& p) {
  double w = 1.0;
  for (std::size_t q = 0; q < n; ++q, idx >>= 2) w *= p[idx & 3];
  return w;
}

void accumulate(Marginals& m, double& total, std::uint32_t idx, std::size_t n, const std::array<double, 4>& p) {
  const double w = error_probability(idx, n, p);
  total += w;
  for (std::size_t q = 0; q < n; ++q, idx >>= 2) m[q][idx & 3] += w;
}

Marginals normalize(Marginals m, double total) {
  if (!(total > 0.0)) throw std::domain_error("syndrome has zero probability under the channel");
  for (auto& row : m)
    for (double& v : row) v /= total;
  return m;
}

void check_syndrome(const StabilizerCode& code, std::uint32_t s) {
  if (s >= code.num_syndromes()) throw std::invalid_argument("syndrome index out of range");
}

}  // namespace

PauliString error_from_index(std::uint32_t index, std::size_t n) {
  PauliString e(n);
  for (std::size_t q = 0; q < n; ++q, index >>= 2) e.set(q, pauli_from_prob_index(static_cast<int>(index & 3)));
  return e;
}

std::uint32_t index_of_error(const PauliString& e) {
  if (e.size() > 16) throw std::invalid_argument("error too long for a 32-bit index");
  std::uint32_t idx = 0;
  for (std::size_t q = e.size(); q-- > 0;) idx = (idx << 2) | static_cast<std::uint32_t>(prob_index(e.get(q)));
  return idx;
}

PauliString StabilizerCode::logical_of_class(std::size_t c) const {
  PauliString l(n());
  for (std::size_t i = 0; i < k(); ++i) {
    if ((c >> (2 * i)) & 1) l *= x_logicals[i];
    if ((c >> (2 * i + 1)) & 1) l *= z_logicals[i];
  }
  return l;
}

void compute_logicals(const ParityCheckMatrix& h, std::vector<PauliString>& xs, std::vector<PauliString>& zs) {
  Gf2Span span(h.n());
  for (const auto& r : h.rows()) span.insert(r);
  std::vector<PauliString> pool;
  for (const auto& v : normalizer_basis(h))
    if (span.insert(v)) pool.push_back(v);
  xs.clear();
  zs.clear();
  while (!pool.empty()) {
    const PauliString a = pool.front();
    auto it = std::find_if(pool.begin() + 1, pool.end(), [&](const PauliString& b) { return symplectic_product(a, b); });
    if (it == pool.end()) throw std::logic_error("logical operators without a symplectic partner");
    const PauliString b = *it;
    pool.erase(it);
    pool.erase(pool.begin());
    for (auto& c : pool) {
      const int cb = symplectic_product(c, b), ca = symplectic_product(c, a);
      if (cb) c *= a;
      if (ca) c *= b;
    }
    xs.push_back(a);
    zs.push_back(b);
  }
}

StabilizerCode make_stabilizer_code(const std::vector<PauliString>& rows) {
  if (rows.empty()) throw std::invalid_argument("stabilizer code needs at least one generator");
  const std::size_t n = rows.front().size();
  if (n > kMaxEnumeratedQubits)
    throw std::invalid_argument("enumeration limited to " + std::to_string(kMaxEnumeratedQubits) + " qubits");
  if (rows.size() >= n) throw std::invalid_argument("need fewer generators than qubits");
  StabilizerCode code{ParityCheckMatrix(rows, n - rows.size()), {}, {}, {}, {}, {}};
  Gf2Span span(n);
  for (const auto& r : rows)
    if (!span.insert(r)) throw std::invalid_argument("stabilizer generators are not independent");
  compute_logicals(code.H, code.x_logicals, code.z_logicals);
  if (code.x_logicals.size() != code.k()) throw std::logic_error("wrong number of logical pairs");

  // syndrome is linear: XOR of per-qubit contributions
  std::vector<std::array<std::uint32_t, 4>> single(n);
  for (std::size_t q = 0; q < n; ++q)
    for (int g = 0; g < 4; ++g) {
      PauliString e(n);
      e.set(q, pauli_from_prob_index(g));
      single[q][g] = syndrome_index(code.H, e);
    }
  const std::size_t ns = std::size_t{1} << rows.size();
  const std::uint32_t total = std::uint32_t{1} << (2 * n);
  code.errors_by_syndrome.assign(ns, {});
  std::vector<std::uint32_t> best(ns, 0);
  std::vector<std::size_t> best_w(ns, n + 1);
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    std::uint32_t s = 0, rest = idx;
    std::size_t w = 0;
    for (std::size_t q = 0; q < n; ++q, rest >>= 2) {
      s ^= single[q][rest & 3];
      w += (rest & 3) != 0;
    }
    code.errors_by_syndrome[s].push_back(idx);
    if (w < best_w[s] ||
        (w == best_w[s] && error_from_index(idx, n).to_binary() < error_from_index(best[s], n).to_binary())) {
      best_w[s] = w;
      best[s] = idx;
    }
  }
  for (std::size_t s = 0; s < ns; ++s) code.lookup.push_back(error_from_index(best[s], n));
  code.error_class.assign(total, 0);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::uint32_t idx : code.errors_by_syndrome[s])
      code.error_class[idx] =
          static_cast<std::uint8_t>(logical_class_of(code, error_from_index(idx, n) * code.lookup[s]));
  return code;
}

StabilizerCode five_qubit_code() {
  return make_stabilizer_code({PauliString::from_labels("ZZZZI"), PauliString::from_labels("ZXYIZ"),
                               PauliString::from_labels("XXXXI"), PauliString::from_labels("XYZIX")});
}

std::uint32_t syndrome_key(const StabilizerCode& code, const BitVector& s) {
  if (s.size() != code.H.num_rows())
    throw std::invalid_argument("syndrome has " + std::to_string(s.size()) + " bits, expected " +
                                std::to_string(code.H.num_rows()));
  std::uint32_t key = 0;
  for (auto b : s) key = (key << 1) | (b & 1U);
  return key;
}

PauliString decode_lookup(const StabilizerCode& code, const BitVector& s) { return code.lookup[syndrome_key(code, s)]; }

PauliString decode_lookup(const StabilizerCode& code, std::uint32_t syndrome_idx) {
  check_syndrome(code, syndrome_idx);
  return code.lookup[syndrome_idx];
}

Marginals posterior_marginals_serial(const StabilizerCode& code, std::uint32_t syndrome_idx,
                                     const PauliChannelParams& params) {
  check_syndrome(code, syndrome_idx);
  const auto p = probs(params);
  const std::size_t n = code.n();
  Marginals m(n, {0.0, 0.0, 0.0, 0.0});
  double total = 0.0;
  for (std::uint32_t idx : code.errors_by_syndrome[syndrome_idx]) accumulate(m, total, idx, n, p);
  return normalize(std::move(m), total);
}

Marginals posterior_marginals(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params) {
  if (code.n() < kParallelQubits) return posterior_marginals_serial(code, syndrome_idx, params);
  check_syndrome(code, syndrome_idx);
  const auto p = probs(params);
  const std::size_t n = code.n();
  const auto& bucket = code.errors_by_syndrome[syndrome_idx];
  const long chunks = static_cast<long>((bucket.size() + kMarginalChunk - 1) / kMarginalChunk);
  std::vector<Marginals> part(static_cast<std::size_t>(chunks), Marginals(n, {0.0, 0.0, 0.0, 0.0}));
  std::vector<double> part_total(static_cast<std::size_t>(chunks), 0.0);
  // fixed chunk partition, combined in order: result independent of thread count
#pragma omp parallel for schedule(static)
  for (long c = 0; c < chunks; ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kMarginalChunk;
    const std::size_t e = std::min(bucket.size(), b + kMarginalChunk);
    for (std::size_t i = b; i < e; ++i)
      accumulate(part[static_cast<std::size_t>(c)], part_total[static_cast<std::size_t>(c)], bucket[i], n, p);
  }
  Marginals m(n, {0.0, 0.0, 0.0, 0.0});
  double total = 0.0;
  for (std::size_t c = 0; c < part.size(); ++c) {
    total += part_total[c];
    for (std::size_t q = 0; q < n; ++q)
      for (int g = 0; g < 4; ++g) m[q][g] += part[c][q][g];
  }
  return normalize(std::move(m), total);
}

Marginals posterior_marginals(const StabilizerCode& code, const BitVector& s, const PauliChannelParams& params) {
  return posterior_marginals(code, syndrome_key(code, s), params);
}

DqmldResult decode_dqmld(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params) {
  check_syndrome(code, syndrome_idx);
  const auto p = probs(params);
  DqmldResult r;
  r.class_probability.assign(code.num_classes(), 0.0);
  for (std::uint32_t idx : code.errors_by_syndrome[syndrome_idx])
    r.class_probability[code.error_class[idx]] += error_probability(idx, code.n(), p);
  double total = 0.0;
  for (double v : r.class_probability) total += v;
  if (!(total > 0.0)) throw std::domain_error("syndrome has zero probability under the channel");
  for (double& v : r.class_probability) v /= total;
  r.logical_class = static_cast<std::size_t>(
      std::max_element(r.class_probability.begin(), r.class_probability.end()) - r.class_probability.begin());
  r.correction = code.lookup[syndrome_idx] * code.logical_of_class(r.logical_class);
  return r;
}

DqmldResult decode_dqmld(const StabilizerCode& code, const BitVector& s, const PauliChannelParams& params) {
  return decode_dqmld(code, syndrome_key(code, s), params);
}

PauliString decode_qmld(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& params) {
  check_syndrome(code, syndrome_idx);
  const auto p = probs(params);
  std::uint32_t best = 0;
  double best_w = -1.0;
  for (std::uint32_t idx : code.errors_by_syndrome[syndrome_idx]) {
    const double w = error_probability(idx, code.n(), p);
    if (w > best_w) {
      best_w = w;
      best = idx;
    }
  }
  return error_from_index(best, code.n());
}

std::size_t logical_class_of(const StabilizerCode& code, const PauliString& residual) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < code.k(); ++i) {
    c |= static_cast<std::size_t>(symplectic_product(residual, code.z_logicals[i])) << (2 * i);
    c |= static_cast<std::size_t>(symplectic_product(residual, code.x_logicals[i])) << (2 * i + 1);
  }
  return c;
}

bool in_stabilizer_group(const StabilizerCode& code, const PauliString& e) {
  Gf2Span span(code.n());
  for (const auto& r : code.H.rows()) span.insert(r);
  return span.contains(e);
}

bool is_degenerate_success(const StabilizerCode& code, const PauliString& true_error, const PauliString& correction) {
  const PauliString r = true_error * correction;
  // zero syndrome puts r in the normalizer; class 0 there is the stabilizer group
  if (syndrome_index(code.H, r) != 0) return false;
  return logical_class_of(code, r) == 0;
}

}  // namespace qecc
