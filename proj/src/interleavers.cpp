#include "qecc/interleavers.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace qecc {

bool is_bijection(const std::vector<std::uint32_t>& map) {
  std::vector<bool> hit(map.size(), false);
  for (auto v : map) {
    if (v >= map.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<std::uint32_t> map) : map_(std::move(map)) {
  if (!is_bijection(map_)) throw std::invalid_argument("interleaver map is not a bijection");
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> m(n);
  std::iota(m.begin(), m.end(), 0U);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(inv));
}

Permutation random_interleaver(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> m(n);
  std::iota(m.begin(), m.end(), 0U);
  // Fisher-Yates with our own draw so the result is reproducible across std libs
  for (std::size_t i = n; i > 1; --i) std::swap(m[i - 1], m[rng.below(i)]);
  return Permutation(std::move(m));
}

namespace {

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

namespace {

// |v - out[k]| > s for every filled k within s of position pos (k != pos).
bool fits(const std::vector<std::uint32_t>& out, std::size_t filled, std::size_t pos, std::uint32_t v,
          std::size_t s) {
  const std::size_t lo = pos > s ? pos - s : 0;
  const std::size_t hi = std::min(filled, pos + s + 1);
  for (std::size_t k = lo; k < hi; ++k)
    if (k != pos && absdiff(out[k], v) <= s) return false;
  return true;
}

}  // namespace

Permutation s_random(std::size_t n, std::size_t s, Rng& rng, std::size_t max_restarts) {
  if (n == 0) throw std::invalid_argument("interleaver length must be positive");
  const std::size_t budget = 10 * n;
  constexpr int kQuickDraws = 32;
  std::vector<std::size_t> valid;
  for (std::size_t attempt = 1; attempt <= max_restarts + 1; ++attempt) {
    std::vector<std::uint32_t> pool(n), out(n);
    std::iota(pool.begin(), pool.end(), 0U);
    std::size_t filled = 0, stalls = 0;
    auto take = [&](std::size_t k) {
      const std::uint32_t v = pool[k];
      pool[k] = pool.back();
      pool.pop_back();
      return v;
    };
    while (filled < n && stalls <= budget) {
      // uniform over the admissible values: rejection first, full scan as fallback
      long pick = -1;
      for (int t = 0; t < kQuickDraws && pick < 0; ++t) {
        const std::size_t k = rng.below(pool.size());
        if (fits(out, filled, filled, pool[k], s)) pick = static_cast<long>(k);
      }
      if (pick < 0) {
        valid.clear();
        for (std::size_t k = 0; k < pool.size(); ++k)
          if (fits(out, filled, filled, pool[k], s)) valid.push_back(k);
        if (!valid.empty()) pick = static_cast<long>(valid[rng.below(valid.size())]);
      }
      if (pick >= 0) {
        out[filled++] = take(static_cast<std::size_t>(pick));
        continue;
      }
      // stalled: try to trade a random unused value into a random earlier slot
      ++stalls;
      const std::size_t k = rng.below(pool.size());
      const std::size_t j = rng.below(filled);
      const std::uint32_t old = out[j];
      if (!fits(out, filled, j, pool[k], s)) continue;
      out[j] = pool[k];
      if (!fits(out, filled, filled, old, s)) {
        out[j] = old;
        continue;
      }
      take(k);
      out[filled++] = old;
    }
    if (filled == n) return Permutation(std::move(out));
  }
  throw SRandomError("S-random construction (N=" + std::to_string(n) + ", S=" + std::to_string(s) + ") failed after " +
                         std::to_string(max_restarts + 1) + " attempts",
                     max_restarts + 1);
}

bool satisfies_s_random(const Permutation& p, std::size_t s) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size() && j - i <= s; ++j)
      if (absdiff(p[i], p[j]) <= s) return false;
  return true;
}

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  for (; e; e >>= 1, b = mulmod(b, b, m))
    if (e & 1) r = mulmod(r, b, m);
  return r;
}

}  // namespace

bool is_primitive_root(std::uint64_t alpha, std::uint64_t prime) {
  if (!is_prime(prime) || alpha % prime == 0) return false;
  std::uint64_t order = prime - 1, rest = order;
  for (std::uint64_t q = 2; q * q <= rest; ++q) {
    if (rest % q) continue;
    while (rest % q == 0) rest /= q;
    if (powmod(alpha, order / q, prime) == 1) return false;
  }
  if (rest > 1 && powmod(alpha, order / rest, prime) == 1) return false;
  return true;
}

Permutation welch_costas(std::size_t n, std::uint64_t alpha) {
  const std::uint64_t p = n + 1;
  if (n == 0 || !is_prime(p)) throw std::invalid_argument("Welch-Costas needs N+1 prime, got N=" + std::to_string(n));
  if (!is_primitive_root(alpha, p))
    throw std::invalid_argument(std::to_string(alpha) + " is not a primitive root modulo " + std::to_string(p));
  std::vector<std::uint32_t> m(n);
  std::uint64_t a = 1;
  for (std::size_t i = 0; i < n; ++i, a = mulmod(a, alpha, p)) m[i] = static_cast<std::uint32_t>(a - 1);
  return Permutation(std::move(m));
}

Permutation jpl(std::size_t n, std::size_t k1) {
  static constexpr std::size_t primes[8] = {31, 37, 43, 47, 53, 59, 61, 67};
  if (n == 0 || k1 == 0 || k1 % 2 || n % k1)
    throw std::invalid_argument("JPL needs an even k1 dividing N (N=" + std::to_string(n) + ", k1=" +
                                std::to_string(k1) + ")");
  const std::size_t k2 = n / k1;
  std::vector<std::uint32_t> m(n);
  for (std::size_t s = 1; s <= n; ++s) {
    const std::size_t mm = (s - 1) % 2;
    const std::size_t i = (s - 1) / (2 * k2);
    const std::size_t j = (s - 1) / 2 - i * k2;
    const std::size_t t = (19 * i + 1) % (k1 / 2);
    const std::size_t q = t % 8 + 1;
    const std::size_t c = (primes[q - 1] * j + 21 * mm) % k2;
    const std::size_t pi = 2 * (t + c * (k1 / 2) + 1) - mm;
    m[s - 1] = static_cast<std::uint32_t>(pi - 1);
  }
  if (!is_bijection(m))
    throw std::invalid_argument("JPL recurrence is not a bijection for N=" + std::to_string(n) +
                                ", k1=" + std::to_string(k1));
  return Permutation(std::move(m));
}

std::size_t spread(const Permutation& p) {
  const std::size_t n = p.size();
  // running minimum of |pi(i) - pi(i+g)| over gaps g < s
  std::size_t minsep = n + 1, s = 1;
  while (s < n) {
    std::size_t gmin = n + 1;
    for (std::size_t i = 0; i + s < n; ++i) gmin = std::min(gmin, absdiff(p[i], p[i + s]));
    minsep = std::min(minsep, gmin);
    if (minsep <= s + 1) break;
    ++s;
  }
  return s;
}

namespace {

struct DisplacementSet {
  std::size_t n;
  std::vector<std::uint64_t> words;

  explicit DisplacementSet(std::size_t n_) : n(n_), words((n_ * (2 * n_ - 1) + 63) / 64, 0) {}

  void add(std::size_t dx, long dy) {
    const std::size_t bit = dx * (2 * n - 1) + static_cast<std::size_t>(dy + static_cast<long>(n) - 1);
    words[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }

  void add_row(const Permutation& p, std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) add(j - i, static_cast<long>(p[j]) - static_cast<long>(p[i]));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
};

double pairs(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

}  // namespace

double dispersion_serial(const Permutation& p) {
  const std::size_t n = p.size();
  if (n < 2) throw std::invalid_argument("dispersion needs N >= 2");
  DisplacementSet d(n);
  for (std::size_t i = 0; i < n; ++i) d.add_row(p, i);
  return static_cast<double>(d.count()) / pairs(n);
}

double dispersion(const Permutation& p) {
  const std::size_t n = p.size();
  if (n < 2) throw std::invalid_argument("dispersion needs N >= 2");
  DisplacementSet total(n);
#pragma omp parallel
  {
    DisplacementSet local(n);
#pragma omp for schedule(dynamic, 16) nowait
    for (long i = 0; i < static_cast<long>(n); ++i) local.add_row(p, static_cast<std::size_t>(i));
#pragma omp critical
    for (std::size_t w = 0; w < total.words.size(); ++w) total.words[w] |= local.words[w];
  }
  return static_cast<double>(total.count()) / pairs(n);
}

PauliString apply_interleaver(const Permutation& p, const PauliString& e) {
  if (p.size() != e.size()) throw std::invalid_argument("interleaver and error lengths differ");
  PauliString out(e.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.set(i, e.get(p[i]));
  return out;
}

PauliString apply_deinterleaver(const Permutation& p, const PauliString& e) {
  if (p.size() != e.size()) throw std::invalid_argument("interleaver and error lengths differ");
  PauliString out(e.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.set(p[i], e.get(i));
  return out;
}

void write_permutation(std::ostream& os, const Permutation& p) {
  os << p.size() << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) os << p[i] << (i + 1 == p.size() ? '\n' : ' ');
}

Permutation read_permutation(std::istream& is) {
  std::size_t n = 0;
  if (!(is >> n)) throw std::invalid_argument("permutation file: missing length");
  std::vector<std::uint32_t> m(n);
  for (auto& v : m) {
    long long x = -1;
    if (!(is >> x) || x < 0) throw std::invalid_argument("permutation file: bad or missing target");
    v = static_cast<std::uint32_t>(x);
  }
  return Permutation(std::move(m));
}

}  // namespace qecc
