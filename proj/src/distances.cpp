#include "qecc/distances.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qecc {

namespace {

void require_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

double one_sample(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind, Rng& rng) {
  return diamond(kind, gamma_nominal, tv_gamma_draw(gamma_nominal, mu_t1, dist, rng));
}

void fill_chunk(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind, std::uint64_t seed,
                std::size_t chunk, std::vector<double>& out) {
  Rng rng(seed, chunk);
  const std::size_t begin = chunk * kDiamondChunk;
  const std::size_t end = std::min(out.size(), begin + kDiamondChunk);
  for (std::size_t k = begin; k < end; ++k) out[k] = one_sample(gamma_nominal, mu_t1, dist, kind, rng);
}

// Kernel matrix of the medcouple. zplus / zminus hold x - median sorted
// descending; entries decrease along rows and columns.
struct McKernel {
  std::vector<double> zplus, zminus;

  McKernel(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("medcouple of an empty sample");
    std::sort(x.begin(), x.end(), std::greater<>());
    const std::size_t n = x.size();
    const double m = n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
    for (double v : x) {
      if (v >= m) zplus.push_back(v - m);
      if (v <= m) zminus.push_back(v - m);
    }
  }

  std::size_t p() const { return zplus.size(); }
  std::size_t q() const { return zminus.size(); }

  double operator()(std::size_t i, std::size_t j) const {
    const double a = zplus[i], b = zminus[j];
    if (a == b) {
      // both at the median
      const long s = static_cast<long>(p()) - 1 - static_cast<long>(i) - static_cast<long>(j);
      return static_cast<double>((s > 0) - (s < 0));
    }
    return (a + b) / (a - b);
  }
};

double weighted_median(std::vector<std::pair<double, std::size_t>> vw) {
  std::sort(vw.begin(), vw.end());
  std::size_t total = 0;
  for (auto& [v, w] : vw) total += w;
  std::size_t acc = 0;
  for (auto& [v, w] : vw) {
    acc += w;
    if (2 * acc >= total) return v;
  }
  return vw.back().first;
}

// k-th largest kernel value, 0-based.
double kernel_kth_largest(const McKernel& h, std::size_t k) {
  const std::size_t p = h.p(), q = h.q();
  std::vector<long> left(p, 0), right(p, static_cast<long>(q) - 1);
  std::size_t ltotal = 0, rtotal = p * q;
  std::vector<long> pp(p), qq(p);
  while (rtotal - ltotal > p) {
    std::vector<std::pair<double, std::size_t>> meds;
    for (std::size_t i = 0; i < p; ++i)
      if (left[i] <= right[i])
        meds.emplace_back(h(i, static_cast<std::size_t>((left[i] + right[i]) / 2)),
                          static_cast<std::size_t>(right[i] - left[i] + 1));
    const double wm = weighted_median(std::move(meds));

    // pp[i]: last column with h > wm; qq[i]: first column with h < wm
    long j = 0;
    for (std::size_t ii = p; ii-- > 0;) {
      while (j < static_cast<long>(q) && h(ii, static_cast<std::size_t>(j)) > wm) ++j;
      pp[ii] = j - 1;
    }
    j = static_cast<long>(q) - 1;
    for (std::size_t ii = 0; ii < p; ++ii) {
      while (j >= 0 && h(ii, static_cast<std::size_t>(j)) < wm) --j;
      qq[ii] = j + 1;
    }
    std::size_t ptotal = 0, qtotal = 0;
    for (std::size_t ii = 0; ii < p; ++ii) {
      ptotal += static_cast<std::size_t>(pp[ii] + 1);
      qtotal += static_cast<std::size_t>(qq[ii]);
    }
    if (k < ptotal) {
      right = pp;
      rtotal = ptotal;
    } else if (k >= qtotal) {
      left = qq;
      ltotal = qtotal;
    } else {
      return wm;
    }
  }
  std::vector<double> rest;
  for (std::size_t i = 0; i < p; ++i)
    for (long c = left[i]; c <= right[i]; ++c) rest.push_back(h(i, static_cast<std::size_t>(c)));
  const std::size_t r = k - ltotal;
  std::nth_element(rest.begin(), rest.begin() + static_cast<long>(r), rest.end(), std::greater<>());
  return rest[r];
}

}  // namespace

double diamond_pauli(const PauliChannelParams& a, const PauliChannelParams& b) {
  const auto x = a.as_array();
  const auto y = b.as_array();
  double d = 0.0;
  for (std::size_t k = 0; k < 4; ++k) d += std::abs(x[k] - y[k]);
  return d;
}

double diamond_ad(double gamma1, double gamma2) {
  require_prob(gamma1, "gamma1");
  require_prob(gamma2, "gamma2");
  const double s1 = std::sqrt(1.0 - gamma1);
  const double s2 = std::sqrt(1.0 - gamma2);
  if (s1 + s2 > 1.0) return 2.0 * std::abs(gamma1 - gamma2);
  return 2.0 * std::abs(s1 - s2) / (2.0 - (s1 + s2));
}

double diamond_pd(double lambda1, double lambda2) {
  require_prob(lambda1, "lambda1");
  require_prob(lambda2, "lambda2");
  return std::abs(std::sqrt(1.0 - lambda1) - std::sqrt(1.0 - lambda2));
}

double diamond_ad_twirled(double gamma1, double gamma2) {
  require_prob(gamma1, "gamma1");
  require_prob(gamma2, "gamma2");
  // identity and non-identity parts contribute equally
  return 0.5 * std::abs(gamma1 - gamma2) + std::abs(std::sqrt(1.0 - gamma2) - std::sqrt(1.0 - gamma1));
}

double diamond(ChannelKind kind, double gamma1, double gamma2) {
  return kind == ChannelKind::AD ? diamond_ad(gamma1, gamma2) : diamond_ad_twirled(gamma1, gamma2);
}

double discrimination_error(double distance) {
  if (!(distance >= 0.0 && distance <= 2.0)) throw std::domain_error("diamond distance must lie in [0, 2]");
  return 0.5 - distance / 4.0;
}

double kahan_sum(const std::vector<double>& v) {
  // Neumaier's variant, also exact when a term dwarfs the running sum
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

DiamondTvResult mean_diamond_tv(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind,
                                std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::domain_error("need at least one realization");
  require_outage_gamma(gamma_nominal);
  DiamondTvResult r;
  r.samples.assign(samples, 0.0);
  const long chunks = static_cast<long>((samples + kDiamondChunk - 1) / kDiamondChunk);
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < chunks; ++c)
    fill_chunk(gamma_nominal, mu_t1, dist, kind, seed, static_cast<std::size_t>(c), r.samples);
  r.mean = kahan_sum(r.samples) / static_cast<double>(samples);
  return r;
}

DiamondTvResult mean_diamond_tv_serial(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind,
                                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::domain_error("need at least one realization");
  require_outage_gamma(gamma_nominal);
  DiamondTvResult r;
  r.samples.assign(samples, 0.0);
  const std::size_t chunks = (samples + kDiamondChunk - 1) / kDiamondChunk;
  for (std::size_t c = 0; c < chunks; ++c) fill_chunk(gamma_nominal, mu_t1, dist, kind, seed, c, r.samples);
  r.mean = kahan_sum(r.samples) / static_cast<double>(samples);
  return r;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile level must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double medcouple(std::vector<double> samples) {
  const McKernel h(std::move(samples));
  const std::size_t total = h.p() * h.q();
  if (total % 2) return kernel_kth_largest(h, total / 2);
  return 0.5 * (kernel_kth_largest(h, total / 2 - 1) + kernel_kth_largest(h, total / 2));
}

double medcouple_naive(std::vector<double> samples) {
  const McKernel h(std::move(samples));
  std::vector<double> all;
  all.reserve(h.p() * h.q());
  for (std::size_t i = 0; i < h.p(); ++i)
    for (std::size_t j = 0; j < h.q(); ++j) all.push_back(h(i, j));
  std::sort(all.begin(), all.end());
  const std::size_t n = all.size();
  return n % 2 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
}

BoxplotSummary adjusted_boxplot(const std::vector<double>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("adjusted boxplot needs at least 4 samples");
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  BoxplotSummary b;
  b.Q1 = quantile_sorted(s, 0.25);
  b.median = quantile_sorted(s, 0.5);
  b.Q3 = quantile_sorted(s, 0.75);
  b.MC = medcouple(s);
  const double iqr = b.Q3 - b.Q1;
  const double lo_exp = b.MC >= 0.0 ? -4.0 * b.MC : -3.0 * b.MC;
  const double hi_exp = b.MC >= 0.0 ? 3.0 * b.MC : 4.0 * b.MC;
  b.lower_whisker = b.Q1 - 1.5 * std::exp(lo_exp) * iqr;
  b.upper_whisker = b.Q3 + 1.5 * std::exp(hi_exp) * iqr;
  for (double v : samples)
    if (v < b.lower_whisker || v > b.upper_whisker) b.outliers.push_back(v);
  return b;
}

std::string BoxplotSummary::to_json() const {
  nlohmann::json j{{"Q1", Q1}, {"Q3", Q3}, {"median", median}, {"MC", MC},
                   {"lower_whisker", lower_whisker}, {"upper_whisker", upper_whisker}, {"outliers", outliers}};
  return j.dump();
}

}  // namespace qecc
