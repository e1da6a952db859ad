#include "qecc/info_limits.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qecc/decoherence.hpp"

namespace qecc {

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

template <class F>
double bisect_decreasing(F f, double target, double lo, double hi, double tol) {
  // f decreasing on [lo, hi], f(lo) >= target >= f(hi)
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require_rate(double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("rate must lie in (0, 1)");
}

}  // namespace

ChannelKind parse_channel_kind(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "ad") return ChannelKind::AD;
  if (t == "adpta" || t == "pta") return ChannelKind::ADPTA;
  if (t == "adcta" || t == "cta") return ChannelKind::ADCTA;
  throw std::invalid_argument("unknown channel kind '" + s + "' (want ad, adpta, adcta)");
}

std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::AD: return "AD";
    case ChannelKind::ADPTA: return "ADPTA";
    case ChannelKind::ADCTA: return "ADCTA";
  }
  return "?";
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary entropy needs p in [0, 1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double entropy4(const PauliChannelParams& params) {
  params.validate();
  double h = 0.0;
  for (double v : params.as_array()) h -= xlog2x(v);
  return h;
}

double capacity_ad(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("capacity_ad needs gamma in [0, 1]");
  if (gamma >= 0.5) return 0.0;
  auto f = [gamma](double xi) { return binary_entropy((1.0 - gamma) * xi) - binary_entropy(gamma * xi); };
  constexpr int kGrid = 1024;
  int best = 0;
  double fbest = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = f(static_cast<double>(i) / kGrid);
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  // golden section inside the neighbouring cells
  double a = std::max(0.0, (best - 1.0) / kGrid);
  double b = std::min(1.0, (best + 1.0) / kGrid);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-9) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return std::max({fbest, fc, fd, 0.0});
}

double capacity_pd(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("capacity_pd needs lambda in [0, 1]");
  return 1.0 - binary_entropy((1.0 - std::sqrt(1.0 - lambda)) / 2.0);
}

double hashing_bound(const PauliChannelParams& params) { return 1.0 - entropy4(params); }

double capacity(ChannelKind kind, double gamma) {
  switch (kind) {
    case ChannelKind::AD: return capacity_ad(gamma);
    case ChannelKind::ADPTA: return hashing_bound(pta(gamma, 0.0));
    case ChannelKind::ADCTA: return hashing_bound(cta_params(gamma, 0.0));
  }
  throw std::invalid_argument("bad channel kind");
}

double apd_bottleneck(double gamma, double lambda) { return std::min(capacity_ad(gamma), capacity_pd(lambda)); }

double noise_limit(double rate, ChannelKind kind) {
  require_rate(rate);
  double lo = 1e-9;
  double hi = kind == ChannelKind::AD ? 0.5 - 1e-9 : 1.0 - 1e-9;
  auto c = [kind](double g) { return std::max(0.0, capacity(kind, g)); };
  if (!(c(lo) > rate && c(hi) < rate)) throw std::domain_error("rate outside the achievable range of this channel");
  return bisect_decreasing(c, rate, lo, hi, 1e-12);
}

double depolarizing_hashing_limit(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::domain_error("rate must lie in [0, 1)");
  auto c = [](double p) { return hashing_bound(PauliChannelParams::depolarizing(p)); };
  return bisect_decreasing(c, rate, 1e-12, 0.75, 1e-14);
}

double critical_t1(double rate, double gamma, double mu_t1, ChannelKind kind) {
  require_outage_gamma(gamma);
  if (!(mu_t1 > 0.0)) throw std::domain_error("mu_T1 must be positive");
  return mu_t1 * std::log1p(-gamma) / std::log1p(-noise_limit(rate, kind));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double outage_from_limit(double gamma_star, double gamma, double cv) {
  require_outage_gamma(gamma);
  if (!(cv >= 0.0)) throw std::domain_error("cv must be nonnegative");
  const double ratio = std::log1p(-gamma) / std::log1p(-gamma_star);
  if (cv == 0.0) return ratio < 1.0 ? 0.0 : (ratio > 1.0 ? 1.0 : 0.5);
  const double num = q_function((ratio - 1.0) / cv);
  const double den = 1.0 - q_function(1.0 / cv);
  return std::clamp(1.0 - num / den, 0.0, 1.0);
}

double outage_tvad(double rate, double gamma, double cv) { return outage(rate, gamma, cv, ChannelKind::AD); }

double hashing_outage(double rate, double gamma, double cv, Twirl twirl) {
  return outage(rate, gamma, cv, twirl == Twirl::PTA ? ChannelKind::ADPTA : ChannelKind::ADCTA);
}

double outage(double rate, double gamma, double cv, ChannelKind kind) {
  return outage_from_limit(noise_limit(rate, kind), gamma, cv);
}

double classical_rayleigh_outage(double rate, double snr) {
  if (!(rate >= 0.0)) throw std::domain_error("rate must be nonnegative");
  if (!(snr > 0.0)) throw std::domain_error("SNR must be positive");
  if (std::isinf(snr)) return 0.0;
  return -std::expm1(-(std::exp2(rate) - 1.0) / snr);
}

std::optional<double> crossing(const Curve& c, double level) {
  if (c.x.size() != c.y.size()) throw std::invalid_argument("curve abscissae and ordinates differ in length");
  if (!(level > 0.0)) throw std::domain_error("crossing level must be positive");
  const double ll = std::log(level);
  for (std::size_t i = 0; i + 1 < c.x.size(); ++i) {
    const double y0 = c.y[i], y1 = c.y[i + 1];
    if (y0 == level) return c.x[i];
    if ((y0 < level) == (y1 < level) && y1 != level) continue;
    if (!(y0 > 0.0 && y1 > 0.0 && c.x[i] > 0.0 && c.x[i + 1] > 0.0)) {
      // no log scale available, fall back to linear
      const double t = (level - y0) / (y1 - y0);
      return c.x[i] + t * (c.x[i + 1] - c.x[i]);
    }
    const double l0 = std::log(y0), l1 = std::log(y1);
    const double t = (ll - l0) / (l1 - l0);
    return std::exp(std::log(c.x[i]) + t * (std::log(c.x[i + 1]) - std::log(c.x[i])));
  }
  if (!c.y.empty() && c.y.back() == level) return c.x.back();
  return std::nullopt;
}

std::optional<double> delta_out(const Curve& wer, const Curve& out, double chi) {
  const auto xw = crossing(wer, chi);
  const auto xo = crossing(out, chi);
  if (!xw || !xo || !(*xw > 0.0) || !(*xo > 0.0)) return std::nullopt;
  return 10.0 * std::log10(*xo / *xw);
}

std::string OutageCurve::to_csv() const {
  std::ostringstream os;
  os << "gamma,p_out\n";
  char buf[64];
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", gamma[i], p_out[i]);
    os << buf;
  }
  return os.str();
}

OutageCurve outage_curve(double rate, double cv, ChannelKind kind, const std::vector<double>& gammas) {
  OutageCurve c;
  c.rate = rate;
  c.cv = cv;
  c.kind = kind;
  const double gstar = noise_limit(rate, kind);
  for (double g : gammas) {
    c.gamma.push_back(g);
    c.p_out.push_back(outage_from_limit(gstar, g, cv));
  }
  return c;
}

}  // namespace qecc
