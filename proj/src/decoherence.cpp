#include "qecc/decoherence.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qecc/channels.hpp"

namespace qecc {

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

void TvPreset::validate() const {
  for (double v : {mu_t1, sigma_t1, h0, a1, inv_tau01, a2, inv_tau02})
    if (!(v > 0.0)) throw std::invalid_argument("preset " + name + ": every magnitude must be positive");
  if (!(cv() > 0.0 && cv() < 1.0)) throw std::invalid_argument("preset " + name + ": cv must lie in (0, 1)");
  if (mu_tphi.has_value() != sigma_tphi.has_value())
    throw std::invalid_argument("preset " + name + ": mu_tphi and sigma_tphi go together");
  if (mu_tphi && !(*mu_tphi > 0.0 && *sigma_tphi > 0.0))
    throw std::invalid_argument("preset " + name + ": Tphi magnitudes must be positive");
}

std::vector<TvPreset> builtin_presets() {
  return {
      {"QA_C5", 44.49, 11.7, 2e-3, 5.2, 142.9, 2.6, 83.3, std::nullopt, std::nullopt},
      {"QB_C5", 81.63, 17.01, 1.4e-2, 3.2, 1000.0, 6.6, 90.9, std::nullopt, std::nullopt},
      {"QA_C6", 46.64, 10.24, 1.2e-3, 4.5, 333.3, 1.8, 71.4, std::nullopt, std::nullopt},
      {"QB_C6", 71.22, 14.31, 5.7e-3, 4.2, 1111.1, 2.2, 76.9, std::nullopt, std::nullopt},
  };
}

TvPreset find_preset(const std::string& name) {
  for (auto& p : builtin_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<TvPreset> presets_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("preset file must hold a JSON array");
  std::vector<TvPreset> out;
  for (const auto& r : doc) {
    TvPreset p;
    p.name = r.at("name").get<std::string>();
    p.mu_t1 = r.at("mu_t1").get<double>();
    p.sigma_t1 = r.at("sigma_t1").get<double>();
    p.h0 = r.at("h0").get<double>();
    p.a1 = r.at("a1").get<double>();
    p.inv_tau01 = r.at("inv_tau01").get<double>();
    p.a2 = r.at("a2").get<double>();
    p.inv_tau02 = r.at("inv_tau02").get<double>();
    if (r.contains("mu_tphi")) p.mu_tphi = r.at("mu_tphi").get<double>();
    if (r.contains("sigma_tphi")) p.sigma_tphi = r.at("sigma_tphi").get<double>();
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

std::string presets_to_json(const std::vector<TvPreset>& presets) {
  auto doc = nlohmann::json::array();
  for (const auto& p : presets) {
    nlohmann::json r{{"name", p.name},   {"mu_t1", p.mu_t1},         {"sigma_t1", p.sigma_t1},
                     {"h0", p.h0},       {"a1", p.a1},               {"inv_tau01", p.inv_tau01},
                     {"a2", p.a2},       {"inv_tau02", p.inv_tau02}};
    if (p.mu_tphi) r["mu_tphi"] = *p.mu_tphi;
    if (p.sigma_tphi) r["sigma_tphi"] = *p.sigma_tphi;
    doc.push_back(std::move(r));
  }
  return doc.dump(2);
}

double TruncGauss::mass() const {
  if (sigma == 0.0) return 1.0;
  return big_phi((upper - mu) / sigma) - big_phi((lower - mu) / sigma);
}

double TruncGauss::pdf(double x) const {
  if (x < lower || x > upper) return 0.0;
  return phi((x - mu) / sigma) / (sigma * mass());
}

double TruncGauss::cdf(double x) const {
  if (x <= lower) return 0.0;
  if (x >= upper) return 1.0;
  return (big_phi((x - mu) / sigma) - big_phi((lower - mu) / sigma)) / mass();
}

double TruncGauss::mean() const {
  if (sigma == 0.0) return mu;
  const double a = (lower - mu) / sigma;
  const double b = (upper - mu) / sigma;
  const double pb = std::isinf(b) ? 0.0 : phi(b);
  return mu + sigma * (phi(a) - pb) / mass();
}

double TruncGauss::variance() const {
  if (sigma == 0.0) return 0.0;
  const double a = (lower - mu) / sigma;
  const double b = (upper - mu) / sigma;
  const double z = mass();
  const double pa = std::isinf(a) ? 0.0 : phi(a);
  const double pb = std::isinf(b) ? 0.0 : phi(b);
  const double apa = std::isinf(a) ? 0.0 : a * pa;
  const double bpb = std::isinf(b) ? 0.0 : b * pb;
  const double r = (pa - pb) / z;
  return sigma * sigma * (1.0 + (apa - bpb) / z - r * r);
}

double sample_trunc_gauss(const TruncGauss& dist, Rng& rng) {
  if (!(dist.sigma >= 0.0)) throw std::domain_error("truncated Gaussian needs sigma >= 0");
  if (!(dist.lower < dist.upper)) throw std::domain_error("truncated Gaussian needs lower < upper");
  if (dist.sigma == 0.0) return std::min(std::max(dist.mu, dist.lower), dist.upper);
  if (dist.mass() < 1e-6) throw std::domain_error("truncation window holds almost no mass; rejection would stall");
  for (;;) {
    const double x = dist.mu + dist.sigma * rng.normal();
    if (x >= dist.lower && x <= dist.upper) return x;
  }
}

double sample_t1(const TruncGauss& dist, Rng& rng) { return sample_trunc_gauss(dist, rng); }

std::vector<double> simulate_lorentzian(double amplitude, double tau0, double fs, std::size_t n, Rng& rng) {
  if (!(fs > 0.0)) throw std::domain_error("sampling frequency must be positive");
  if (!(tau0 > 0.0)) throw std::domain_error("tau0 must be positive");
  std::vector<double> out(n, 0.0);
  if (amplitude == 0.0 || n == 0) return out;
  const double a = std::exp(-1.0 / (fs * tau0));
  const double sd = std::sqrt(2.0) * std::abs(amplitude);
  const double innov = sd * std::sqrt(-std::expm1(-2.0 / (fs * tau0)));
  double x = sd * rng.normal();
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = x;
    x = a * x + innov * rng.normal();
  }
  return out;
}

std::vector<double> simulate_t1_series(const TvPreset& preset, double fs, std::size_t n, Rng& rng) {
  if (!(fs > 0.0)) throw std::domain_error("sampling frequency must be positive");
  if (n == 0) throw std::domain_error("series length must be positive");
  // inv_tau0 is in uHz
  const double tau01 = 1e6 / preset.inv_tau01;
  const double tau02 = 1e6 / preset.inv_tau02;
  const double fmax = 1e-6 * std::max(preset.inv_tau01, preset.inv_tau02);
  if (!(fs > 2.0 * fmax)) throw std::domain_error("fs must exceed twice the largest Lorentzian corner 1/tau0");
  const auto l1 = simulate_lorentzian(preset.a1, tau01, fs, n, rng);
  const auto l2 = simulate_lorentzian(preset.a2, tau02, fs, n, rng);
  const double white_sd = std::sqrt(preset.h0 * fs * kWhiteNoiseBandFactor);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = preset.mu_t1 + l1[k] + l2[k] + (white_sd > 0.0 ? white_sd * rng.normal() : 0.0);
  return out;
}

double psd_sigma_t1(const TvPreset& preset) { return std::sqrt(2.0 * preset.a1 * preset.a1 + 2.0 * preset.a2 * preset.a2); }

void require_outage_gamma(double gamma) {
  const double gmax = -std::expm1(-1.0);
  if (!(gamma > 0.0 && gamma <= gmax + 1e-15))
    throw std::domain_error("gamma must lie in (0, 1 - e^-1] = (0, 0.63212]");
}

double gamma_for_t1(double gamma_nominal, double mu_t1, double t1) {
  if (!(t1 > 0.0)) throw std::domain_error("T1 realization must be positive");
  if (t1 == mu_t1) return gamma_nominal;
  const double g = -std::expm1(std::log1p(-gamma_nominal) * mu_t1 / t1);
  // tiny T1 draws round up to 1.0 in double
  return std::min(g, std::nextafter(1.0, 0.0));
}

double tv_gamma_draw(double gamma_nominal, double mu_t1, const TruncGauss& dist, Rng& rng) {
  require_outage_gamma(gamma_nominal);
  if (!(mu_t1 > 0.0)) throw std::domain_error("mu_T1 must be positive");
  double t1 = sample_t1(dist, rng);
  // a zero draw has probability zero but would give gamma = 1; redraw to stay inside (0, 1)
  while (!(t1 > 0.0)) t1 = sample_t1(dist, rng);
  return gamma_for_t1(gamma_nominal, mu_t1, t1);
}

RelaxationDraw draw_relaxation(const TvPreset& preset, Rng& rng) {
  RelaxationDraw d{};
  d.t1 = sample_t1(TruncGauss{preset.mu_t1, preset.sigma_t1}, rng);
  if (preset.mu_tphi) {
    double tphi = sample_trunc_gauss(TruncGauss{*preset.mu_tphi, *preset.sigma_tphi}, rng);
    while (!(tphi > 0.0)) tphi = sample_trunc_gauss(TruncGauss{*preset.mu_tphi, *preset.sigma_tphi}, rng);
    d.t2 = t2_from_tphi(d.t1, tphi);
  } else {
    d.t2 = 2.0 * d.t1;
  }
  return d;
}

}  // namespace qecc
