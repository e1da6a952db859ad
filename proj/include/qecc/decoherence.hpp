#pragma once

// Stochastic T1 / Tphi fluctuation models: truncated Gaussian block draws,
// Lorentzian + white noise time series, measured-qubit presets.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qecc/rng.hpp"

namespace qecc {

/// h0 is read as a one-sided PSD level, so the discrete white noise variance
/// is h0 * fs * kWhiteNoiseBandFactor.
inline constexpr double kWhiteNoiseBandFactor = 0.5;

struct TvPreset {
  std::string name;
  double mu_t1 = 0.0;      // us
  double sigma_t1 = 0.0;   // us
  double h0 = 0.0;         // us^2 / Hz
  double a1 = 0.0;         // us
  double inv_tau01 = 0.0;  // uHz
  double a2 = 0.0;         // us
  double inv_tau02 = 0.0;  // uHz
  std::optional<double> mu_tphi;     // us
  std::optional<double> sigma_tphi;  // us

  double cv() const { return sigma_t1 / mu_t1; }
  /// Throws std::invalid_argument on non-positive magnitudes or cv outside (0, 1).
  void validate() const;
};

std::vector<TvPreset> builtin_presets();
/// Throws std::invalid_argument for unknown names.
TvPreset find_preset(const std::string& name);

/// JSON array of preset records.
std::vector<TvPreset> presets_from_json(const std::string& text);
std::string presets_to_json(const std::vector<TvPreset>& presets);

/// Gaussian N(mu, sigma^2) restricted to [lower, upper].
struct TruncGauss {
  double mu = 0.0;
  double sigma = 1.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  /// Mass of the untruncated normal inside [lower, upper].
  double mass() const;
  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const;
  double variance() const;
};

/// Rejection from the untruncated normal; sigma == 0 returns mu.
double sample_trunc_gauss(const TruncGauss& dist, Rng& rng);
double sample_t1(const TruncGauss& dist, Rng& rng);

/// Zero-mean stationary AR(1) Lorentzian: pole exp(-dt/tau0), variance 2 A^2.
/// tau0 in seconds, fs in Hz.
std::vector<double> simulate_lorentzian(double amplitude, double tau0, double fs, std::size_t n, Rng& rng);

/// mu_T1 + two Lorentzians + white noise, in us. fs in Hz.
std::vector<double> simulate_t1_series(const TvPreset& preset, double fs, std::size_t n, Rng& rng);

/// sqrt(2 A1^2 + 2 A2^2): the T1 standard deviation implied by the Lorentzian
/// PSDs alone (white part excluded, its integral grows with bandwidth).
double psd_sigma_t1(const TvPreset& preset);

/// Fixes t = -mu_T1 ln(1 - gamma), draws T1, returns 1 - (1 - gamma)^(mu_T1 / T1).
/// gamma must lie in (0, 1 - e^-1].
double tv_gamma_draw(double gamma_nominal, double mu_t1, const TruncGauss& dist, Rng& rng);
/// Same map for a given T1 realization.
double gamma_for_t1(double gamma_nominal, double mu_t1, double t1);
void require_outage_gamma(double gamma);

struct RelaxationDraw {
  double t1;
  double t2;
};
/// T1 from the preset; Tphi drawn independently when present, otherwise T2 = 2 T1.
RelaxationDraw draw_relaxation(const TvPreset& preset, Rng& rng);

}  // namespace qecc
