#pragma once

// Capacities, hashing bounds, noise limits and outage probabilities.

#include <optional>
#include <string>
#include <vector>

#include "qecc/channels.hpp"

namespace qecc {

enum class ChannelKind { AD, ADPTA, ADCTA };
enum class Twirl { PTA, CTA };

/// "ad", "adpta", "adcta" (case-insensitive); throws std::invalid_argument.
ChannelKind parse_channel_kind(const std::string& s);
std::string to_string(ChannelKind k);

double binary_entropy(double p);
double entropy4(const PauliChannelParams& params);

double capacity_ad(double gamma);
double capacity_pd(double lambda);
double hashing_bound(const PauliChannelParams& params);
/// AD capacity, or the hashing bound of the PTA / CTA of AD(gamma).
double capacity(ChannelKind kind, double gamma);
/// min(C_AD(gamma), C_PD(lambda)): bottleneck upper bound for APD, diagnostic only.
double apd_bottleneck(double gamma, double lambda);

/// gamma* with C(gamma*) = rate, bisection to 1e-12 in gamma.
double noise_limit(double rate, ChannelKind kind);
/// Depolarizing p with hashing bound equal to rate (rate = 0 gives ~0.1893).
double depolarizing_hashing_limit(double rate);

/// mu_T1 ln(1 - gamma) / ln(1 - gamma*(rate)).
double critical_t1(double rate, double gamma, double mu_t1, ChannelKind kind);

double q_function(double x);

/// Outage for a given noise limit; cv == 0 gives the step (0 below, 1 above, 1/2 at).
double outage_from_limit(double gamma_star, double gamma, double cv);
double outage_tvad(double rate, double gamma, double cv);
double hashing_outage(double rate, double gamma, double cv, Twirl twirl);
double outage(double rate, double gamma, double cv, ChannelKind kind);

double classical_rayleigh_outage(double rate, double snr);

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

/// First abscissa where y crosses level, log(y) interpolated linearly in log(x).
std::optional<double> crossing(const Curve& c, double level);
/// 10 log10(x_out / x_wer) at the level-chi crossings; empty if either curve misses chi.
std::optional<double> delta_out(const Curve& wer, const Curve& out, double chi);

struct OutageCurve {
  double rate = 0.0;
  double cv = 0.0;
  ChannelKind kind = ChannelKind::AD;
  std::vector<double> gamma;
  std::vector<double> p_out;

  /// "gamma,p_out" header then rows with 12 significant digits.
  std::string to_csv() const;
};

OutageCurve outage_curve(double rate, double cv, ChannelKind kind, const std::vector<double>& gammas);

}  // namespace qecc
