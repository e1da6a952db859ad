#pragma once

// Closed-form diamond norm distances, the round-averaged TV-vs-static distance
// and skew-adjusted boxplots.

#include <cstdint>
#include <string>
#include <vector>

#include "qecc/channels.hpp"
#include "qecc/decoherence.hpp"
#include "qecc/info_limits.hpp"

namespace qecc {

double diamond_pauli(const PauliChannelParams& a, const PauliChannelParams& b);
double diamond_ad(double gamma1, double gamma2);
double diamond_pd(double lambda1, double lambda2);
/// Shared by the PTA and CTA of amplitude damping.
double diamond_ad_twirled(double gamma1, double gamma2);
double diamond(ChannelKind kind, double gamma1, double gamma2);

/// Minimum error probability when discriminating two channels: 1/2 - d/4.
double discrimination_error(double distance);

struct DiamondTvResult {
  double mean = 0.0;
  std::vector<double> samples;
};

/// L realizations gamma(omega) against the static gamma_nominal. Sample k uses
/// substream k / kDiamondChunk of seed, so results do not depend on threads.
inline constexpr std::size_t kDiamondChunk = 1024;
DiamondTvResult mean_diamond_tv(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind,
                                std::size_t samples, std::uint64_t seed);
/// Single-threaded reference, identical output.
DiamondTvResult mean_diamond_tv_serial(double gamma_nominal, double mu_t1, const TruncGauss& dist, ChannelKind kind,
                                       std::size_t samples, std::uint64_t seed);

/// Compensated sum in index order.
double kahan_sum(const std::vector<double>& v);

/// Type-7 quantile (linear interpolation of order statistics) of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// O(n log n) medcouple.
double medcouple(std::vector<double> samples);
/// O(n^2) pairwise-kernel medcouple, same tie convention.
double medcouple_naive(std::vector<double> samples);

struct BoxplotSummary {
  double Q1 = 0.0;
  double Q3 = 0.0;
  double median = 0.0;
  double MC = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::vector<double> outliers;

  std::string to_json() const;
};

/// Needs at least 4 samples.
BoxplotSummary adjusted_boxplot(const std::vector<double>& samples);

}  // namespace qecc
