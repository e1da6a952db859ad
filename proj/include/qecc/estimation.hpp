#pragma once

// Channel identification: Fisher information / Cramer-Rao bounds, WER
// averaged over the estimator's distribution, and the online estimator fed
// by decoder posteriors.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecc/channels.hpp"
#include "qecc/decoherence.hpp"
#include "qecc/small_codes.hpp"

namespace qecc {

enum class Probe { Pure, Epr };
Probe parse_probe(const std::string& s);
const char* to_string(Probe p);

struct EstimatorModel {
  Probe probe = Probe::Epr;
  std::size_t n = 1;  // probe count
  double p = 0.1;
  void validate() const;
};

/// Single-use Fisher information of the depolarizing probability.
double fisher(double p, Probe probe);
double cramer_rao_var(double p, Probe probe, std::size_t n);
/// Normal(p, 1 / (N J1)) truncated to [0, 1].
TruncGauss estimator_pdf(double p, Probe probe, std::size_t n);

/// Tabulated WER(p_hat); linear inside, flat outside the knots.
class SensitivityCurve {
 public:
  SensitivityCurve(std::vector<double> p_hat, std::vector<double> wer);
  double operator()(double p_hat) const;
  const std::vector<double>& p_hat() const { return x_; }
  const std::vector<double>& wer() const { return y_; }

 private:
  std::vector<double> x_, y_;
};

/// Two columns "p_hat,wer"; a header line and '#' comments are skipped.
SensitivityCurve read_sensitivity_csv(std::istream& is);

inline constexpr double kAveragedWerRelTol = 1e-6;

/// Integral of WER(p_hat) against the estimator density, adaptive Simpson.
double averaged_wer(const SensitivityCurve& curve, double p, Probe probe, std::size_t n);
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth = 50);

/// 1 - mean_i P(E_i = I | s).
double online_estimate_step(const Marginals& m);

struct AsymmetricEstimate {
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
  std::optional<double> alpha;  // pz / px, absent when px == 0
};
AsymmetricEstimate online_estimate_step_asym(const Marginals& m);

enum class EstimatorKind { Depolarizing, Pauli };

inline constexpr std::size_t kOnlineMaxIters = 32;
inline constexpr double kOnlineTolerance = 1e-9;
inline constexpr double kOnlineClamp = 1e-12;

struct OnlineResult {
  std::vector<PauliChannelParams> trajectory;  // [0] is the initial value
  PauliChannelParams estimate;
  std::size_t logical_class = 0;
  std::size_t iterations = 0;
  double p_hat() const { return estimate.p(); }
  std::optional<double> alpha() const;
};

class OnlineEstimationError : public std::runtime_error {
 public:
  OnlineEstimationError(const std::string& what, std::vector<PauliChannelParams> trajectory)
      : std::runtime_error(what), trajectory_(std::move(trajectory)) {}
  const std::vector<PauliChannelParams>& trajectory() const { return trajectory_; }

 private:
  std::vector<PauliChannelParams> trajectory_;
};

/// Starting point below the code's hashing limit: p* for the depolarizing
/// estimator, p*/3 per component for the Pauli one.
PauliChannelParams online_default_init(const StabilizerCode& code, EstimatorKind kind);

/// Fixed point of posterior -> estimate -> prior, no damping.
OnlineResult online_decode(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& init,
                           EstimatorKind kind, std::size_t max_iters = kOnlineMaxIters,
                           double tolerance = kOnlineTolerance);

/// Online estimation over B independent blocks read as one long codeword:
/// each iteration averages the estimator step over all 5B qubits, i.e. over
/// the blocks' syndromes weighted by how often they occur.
struct JointOnlineResult {
  std::vector<PauliChannelParams> trajectory;  // [0] is the initial value
  PauliChannelParams estimate;
  std::size_t iterations = 0;
  std::size_t blocks = 0;
  double p_hat() const { return estimate.p(); }
  std::optional<double> alpha() const;
};

/// syndrome_weights[s] >= 0 (counts or probabilities, normalized inside).
JointOnlineResult online_estimate_joint(const StabilizerCode& code, const std::vector<double>& syndrome_weights,
                                        const PauliChannelParams& init, EstimatorKind kind,
                                        std::size_t max_iters = kOnlineMaxIters, double tolerance = kOnlineTolerance);

/// Exact syndrome distribution of an iid Pauli channel.
std::vector<double> syndrome_distribution(const StabilizerCode& code, const PauliChannelParams& truth);

/// Enumeration oracle for the joint estimator: the infinite-block limit
/// (exact syndrome probabilities) and the per-block standard deviations of
/// p_hat and alpha_hat from linearizing the fixed point, so a run over B
/// blocks lies within limit +- 3 sd / sqrt(B).
struct OnlineOracle {
  PauliChannelParams limit;
  double sd_p = 0.0;
  double sd_alpha = 0.0;  // Pauli kind only
  double alpha() const { return limit.pz / limit.px; }
};
OnlineOracle online_oracle(const StabilizerCode& code, const PauliChannelParams& truth, const PauliChannelParams& init,
                           EstimatorKind kind);

/// Draws `blocks` errors from `truth` (block b uses Rng(seed, b)), tallies
/// their syndromes and runs the joint estimator.
JointOnlineResult online_monte_carlo(const StabilizerCode& code, const PauliChannelParams& truth,
                                     const PauliChannelParams& init, EstimatorKind kind, std::size_t blocks,
                                     std::uint64_t seed);
JointOnlineResult online_monte_carlo_serial(const StabilizerCode& code, const PauliChannelParams& truth,
                                            const PauliChannelParams& init, EstimatorKind kind, std::size_t blocks,
                                            std::uint64_t seed);

}  // namespace qecc
