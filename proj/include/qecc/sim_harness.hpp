#pragma once

// Monte Carlo word-error-rate engine: static and time-varying channels,
// prior-mismatch sweeps, CSV / JSON-lines records.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qecc/channels.hpp"
#include "qecc/decoherence.hpp"

namespace qecc {

inline constexpr const char* kRecordSchema = "# qecc-lab v1";

enum class DecoderKind { Toric, FiveQubitLookup, FiveQubitDqmld };

struct DecoderTask {
  DecoderKind kind = DecoderKind::Toric;
  int d = 3;  // toric only
  /// Decoder prior for five_qubit(dqmld); empty means the sampling channel.
  std::optional<PauliChannelParams> prior;

  static DecoderTask toric(int d) { return {DecoderKind::Toric, d, std::nullopt}; }
  static DecoderTask five_qubit(bool dqmld) {
    return {dqmld ? DecoderKind::FiveQubitDqmld : DecoderKind::FiveQubitLookup, 0, std::nullopt};
  }
  /// "toric:5", "five_qubit:lookup", "five_qubit:dqmld".
  static DecoderTask parse(const std::string& s);
  std::string name() const;
};

enum class Accounting { Degenerate, Physical };

struct StopRule {
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 100000000;
};

struct HarnessOptions {
  std::uint64_t seed = 0x5EEDC0DEULL;
  int workers = 0;  // 0: OpenMP default
  StopRule stop;
  Accounting accounting = Accounting::Degenerate;
};

/// Per-block channel. Static Pauli, Markov-correlated Pauli, or TVADCTA whose
/// nominal depolarizing probability is p and whose T1 follows dist.
struct ChannelSpec {
  enum class Kind { Pauli, Markov, Tvadcta };
  Kind kind = Kind::Pauli;
  PauliChannelParams params;
  double mu = 0.0;  // Markov memory
  std::string preset;
  double cv = 0.0;
  TruncGauss t1{1.0, 0.0, 0.0, std::numeric_limits<double>::infinity()};

  static ChannelSpec depolarizing(double p);
  static ChannelSpec pauli(const PauliChannelParams& params);
  static ChannelSpec markov(const PauliChannelParams& params, double mu);
  /// TV channel from a named preset (cv = sigma_T1 / mu_T1).
  static ChannelSpec tvadcta(double p, const TvPreset& preset);
  /// TV channel from a bare coefficient of variation.
  static ChannelSpec tvadcta(double p, double cv);

  double p() const { return params.p(); }
  std::string kind_name() const;
};

struct WerRecord {
  std::string decoder;
  std::string channel;  // pauli | markov | tvadcta
  double p = 0.0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
  double mu = 0.0;
  double cv = 0.0;
  std::string preset;
  double p_prior = std::numeric_limits<double>::quiet_NaN();  // NaN: matched
  std::string accounting;
  std::uint64_t trials = 0;
  std::uint64_t word_errors = 0;
  std::uint64_t degenerate_errors = 0;
  std::uint64_t physical_errors = 0;
  double wer = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t master_seed = 0;

  bool operator==(const WerRecord& o) const;
};

/// 1.96 sqrt(w (1 - w) / n).
double wer_ci_halfwidth(double wer, std::uint64_t trials);

/// gamma with cta(gamma, 0) = p; p in [0, 0.75].
double gamma_for_cta(double p);

WerRecord run_static_wer(const DecoderTask& task, const ChannelSpec& channel, const HarnessOptions& opt);
WerRecord run_static_wer_serial(const DecoderTask& task, const ChannelSpec& channel, const HarnessOptions& opt);

/// One record per grid point; every block draws its own T1 realization.
std::vector<WerRecord> run_tv_wer(const DecoderTask& task, const std::vector<double>& p_grid, const ChannelSpec& tv,
                                  const HarnessOptions& opt);

/// Five-qubit DQMLD with its prior pinned to pauli_from_alpha(p_hat, alpha)
/// while the channel samples pauli_from_alpha(p_true, alpha). With alpha = 1
/// the decisions never move on this code; a biased channel makes the prior
/// matter. All grid points share the error stream.
std::vector<WerRecord> mismatch_sweep(double p_true, const std::vector<double>& p_hat_grid, const HarnessOptions& opt,
                                      double alpha = 1.0);

std::string records_csv_header();
std::string to_csv_row(const WerRecord& r);
std::string to_json_line(const WerRecord& r);
void write_records_csv(std::ostream& out, const std::vector<WerRecord>& records);
std::vector<WerRecord> read_records_csv(std::istream& in);
/// Appends to path (schema line and header written when the file is new) and
/// mirrors the rows to path + ".jsonl".
void append_records(const std::string& path, const std::vector<WerRecord>& records);

}  // namespace qecc
