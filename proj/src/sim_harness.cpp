#include "qecc/sim_harness.hpp"

#include <json.hpp>
#include <omp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qecc/small_codes.hpp"
#include "qecc/toric.hpp"

namespace qecc {

namespace {

constexpr std::uint8_t kDegenerateFail = 1;
constexpr std::uint8_t kPhysicalFail = 2;
constexpr std::uint64_t kFirstBatch = 4096;
constexpr std::uint64_t kMaxBatch = std::uint64_t{1} << 20;

using TrialFn = std::function<std::uint8_t(Rng&)>;

// Decoder state shared read-only by all trials.
struct Engine {
  DecoderTask task;
  ToricCode toric;
  std::optional<StabilizerCode> five;
  std::array<PauliString, 16> table;  // five-qubit correction per syndrome

  Engine(const DecoderTask& t, const PauliChannelParams& nominal) : task(t) {
    if (t.kind == DecoderKind::Toric) {
      toric = build_toric(t.d);
      return;
    }
    five = five_qubit_code();
    const PauliChannelParams prior = t.prior.value_or(nominal);
    for (std::uint32_t s = 0; s < 16; ++s) {
      table[s] = decode_lookup(*five, s);
      if (t.kind == DecoderKind::FiveQubitLookup) continue;
      try {
        table[s] = decode_dqmld(*five, s, prior).correction;
      } catch (const std::domain_error&) {
        // syndrome impossible under the prior; keep the lookup entry
      }
    }
  }

  std::size_t n() const { return task.kind == DecoderKind::Toric ? toric.n : 5; }

  std::uint8_t judge(const PauliString& e) const {
    PauliString corr;
    bool deg_fail;
    if (task.kind == DecoderKind::Toric) {
      corr = mwpm_decode(toric, toric_syndrome(toric, e));
      deg_fail = logical_failure(toric, e, corr) != LogicalOutcome::Success;
    } else {
      corr = table[syndrome_index(five->H, e)];
      deg_fail = logical_class_of(*five, e * corr) != 0;
    }
    std::uint8_t f = deg_fail ? kDegenerateFail : 0;
    if (!(corr == e)) f |= kPhysicalFail;
    return f;
  }
};

PauliString draw_error(const ChannelSpec& ch, double gamma_nominal, std::size_t n, Rng& rng) {
  switch (ch.kind) {
    case ChannelSpec::Kind::Pauli:
      return sample_error(ch.params, n, rng);
    case ChannelSpec::Kind::Markov:
      return sample_markov_error(ch.params, ch.mu, n, rng);
    case ChannelSpec::Kind::Tvadcta:
      if (gamma_nominal == 0.0) return PauliString(n);
      return sample_error(cta_params(tv_gamma_draw(gamma_nominal, ch.t1.mu, ch.t1, rng), 0.0), n, rng);
  }
  throw std::logic_error("unhandled channel kind");
}

struct Tally {
  std::uint64_t trials = 0, degenerate = 0, physical = 0;
};

// Batches of fixed, seed-determined size; failures are scanned in trial order
// so the stopping point does not depend on the thread count.
Tally run_trials(const TrialFn& trial, const HarnessOptions& opt, bool parallel) {
  if (opt.stop.max_trials == 0) throw std::invalid_argument("max_trials must be positive");
  Tally t;
  std::uint64_t batch = kFirstBatch;
  std::vector<std::uint8_t> flags;
  const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
  while (t.trials < opt.stop.max_trials) {
    const std::uint64_t n = std::min(batch, opt.stop.max_trials - t.trials);
    flags.assign(n, 0);
    const std::uint64_t base = t.trials;
    if (parallel) {
      std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
      for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
          Rng rng(opt.seed, base + static_cast<std::uint64_t>(i));
          flags[static_cast<std::size_t>(i)] = trial(rng);
        } catch (...) {
#pragma omp critical
          if (!err) err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
    } else {
      for (std::uint64_t i = 0; i < n; ++i) {
        Rng rng(opt.seed, base + i);
        flags[i] = trial(rng);
      }
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      t.degenerate += flags[i] & kDegenerateFail ? 1 : 0;
      t.physical += flags[i] & kPhysicalFail ? 1 : 0;
      const std::uint64_t counted = opt.accounting == Accounting::Degenerate ? t.degenerate : t.physical;
      if (counted >= opt.stop.min_errors) {
        t.trials += i + 1;
        return t;
      }
    }
    t.trials += n;
    batch = std::min(batch * 2, kMaxBatch);
  }
  return t;
}

WerRecord make_record(const DecoderTask& task, const ChannelSpec& ch, const HarnessOptions& opt, const Tally& t) {
  WerRecord r;
  r.decoder = task.name();
  r.channel = ch.kind_name();
  r.p = ch.p();
  r.px = ch.params.px;
  r.py = ch.params.py;
  r.pz = ch.params.pz;
  r.mu = ch.mu;
  r.cv = ch.cv;
  r.preset = ch.preset;
  if (task.prior) r.p_prior = task.prior->p();
  r.accounting = opt.accounting == Accounting::Degenerate ? "degenerate" : "physical";
  r.trials = t.trials;
  r.degenerate_errors = t.degenerate;
  r.physical_errors = t.physical;
  r.word_errors = opt.accounting == Accounting::Degenerate ? t.degenerate : t.physical;
  r.wer = static_cast<double>(r.word_errors) / static_cast<double>(r.trials);
  r.ci_halfwidth = wer_ci_halfwidth(r.wer, r.trials);
  r.master_seed = opt.seed;
  return r;
}

WerRecord run_wer(const DecoderTask& task, const ChannelSpec& ch, const HarnessOptions& opt, bool parallel) {
  ch.params.validate();
  if (task.kind == DecoderKind::Toric && task.d < 2) throw std::invalid_argument("toric distance must be at least 2");
  if (task.prior) task.prior->validate();
  double gamma_nominal = 0.0;
  if (ch.kind == ChannelSpec::Kind::Tvadcta) {
    gamma_nominal = gamma_for_cta(ch.p());
    if (gamma_nominal > 0.0) require_outage_gamma(gamma_nominal);
    if (!(ch.t1.mu > 0.0)) throw std::domain_error("mu_T1 must be positive");
  }
  if (ch.kind == ChannelSpec::Kind::Markov && !(ch.mu >= 0.0 && ch.mu <= 1.0))
    throw std::domain_error("memory mu must lie in [0, 1]");
  const Engine engine(task, ch.params);
  const std::size_t n = engine.n();
  const TrialFn trial = [&](Rng& rng) { return engine.judge(draw_error(ch, gamma_nominal, n, rng)); };
  return make_record(task, ch, opt, run_trials(trial, opt, parallel));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number in record: " + s);
  return v;
}

}  // namespace

DecoderTask DecoderTask::parse(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "toric") {
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(tail, &used);
      if (used != tail.size()) d = 0;
    } catch (const std::exception&) {
      d = 0;
    }
    if (d < 2) throw std::invalid_argument("toric task needs a distance, e.g. toric:5");
    return toric(d);
  }
  if (head == "five_qubit" && (tail == "lookup" || tail.empty())) return five_qubit(false);
  if (head == "five_qubit" && tail == "dqmld") return five_qubit(true);
  throw std::invalid_argument("unknown decoder task: " + s);
}

std::string DecoderTask::name() const {
  switch (kind) {
    case DecoderKind::Toric:
      return "toric:" + std::to_string(d);
    case DecoderKind::FiveQubitLookup:
      return "five_qubit:lookup";
    case DecoderKind::FiveQubitDqmld:
      return "five_qubit:dqmld";
  }
  return "?";
}

ChannelSpec ChannelSpec::depolarizing(double p) { return pauli(PauliChannelParams::depolarizing(p)); }

ChannelSpec ChannelSpec::pauli(const PauliChannelParams& params) {
  params.validate();
  ChannelSpec c;
  c.params = params;
  return c;
}

ChannelSpec ChannelSpec::markov(const PauliChannelParams& params, double mu) {
  ChannelSpec c = pauli(params);
  c.kind = Kind::Markov;
  c.mu = mu;
  return c;
}

ChannelSpec ChannelSpec::tvadcta(double p, const TvPreset& preset) {
  preset.validate();
  ChannelSpec c = depolarizing(p);
  c.kind = Kind::Tvadcta;
  c.preset = preset.name;
  c.cv = preset.cv();
  c.t1 = {preset.mu_t1, preset.sigma_t1, 0.0, std::numeric_limits<double>::infinity()};
  return c;
}

ChannelSpec ChannelSpec::tvadcta(double p, double cv) {
  if (!(cv >= 0.0)) throw std::domain_error("cv must be nonnegative");
  ChannelSpec c = depolarizing(p);
  c.kind = Kind::Tvadcta;
  c.cv = cv;
  c.t1 = {1.0, cv, 0.0, std::numeric_limits<double>::infinity()};
  return c;
}

std::string ChannelSpec::kind_name() const {
  switch (kind) {
    case Kind::Pauli:
      return "pauli";
    case Kind::Markov:
      return "markov";
    case Kind::Tvadcta:
      return "tvadcta";
  }
  return "?";
}

bool WerRecord::operator==(const WerRecord& o) const {
  return decoder == o.decoder && channel == o.channel && p == o.p && px == o.px && py == o.py && pz == o.pz &&
         mu == o.mu && cv == o.cv && preset == o.preset && same_double(p_prior, o.p_prior) &&
         accounting == o.accounting && trials == o.trials && word_errors == o.word_errors &&
         degenerate_errors == o.degenerate_errors && physical_errors == o.physical_errors && wer == o.wer &&
         ci_halfwidth == o.ci_halfwidth && master_seed == o.master_seed;
}

double wer_ci_halfwidth(double wer, std::uint64_t trials) {
  if (trials == 0) throw std::domain_error("no trials");
  return 1.96 * std::sqrt(wer * (1.0 - wer) / static_cast<double>(trials));
}

double gamma_for_cta(double p) {
  if (!(p >= 0.0 && p <= 0.75)) throw std::domain_error("CTA depolarizing probability must lie in [0, 0.75]");
  // 4p = 3 - s^2 - 2s with s = sqrt(1 - gamma)
  const double s = 2.0 * std::sqrt(1.0 - p) - 1.0;
  return std::max(0.0, 1.0 - s * s);
}

WerRecord run_static_wer(const DecoderTask& task, const ChannelSpec& channel, const HarnessOptions& opt) {
  return run_wer(task, channel, opt, true);
}

WerRecord run_static_wer_serial(const DecoderTask& task, const ChannelSpec& channel, const HarnessOptions& opt) {
  return run_wer(task, channel, opt, false);
}

std::vector<WerRecord> run_tv_wer(const DecoderTask& task, const std::vector<double>& p_grid, const ChannelSpec& tv,
                                  const HarnessOptions& opt) {
  if (tv.kind != ChannelSpec::Kind::Tvadcta) throw std::invalid_argument("run_tv_wer needs a tvadcta channel");
  std::vector<WerRecord> out;
  for (double p : p_grid) {
    ChannelSpec ch = tv;
    ch.params = PauliChannelParams::depolarizing(p);
    out.push_back(run_wer(task, ch, opt, true));
  }
  return out;
}

std::vector<WerRecord> mismatch_sweep(double p_true, const std::vector<double>& p_hat_grid, const HarnessOptions& opt,
                                      double alpha) {
  const ChannelSpec ch = ChannelSpec::pauli(pauli_from_alpha(p_true, alpha));
  std::vector<WerRecord> out;
  for (double ph : p_hat_grid) {
    if (!(ph >= 0.0 && ph <= 1.0)) throw std::domain_error("prior p_hat must lie in [0, 1]");
    DecoderTask task = DecoderTask::five_qubit(true);
    task.prior = pauli_from_alpha(std::clamp(ph, 1e-12, 1.0 - 1e-12), alpha);
    WerRecord r = run_wer(task, ch, opt, true);
    r.p_prior = ph;
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_csv_header() {
  return "decoder,channel,p,px,py,pz,mu,cv,preset,p_prior,accounting,trials,word_errors,degenerate_errors,"
         "physical_errors,wer,ci_halfwidth,master_seed";
}

std::string to_csv_row(const WerRecord& r) {
  if (r.preset.find(',') != std::string::npos) throw std::invalid_argument("preset name holds a comma");
  std::ostringstream o;
  o << r.decoder << ',' << r.channel << ',' << fmt(r.p) << ',' << fmt(r.px) << ',' << fmt(r.py) << ',' << fmt(r.pz)
    << ',' << fmt(r.mu) << ',' << fmt(r.cv) << ',' << r.preset << ',' << fmt(r.p_prior) << ',' << r.accounting << ','
    << r.trials << ',' << r.word_errors << ',' << r.degenerate_errors << ',' << r.physical_errors << ','
    << fmt(r.wer) << ',' << fmt(r.ci_halfwidth) << ',' << r.master_seed;
  return o.str();
}

std::string to_json_line(const WerRecord& r) {
  nlohmann::ordered_json j;
  j["decoder"] = r.decoder;
  j["channel"] = r.channel;
  j["p"] = r.p;
  j["px"] = r.px;
  j["py"] = r.py;
  j["pz"] = r.pz;
  j["mu"] = r.mu;
  j["cv"] = r.cv;
  j["preset"] = r.preset;
  j["p_prior"] = std::isnan(r.p_prior) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.p_prior);
  j["accounting"] = r.accounting;
  j["trials"] = r.trials;
  j["word_errors"] = r.word_errors;
  j["degenerate_errors"] = r.degenerate_errors;
  j["physical_errors"] = r.physical_errors;
  j["wer"] = r.wer;
  j["ci_halfwidth"] = r.ci_halfwidth;
  j["master_seed"] = r.master_seed;
  return j.dump();
}

void write_records_csv(std::ostream& out, const std::vector<WerRecord>& records) {
  out << kRecordSchema << '\n' << records_csv_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

std::vector<WerRecord> read_records_csv(std::istream& in) {
  std::vector<WerRecord> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != records_csv_header()) throw std::invalid_argument("unexpected record header");
      header = true;
      continue;
    }
    const auto c = split_csv(line);
    if (c.size() != 18) throw std::invalid_argument("record row has " + std::to_string(c.size()) + " fields");
    WerRecord r;
    r.decoder = c[0];
    r.channel = c[1];
    r.p = parse_double(c[2]);
    r.px = parse_double(c[3]);
    r.py = parse_double(c[4]);
    r.pz = parse_double(c[5]);
    r.mu = parse_double(c[6]);
    r.cv = parse_double(c[7]);
    r.preset = c[8];
    r.p_prior = parse_double(c[9]);
    r.accounting = c[10];
    r.trials = std::stoull(c[11]);
    r.word_errors = std::stoull(c[12]);
    r.degenerate_errors = std::stoull(c[13]);
    r.physical_errors = std::stoull(c[14]);
    r.wer = parse_double(c[15]);
    r.ci_halfwidth = parse_double(c[16]);
    r.master_seed = std::stoull(c[17]);
    out.push_back(std::move(r));
  }
  return out;
}

void append_records(const std::string& path, const std::vector<WerRecord>& records) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream csv(path, std::ios::app);
  std::ofstream jsonl(path + ".jsonl", std::ios::app);
  if (!csv || !jsonl) throw std::runtime_error("cannot open " + path + " for appending");
  if (fresh) csv << kRecordSchema << '\n' << records_csv_header() << '\n';
  for (const auto& r : records) {
    csv << to_csv_row(r) << '\n';
    jsonl << to_json_line(r) << '\n';
  }
}

}  // namespace qecc
