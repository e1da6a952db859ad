#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qecc/sim_harness.hpp"
#include "qecc/small_codes.hpp"

using namespace qecc;

namespace {

HarnessOptions fixed_trials(std::uint64_t n, std::uint64_t seed = 7) {
  HarnessOptions o;
  o.seed = seed;
  o.stop.min_errors = std::numeric_limits<std::uint64_t>::max();
  o.stop.max_trials = n;
  return o;
}

// Exact five-qubit DQMLD word error rate by enumerating all 4^5 errors.
double exact_mismatch_wer(double p_true, double p_hat, double alpha) {
  static const StabilizerCode code = five_qubit_code();
  const auto truth = pauli_from_alpha(p_true, alpha);
  const auto prior = pauli_from_alpha(p_hat, alpha);
  double wer = 0.0;
  for (std::uint32_t idx = 0; idx < 1024; ++idx) {
    const auto e = error_from_index(idx, 5);
    double w = 1.0;
    for (std::size_t q = 0; q < 5; ++q) w *= truth[e.get(q)];
    const auto corr = decode_dqmld(code, syndrome_index(code.H, e), prior).correction;
    if (!is_degenerate_success(code, e, corr)) wer += w;
  }
  return wer;
}

}  // namespace

TEST(harness_basics, ci_and_gamma_inverse) {
  EXPECT_DOUBLE_EQ(wer_ci_halfwidth(0.1, 1000), 1.96 * std::sqrt(0.09 / 1000.0));
  EXPECT_EQ(wer_ci_halfwidth(0.0, 10), 0.0);
  EXPECT_THROW(wer_ci_halfwidth(0.1, 0), std::domain_error);
  EXPECT_EQ(gamma_for_cta(0.0), 0.0);
  for (int k = 1; k <= 70; ++k) {
    const double p = k * 0.005;
    EXPECT_NEAR(cta(gamma_for_cta(p), 0.0), p, 1e-14) << p;
  }
  EXPECT_THROW(gamma_for_cta(0.8), std::domain_error);
}

TEST(harness_basics, task_parsing) {
  EXPECT_EQ(DecoderTask::parse("toric:5").d, 5);
  EXPECT_EQ(DecoderTask::parse("five_qubit:dqmld").kind, DecoderKind::FiveQubitDqmld);
  EXPECT_EQ(DecoderTask::parse("five_qubit:lookup").name(), "five_qubit:lookup");
  EXPECT_THROW(DecoderTask::parse("toric:1"), std::invalid_argument);
  EXPECT_THROW(DecoderTask::parse("toric:x"), std::invalid_argument);
  EXPECT_THROW(DecoderTask::parse("steane"), std::invalid_argument);
}

TEST(static_wer, noiseless_channel_never_fails) {
  for (const auto& t : {DecoderTask::toric(3), DecoderTask::five_qubit(true)}) {
    const auto r = run_static_wer(t, ChannelSpec::depolarizing(0.0), fixed_trials(3000));
    EXPECT_EQ(r.word_errors, 0u);
    EXPECT_EQ(r.physical_errors, 0u);
    EXPECT_EQ(r.trials, 3000u);
    EXPECT_EQ(r.wer, 0.0);
  }
}

TEST(static_wer, record_invariants) {
  HarnessOptions o;
  o.stop.max_trials = 200000;
  for (const auto& t : {DecoderTask::toric(3), DecoderTask::toric(4), DecoderTask::five_qubit(false)}) {
    for (double p : {0.03, 0.1}) {
      const auto r = run_static_wer(t, ChannelSpec::depolarizing(p), o);
      EXPECT_EQ(r.wer, static_cast<double>(r.word_errors) / static_cast<double>(r.trials));
      EXPECT_GE(r.trials, r.word_errors);
      EXPECT_EQ(r.word_errors, 100u);  // stopped at exactly the 100th error
      // a degenerate failure is always also a physical mismatch
      EXPECT_LE(r.degenerate_errors, r.physical_errors);
      EXPECT_DOUBLE_EQ(r.ci_halfwidth, wer_ci_halfwidth(r.wer, r.trials));
      EXPECT_EQ(r.master_seed, o.seed);
    }
  }
}

TEST(static_wer, physical_accounting_drives_stopping) {
  HarnessOptions o;
  o.accounting = Accounting::Physical;
  const auto r = run_static_wer(DecoderTask::five_qubit(false), ChannelSpec::depolarizing(0.05), o);
  EXPECT_EQ(r.physical_errors, 100u);
  EXPECT_EQ(r.word_errors, r.physical_errors);
  EXPECT_EQ(r.accounting, "physical");
  const auto fixed = fixed_trials(20000);
  auto phys = fixed;
  phys.accounting = Accounting::Physical;
  const auto a = run_static_wer(DecoderTask::five_qubit(true), ChannelSpec::depolarizing(0.05), fixed);
  const auto b = run_static_wer(DecoderTask::five_qubit(true), ChannelSpec::depolarizing(0.05), phys);
  EXPECT_LE(a.wer, b.wer);
}

TEST(static_wer, toric_d3_depolarizing_anchor) {
  const auto r = run_static_wer(DecoderTask::toric(3), ChannelSpec::depolarizing(0.05), HarnessOptions{});
  EXPECT_GT(r.wer, 0.08 / 2.0);
  EXPECT_LT(r.wer, 0.08 * 2.0);
}

TEST(static_wer, max_trials_cap) {
  HarnessOptions o;
  o.stop.max_trials = 5000;
  const auto r = run_static_wer(DecoderTask::toric(5), ChannelSpec::depolarizing(0.01), o);
  EXPECT_EQ(r.trials, 5000u);
  EXPECT_LT(r.word_errors, 100u);
  o.stop.max_trials = 0;
  EXPECT_THROW(run_static_wer(DecoderTask::toric(3), ChannelSpec::depolarizing(0.01), o), std::invalid_argument);
}

TEST(determinism, workers_and_reruns) {
  HarnessOptions o;
  o.seed = 99;
  const auto task = DecoderTask::toric(4);
  const auto ch = ChannelSpec::depolarizing(0.06);
  const auto ref = run_static_wer_serial(task, ch, o);
  for (int w : {1, 2, 3, 8}) {
    o.workers = w;
    EXPECT_EQ(run_static_wer(task, ch, o), ref) << w;
  }
  EXPECT_EQ(run_static_wer(task, ch, o), run_static_wer(task, ch, o));
  o.seed = 100;
  EXPECT_FALSE(run_static_wer(task, ch, o) == ref);

  HarnessOptions t;
  t.workers = 3;
  const auto tv = ChannelSpec::tvadcta(0.05, find_preset("QA_C6"));
  const auto a = run_tv_wer(DecoderTask::toric(3), {0.03, 0.05}, tv, t);
  t.workers = 1;
  const auto b = run_tv_wer(DecoderTask::toric(3), {0.03, 0.05}, tv, t);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, b);
}

TEST(tv_wer, zero_cv_reproduces_static_run) {
  const auto o = fixed_trials(20000, 5);
  const auto tv = run_tv_wer(DecoderTask::toric(3), {0.04}, ChannelSpec::tvadcta(0.04, 0.0), o)[0];
  const auto st = run_static_wer(DecoderTask::toric(3), ChannelSpec::depolarizing(0.04), o);
  EXPECT_EQ(tv.trials, st.trials);
  EXPECT_EQ(tv.degenerate_errors, st.degenerate_errors);
  EXPECT_EQ(tv.physical_errors, st.physical_errors);
  EXPECT_EQ(tv.channel, "tvadcta");
}

TEST(tv_wer, never_clearly_below_static) {
  HarnessOptions o;
  o.seed = 11;
  for (double p : {0.02, 0.04}) {
    const auto st = run_static_wer(DecoderTask::toric(3), ChannelSpec::depolarizing(p), o);
    const auto tv = run_tv_wer(DecoderTask::toric(3), {p}, ChannelSpec::tvadcta(p, 0.25), o)[0];
    EXPECT_GE(tv.wer + tv.ci_halfwidth + st.ci_halfwidth, st.wer) << p;
    EXPECT_EQ(tv.cv, 0.25);
  }
}

TEST(tv_wer, rejects_bad_channels) {
  HarnessOptions o;
  EXPECT_THROW(run_tv_wer(DecoderTask::toric(3), {0.4}, ChannelSpec::tvadcta(0.1, 0.2), o), std::domain_error);
  EXPECT_THROW(run_tv_wer(DecoderTask::toric(3), {0.1}, ChannelSpec::depolarizing(0.1), o), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::tvadcta(0.1, -0.2), std::domain_error);
}

TEST(markov_wer, memory_is_recorded) {
  const auto r = run_static_wer(DecoderTask::toric(3),
                                ChannelSpec::markov(PauliChannelParams::depolarizing(0.05), 0.5), fixed_trials(4000));
  EXPECT_EQ(r.channel, "markov");
  EXPECT_EQ(r.mu, 0.5);
  EXPECT_GT(r.word_errors, 0u);
}

TEST(mismatch, depolarizing_sweep_is_flat) {
  const auto rs = mismatch_sweep(0.05, {1e-6, 0.05, 0.3}, fixed_trials(20000));
  EXPECT_EQ(rs[0].word_errors, rs[1].word_errors);
  EXPECT_EQ(rs[2].word_errors, rs[1].word_errors);
}

TEST(mismatch, biased_sweep_matches_enumeration) {
  const double pt = 0.1, alpha = 10.0;
  const std::vector<double> grid{1e-6, 0.02, 0.09, 0.1, 0.11, 0.3, 0.45};
  const auto rs = mismatch_sweep(pt, grid, fixed_trials(200000), alpha);
  ASSERT_EQ(rs.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = exact_mismatch_wer(pt, std::max(grid[i], 1e-12), alpha);
    const double sd = std::sqrt(exact * (1 - exact) / 200000.0);
    EXPECT_NEAR(rs[i].wer, exact, 4 * sd) << grid[i];
    EXPECT_EQ(rs[i].p_prior, grid[i]);
  }
  const auto matched = rs[3];
  double lo = 1.0;
  for (const auto& r : rs) lo = std::min(lo, r.wer);
  EXPECT_LE(matched.wer - matched.ci_halfwidth, lo);
  EXPECT_LE(std::max({rs[2].wer, rs[3].wer, rs[4].wer}), 1.5 * std::min({rs[2].wer, rs[3].wer, rs[4].wer}));
  EXPECT_GT(rs[0].wer - rs[0].ci_halfwidth, matched.wer + matched.ci_halfwidth);
  EXPECT_THROW(mismatch_sweep(pt, {-0.1}, fixed_trials(10)), std::domain_error);
}

TEST(records, csv_and_json_round_trip) {
  std::vector<WerRecord> rs = mismatch_sweep(0.1, {0.05, 0.1}, fixed_trials(3000), 3.0);
  rs.push_back(run_tv_wer(DecoderTask::toric(3), {0.05}, ChannelSpec::tvadcta(0.05, find_preset("QA_C5")),
                          fixed_trials(2000))[0]);
  std::stringstream ss;
  write_records_csv(ss, rs);
  std::string first;
  std::getline(std::istringstream(ss.str()) >> std::ws, first);
  EXPECT_EQ(first, kRecordSchema);
  const auto back = read_records_csv(ss);
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back[i], rs[i]) << i;
    const auto j = nlohmann::json::parse(to_json_line(rs[i]));
    EXPECT_EQ(j["wer"].get<double>(), rs[i].wer);
    EXPECT_EQ(j["px"].get<double>(), rs[i].px);
    EXPECT_EQ(j["trials"].get<std::uint64_t>(), rs[i].trials);
    EXPECT_EQ(j["decoder"].get<std::string>(), rs[i].decoder);
  }
  EXPECT_TRUE(nlohmann::json::parse(to_json_line(rs.back()))["p_prior"].is_null());
  std::istringstream bad("decoder,oops\n");
  EXPECT_THROW(read_records_csv(bad), std::invalid_argument);
}

TEST(records, append_writes_schema_once) {
  const auto dir = std::filesystem::temp_directory_path() / "qecc_records_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "wer.csv").string();
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".jsonl");
  const auto r = run_static_wer(DecoderTask::five_qubit(false), ChannelSpec::depolarizing(0.1), fixed_trials(500));
  append_records(path, {r});
  append_records(path, {r, r});
  std::ifstream in(path);
  int schema = 0, lines = 0;
  for (std::string line; std::getline(in, line); ++lines) schema += line == kRecordSchema;
  EXPECT_EQ(schema, 1);
  EXPECT_EQ(lines, 5);
  std::ifstream js(path + ".jsonl");
  int jl = 0;
  for (std::string line; std::getline(js, line); ++jl) EXPECT_NO_THROW(nlohmann::json::parse(line));
  EXPECT_EQ(jl, 3);
  std::ifstream again(path);
  EXPECT_EQ(read_records_csv(again).size(), 3u);
  std::filesystem::remove_all(dir);
}
