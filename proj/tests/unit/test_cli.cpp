#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qecc_lab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qecc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

double after(const std::string& text, const std::string& key) {
  const auto at = text.find(key);
  if (at == std::string::npos) return std::nan("");
  return std::strtod(text.c_str() + at + key.size(), nullptr);
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~ScopedEnv() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(cli_examples, capacity_noise_limit) {
  const auto r = run({"capacity", "--kind", "ad", "--rq", "0.1111"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(after(r.err, "gamma*="), 0.432, 0.002);
  EXPECT_EQ(csv_rows(r.out).size(), 102u);
}

TEST(cli_examples, welch_costas_metrics) {
  const auto r = run({"interleaver", "--kind", "welch-costas", "--n", "3000", "--alpha", "2987", "--metrics"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][2], "1");
  EXPECT_EQ(rows[1][3], "1");
}

TEST(cli_examples, outage_zero_cv_below_limit) {
  for (const char* g : {"0.05", "0.2", "0.43"}) {
    const auto r = run({"outage", "--rq", "0.1111", "--cv", "0", "--gamma", g});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(csv_rows(r.out)[1][1], "0") << g;
  }
}

TEST(cli_errors, exit_codes) {
  auto r = run({"capacity", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "presets"}).code, 2);
  EXPECT_EQ(run({"toric-wer", "--p", "0.05", "--d", "1"}).code, 2);
  r = run({"outage", "--rq", "0.1111", "--cv", "0.1", "--gamma", "0.9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gamma must lie in"), std::string::npos);
  r = run({"estimate", "--mode", "fisher", "--p", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run({"capacity", "--help"}).code, 0);
}

TEST(cli_seed, env_overrides_default_but_not_flag) {
  const std::vector<std::string> cmd{"interleaver", "--kind", "random", "--n", "50", "--emit"};
  const auto dir = std::filesystem::temp_directory_path() / "qecc_cli_seed";
  std::filesystem::create_directories(dir);
  auto emit = [&](const std::vector<std::string>& extra, const std::string& name) {
    auto args = cmd;
    args.push_back((dir / name).string());
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(run(args).code, 0);
    std::ifstream in(dir / name);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto bare = emit({}, "bare");
  const auto s5 = emit({"--seed", "5"}, "s5");
  {
    ScopedEnv env("QECCLAB_SEED", "5");
    EXPECT_EQ(emit({}, "env5"), s5);
    EXPECT_EQ(emit({"--seed", "6"}, "flag6"), emit({"--seed", "6"}, "flag6b"));
    EXPECT_NE(emit({"--seed", "6"}, "flag6c"), s5);
  }
  EXPECT_EQ(emit({}, "bare2"), bare);
  EXPECT_NE(bare, s5);
  {
    ScopedEnv env("QECCLAB_SEED", "banana");
    EXPECT_EQ(run({"presets"}).code, 2);
  }
  std::filesystem::remove_all(dir);
}

TEST(cli_output, every_subcommand_prints_one_summary_line) {
  const std::vector<std::vector<std::string>> cmds{
      {"capacity", "--kind", "hashing", "--points", "5"},
      {"noise-limit", "--rq", "0.2"},
      {"outage", "--rq", "0.1111", "--cv", "0.2", "--points", "4", "--oracle", "1000"},
      {"diamond", "--gamma", "0.1", "--cv", "0.2", "--samples", "500"},
      {"stochastic", "--n", "20"},
      {"toric-wer", "--d", "3", "--p", "0.1", "--min-errors", "20"},
      {"fivequbit-wer", "--p", "0.1", "--min-errors", "20"},
      {"mismatch", "--trials", "2000"},
      {"interleaver", "--kind", "s-random", "--n", "200", "--s", "5", "--metrics"},
      {"estimate", "--mode", "online", "--blocks", "2000"},
      {"presets"}};
  for (const auto& c : cmds) {
    const auto r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << ": " << r.err;
    EXPECT_EQ(lines(r.err), 1) << c[0] << ": " << r.err;
    EXPECT_FALSE(r.out.empty()) << c[0];
  }
}

TEST(cli_output, json_and_csv_carry_the_same_numbers) {
  const std::vector<std::vector<std::string>> cmds{
      {"capacity", "--kind", "adcta", "--points", "7"},
      {"outage", "--rq", "0.1111", "--cv", "0.25", "--points", "6"},
      {"estimate", "--mode", "fisher", "--p", "0.1,0.3", "--probes", "1,10"},
      {"toric-wer", "--d", "3", "--p", "0.08,0.1", "--min-errors", "10"},
      {"presets"}};
  for (auto c : cmds) {
    const auto csv = run(c);
    c.insert(c.end(), {"--format", "json"});
    const auto js = run(c);
    ASSERT_EQ(csv.code, 0);
    ASSERT_EQ(js.code, 0);
    const auto rows = csv_rows(csv.out);
    const auto doc = nlohmann::json::parse(js.out);
    ASSERT_EQ(doc.size() + 1, rows.size()) << c[0];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      for (std::size_t k = 0; k < rows[0].size(); ++k) {
        // preset JSON keeps the preset-file fields only
        if (!doc[i].contains(rows[0][k])) continue;
        const auto& v = doc[i][rows[0][k]];
        const std::string& cell = rows[i + 1][k];
        if (v.is_number_float()) {
          EXPECT_EQ(v.get<double>(), std::strtod(cell.c_str(), nullptr)) << c[0] << " " << rows[0][k];
        } else if (v.is_number()) {
          EXPECT_EQ(std::to_string(v.get<std::uint64_t>()), cell);
        } else if (v.is_null()) {
          EXPECT_EQ(cell, "nan");
        } else {
          EXPECT_EQ(v.get<std::string>(), cell);
        }
      }
    }
  }
}

TEST(cli_output, workers_do_not_change_bytes) {
  const std::vector<std::vector<std::string>> cmds{
      {"toric-wer", "--d", "3,4", "--p", "0.06", "--seed", "3"},
      {"toric-wer", "--d", "3", "--p", "0.05", "--cv", "0.3", "--seed", "3"},
      {"mismatch", "--trials", "5000"},
      {"diamond", "--gamma", "0.2", "--preset", "QA_C6", "--samples", "5000"},
      {"estimate", "--mode", "online", "--p", "0.1", "--alpha", "10", "--blocks", "5000"},
      {"interleaver", "--kind", "jpl", "--n", "600", "--metrics"}};
  for (auto c : cmds) {
    auto one = c, many = c;
    one.insert(one.end(), {"--workers", "1"});
    many.insert(many.end(), {"--workers", "4"});
    const auto a = run(one), b = run(many), again = run(one);
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_EQ(a.err, b.err) << c[0];
    EXPECT_EQ(a.out, again.out) << c[0];
  }
}

TEST(cli_output, out_file_and_record_append) {
  const auto dir = std::filesystem::temp_directory_path() / "qecc_cli_out";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = (dir / "wer.csv").string();
  for (int i = 0; i < 2; ++i) {
    const auto r = run({"fivequbit-wer", "--p", "0.1", "--min-errors", "10", "--out", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out), 1);
    EXPECT_TRUE(r.err.empty());
  }
  std::ifstream in(path);
  std::string text(std::istreambuf_iterator<char>(in), {});
  EXPECT_EQ(text.rfind("# qecc-lab v1\n", 0), 0u);
  EXPECT_EQ(lines(text), 4);
  std::ifstream js(path + ".jsonl");
  EXPECT_EQ(lines(std::string(std::istreambuf_iterator<char>(js), {})), 2);

  const auto box = (dir / "box.json").string();
  ASSERT_EQ(run({"diamond", "--gamma", "0.1", "--samples", "300", "--format", "json", "--out", box}).code, 0);
  std::ifstream bj(box);
  const auto doc = nlohmann::json::parse(bj);
  for (const char* k : {"Q1", "Q3", "median", "MC", "lower_whisker", "upper_whisker", "outliers"})
    EXPECT_TRUE(doc.contains(k)) << k;
  std::filesystem::remove_all(dir);
}

TEST(cli_output, averaged_wer_from_curve_file) {
  const auto path = (std::filesystem::temp_directory_path() / "qecc_curve.csv").string();
  {
    std::ofstream f(path);
    f << "p_hat,wer\n0.0,0.2\n1.0,0.2\n";
  }
  const auto r = run({"estimate", "--mode", "averaged-wer", "--curve", path, "--p", "0.1", "--probe", "epr",
                      "--probes", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::strtod(csv_rows(r.out)[1][3].c_str(), nullptr), 0.2, 1e-9);
  EXPECT_EQ(run({"estimate", "--mode", "averaged-wer"}).code, 2);
  std::filesystem::remove(path);
}
