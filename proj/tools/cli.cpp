#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qecc/decoherence.hpp"
#include "qecc/distances.hpp"
#include "qecc/estimation.hpp"
#include "qecc/info_limits.hpp"
#include "qecc/interleavers.hpp"
#include "qecc/sim_harness.hpp"
#include "qecc/small_codes.hpp"

namespace qecc::cli {

namespace {

using Cell = std::variant<double, std::uint64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int digits = 17;
};

struct Output {
  Table table;
  std::vector<WerRecord> records;  // harness results take the record format instead
  std::optional<nlohmann::ordered_json> json;
  std::string summary;
};

struct Global {
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  std::string out;
  std::string format = "csv";
};

std::string num(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string brief(double v) { return num(v, 6); }

std::string cell_text(const Cell& c, int digits) {
  if (const auto* d = std::get_if<double>(&c)) return num(*d, digits);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c, int digits) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // same rounding as the CSV so both encode one value
    return std::strtod(num(*d, digits).c_str(), nullptr);
  }
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return *u;
  return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i], t.digits);
    os << '\n';
  }
}

nlohmann::ordered_json table_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i], t.digits);
    arr.push_back(std::move(o));
  }
  return arr;
}

nlohmann::ordered_json records_json(const std::vector<WerRecord>& rs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) arr.push_back(nlohmann::ordered_json::parse(to_json_line(r)));
  return arr;
}

void emit(const Output& o, const Global& g, std::ostream& out, std::ostream& err) {
  const bool json = g.format == "json";
  const bool to_file = !g.out.empty();
  if (to_file && !json && !o.records.empty()) {
    append_records(g.out, o.records);
  } else {
    std::ofstream file;
    if (to_file) {
      file.open(g.out);
      if (!file) throw std::runtime_error("cannot open " + g.out + " for writing");
    }
    std::ostream& os = to_file ? static_cast<std::ostream&>(file) : out;
    if (json) {
      const auto doc = o.json ? *o.json : !o.records.empty() ? records_json(o.records) : table_json(o.table);
      os << doc.dump(2) << '\n';
    } else if (!o.records.empty()) {
      write_records_csv(os, o.records);
    } else {
      write_csv(os, o.table);
    }
  }
  (to_file ? out : err) << o.summary << '\n';
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) throw std::invalid_argument("need at least one grid point");
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

TvPreset load_preset(const std::string& name, const std::string& file) {
  if (file.empty()) return find_preset(name);
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot read preset file " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  for (auto& p : presets_from_json(ss.str()))
    if (p.name == name) return p;
  throw std::invalid_argument("preset '" + name + "' not in " + file);
}

// gamma where a decreasing capacity curve meets rate
double bisect_limit(const std::function<double(double)>& cap, double rate) {
  double lo = 0.0, hi = 1.0;
  if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("code rate must lie in (0, 1)");
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cap(mid) > rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

HarnessOptions harness_options(const Global& g, std::uint64_t min_errors, std::uint64_t max_trials,
                               const std::string& accounting) {
  HarnessOptions o;
  o.seed = g.seed;
  o.workers = g.workers;
  o.stop.min_errors = min_errors;
  o.stop.max_trials = max_trials;
  o.accounting = accounting == "physical" ? Accounting::Physical : Accounting::Degenerate;
  return o;
}

std::string record_summary(const std::string& head, const std::vector<WerRecord>& rs,
                           const std::function<std::string(const WerRecord&)>& label) {
  std::string s = head;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& r = rs[i];
    s += (i ? "; " : " ") + label(r) + " WER=" + brief(r.wer) + " +- " + brief(r.ci_halfwidth) + " (" +
         std::to_string(r.word_errors) + "/" + std::to_string(r.trials) + ")";
  }
  return s;
}

// ---------------------------------------------------------------- commands

struct Command {
  CLI::App* app = nullptr;
  std::function<Output(const Global&)> run;
};

Command capacity_cmd(CLI::App& root) {
  auto kind = std::make_shared<std::string>("ad");
  auto rq = std::make_shared<double>(-1.0);
  auto points = std::make_shared<std::size_t>(101);
  Command c;
  c.app = root.add_subcommand("capacity", "Capacity / hashing-bound curves and noise limits");
  c.app->add_option("--kind", *kind, "ad | pd | adpta | adcta | hashing")
      ->check(CLI::IsMember({"ad", "pd", "adpta", "adcta", "hashing"}));
  c.app->add_option("--rq", *rq, "code rate; adds the noise limit to the summary");
  c.app->add_option("--points", *points, "grid size")->check(CLI::PositiveNumber);
  c.run = [=](const Global&) {
    std::function<double(double)> cap;
    std::string x = "gamma";
    double hi = 1.0;
    if (*kind == "pd") {
      cap = capacity_pd;
      x = "lambda";
    } else if (*kind == "hashing") {
      cap = [](double p) { return std::max(0.0, hashing_bound(PauliChannelParams::depolarizing(p))); };
      x = "p";
      hi = 0.75;
    } else {
      const ChannelKind k = parse_channel_kind(*kind);
      cap = [k](double g) { return capacity(k, g); };
    }
    Output o;
    o.table.columns = {x, "capacity"};
    for (double v : linspace(0.0, hi, *points)) o.table.rows.push_back({v, cap(v)});
    o.summary = upper(*kind) + " capacity over " + x + " in [0, " + brief(hi) + "], " + std::to_string(*points) +
                " points";
    if (*rq >= 0.0) {
      double lim;
      if (*kind == "hashing")
        lim = depolarizing_hashing_limit(*rq);
      else if (*kind == "pd")
        lim = bisect_limit(capacity_pd, *rq);
      else
        lim = noise_limit(*rq, parse_channel_kind(*kind));
      char buf[96];
      std::snprintf(buf, sizeof buf, "; noise limit at R_Q=%g: %s*=%.4f", *rq,
                    (*kind == "hashing" ? "p" : x).c_str(), lim);
      o.summary += buf;
    }
    return o;
  };
  return c;
}

Command noise_limit_cmd(CLI::App& root) {
  auto rq = std::make_shared<double>(0.0);
  Command c;
  c.app = root.add_subcommand("noise-limit", "Noise limits of AD, ADPTA, ADCTA and the depolarizing hashing limit");
  c.app->add_option("--rq", *rq, "code rate")->required();
  c.run = [=](const Global&) {
    Output o;
    o.table.columns = {"channel", "limit"};
    std::string s = "noise limits at R_Q=" + brief(*rq) + ":";
    for (auto k : {ChannelKind::AD, ChannelKind::ADPTA, ChannelKind::ADCTA}) {
      const double g = noise_limit(*rq, k);
      o.table.rows.push_back({to_string(k), g});
      char buf[48];
      std::snprintf(buf, sizeof buf, " %s gamma*=%.4f", to_string(k).c_str(), g);
      s += buf;
    }
    const double p = depolarizing_hashing_limit(*rq);
    o.table.rows.push_back({std::string("depolarizing"), p});
    char buf[48];
    std::snprintf(buf, sizeof buf, " depolarizing p*=%.4f", p);
    o.summary = s + buf;
    return o;
  };
  return c;
}

Command outage_cmd(CLI::App& root) {
  auto rq = std::make_shared<double>(0.0);
  auto cv = std::make_shared<double>(0.0);
  auto kind = std::make_shared<std::string>("ad");
  auto gammas = std::make_shared<std::vector<double>>();
  auto points = std::make_shared<std::size_t>(50);
  auto draws = std::make_shared<std::size_t>(0);
  Command c;
  c.app = root.add_subcommand("outage", "Quantum (hashing) outage probability, closed form and T1 counting oracle");
  c.app->add_option("--rq", *rq, "code rate")->required();
  c.app->add_option("--cv", *cv, "coefficient of variation of T1")->required();
  c.app->add_option("--kind", *kind, "ad | adpta | adcta")->check(CLI::IsMember({"ad", "adpta", "adcta"}));
  c.app->add_option("--gamma", *gammas, "nominal gamma values (comma separated)")->delimiter(',');
  c.app->add_option("--points", *points, "grid size over (0, 1 - 1/e] when --gamma is absent")
      ->check(CLI::PositiveNumber);
  c.app->add_option("--oracle", *draws, "T1 draws per point for the counting oracle (0: off)");
  c.run = [=](const Global& g) {
    const ChannelKind k = parse_channel_kind(*kind);
    std::vector<double> grid = *gammas;
    if (grid.empty()) {
      const double gmax = -std::expm1(-1.0);
      for (double v : linspace(gmax / static_cast<double>(*points), gmax, *points)) grid.push_back(v);
    }
    const OutageCurve curve = outage_curve(*rq, *cv, k, grid);
    Output o;
    o.table.digits = 12;
    o.table.columns = {"gamma", "p_out"};
    if (*draws) o.table.columns.insert(o.table.columns.end(), {"p_out_oracle", "oracle_sigma"});
    const TruncGauss t1{1.0, *cv, 0.0, std::numeric_limits<double>::infinity()};
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<Cell> row{curve.gamma[i], curve.p_out[i]};
      if (*draws) {
        Rng rng(g.seed, i);
        std::uint64_t hits = 0;
        for (std::size_t d = 0; d < *draws; ++d) {
          double t = sample_t1(t1, rng);
          while (!(t > 0.0)) t = sample_t1(t1, rng);
          hits += capacity(k, gamma_for_t1(grid[i], 1.0, t)) < *rq ? 1 : 0;
        }
        const double f = static_cast<double>(hits) / static_cast<double>(*draws);
        const double sd = std::sqrt(std::max(f * (1 - f), 1.0 / static_cast<double>(*draws)) / *draws);
        worst = std::max(worst, std::abs(f - curve.p_out[i]) / sd);
        row.insert(row.end(), {f, sd});
      }
      o.table.rows.push_back(std::move(row));
    }
    if (grid.size() == 1) {
      o.summary = to_string(k) + " outage at R_Q=" + brief(*rq) + " cv=" + brief(*cv) + ": p_out=" +
                  brief(curve.p_out[0]) + " at gamma=" + brief(grid[0]);
    } else {
      o.summary = to_string(k) + " outage at R_Q=" + brief(*rq) + " cv=" + brief(*cv) + ": " +
                  std::to_string(grid.size()) + " points, p_out from " + brief(curve.p_out.front()) + " to " +
                  brief(curve.p_out.back());
    }
    if (*draws) o.summary += "; oracle max deviation " + brief(worst) + " sigma";
    return o;
  };
  return c;
}

Command diamond_cmd(CLI::App& root) {
  auto kind = std::make_shared<std::string>("ad");
  auto g1 = std::make_shared<double>(-1.0);
  auto g2 = std::make_shared<double>(-1.0);
  auto gamma = std::make_shared<double>(-1.0);
  auto preset = std::make_shared<std::string>();
  auto preset_file = std::make_shared<std::string>();
  auto cv = std::make_shared<double>(-1.0);
  auto samples = std::make_shared<std::size_t>(10000);
  Command c;
  c.app = root.add_subcommand("diamond", "Pairwise diamond distances, or TV-vs-static mean with adjusted boxplot");
  c.app->add_option("--kind", *kind, "ad | pd | adpta | adcta")->check(CLI::IsMember({"ad", "pd", "adpta", "adcta"}));
  c.app->add_option("--g1", *g1, "first damping parameter (pairwise mode)");
  c.app->add_option("--g2", *g2, "second damping parameter (pairwise mode)");
  c.app->add_option("--gamma", *gamma, "nominal gamma (TV mode)");
  c.app->add_option("--preset", *preset, "TV preset name");
  c.app->add_option("--preset-file", *preset_file, "JSON preset file");
  c.app->add_option("--cv", *cv, "TV coefficient of variation instead of a preset");
  c.app->add_option("--samples", *samples, "TV realizations")->check(CLI::PositiveNumber);
  c.run = [=](const Global& g) {
    Output o;
    if (*g1 >= 0.0 || *g2 >= 0.0) {
      if (!(*g1 >= 0.0 && *g2 >= 0.0)) throw std::invalid_argument("pairwise mode needs both --g1 and --g2");
      const double d = *kind == "pd" ? diamond_pd(*g1, *g2) : diamond(parse_channel_kind(*kind), *g1, *g2);
      o.table.columns = {"kind", "g1", "g2", "distance", "discrimination_error"};
      o.table.rows.push_back({*kind, *g1, *g2, d, discrimination_error(d)});
      o.summary = upper(*kind) + " diamond distance(" + brief(*g1) + ", " + brief(*g2) + ") = " + brief(d);
      return o;
    }
    if (*gamma < 0.0) throw std::invalid_argument("give --g1/--g2 or --gamma");
    if (*kind == "pd") throw std::invalid_argument("TV mode covers ad, adpta and adcta");
    double mu = 1.0;
    TruncGauss dist{1.0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    std::string label;
    if (*cv >= 0.0) {
      dist.sigma = *cv;
      label = "cv=" + brief(*cv);
    } else {
      const TvPreset p = load_preset(preset->empty() ? "QA_C5" : *preset, *preset_file);
      mu = p.mu_t1;
      dist = {p.mu_t1, p.sigma_t1, 0.0, std::numeric_limits<double>::infinity()};
      label = p.name;
    }
    const auto tv = mean_diamond_tv(*gamma, mu, dist, parse_channel_kind(*kind), *samples, g.seed);
    const auto box = adjusted_boxplot(tv.samples);
    o.table.columns = {"mean", "Q1", "median", "Q3", "MC", "lower_whisker", "upper_whisker", "outliers"};
    o.table.rows.push_back({tv.mean, box.Q1, box.median, box.Q3, box.MC, box.lower_whisker, box.upper_whisker,
                            static_cast<std::uint64_t>(box.outliers.size())});
    auto j = nlohmann::ordered_json::parse(box.to_json());
    j["mean"] = tv.mean;
    j["samples"] = *samples;
    o.json = j;
    o.summary = upper(*kind) + " TV diamond distance at gamma=" + brief(*gamma) + " (" + label + ", " +
                std::to_string(*samples) + " realizations): mean=" + brief(tv.mean) + " median=" + brief(box.median) +
                " MC=" + brief(box.MC) + " outliers=" + std::to_string(box.outliers.size());
    return o;
  };
  return c;
}

Command stochastic_cmd(CLI::App& root) {
  auto preset = std::make_shared<std::string>("QA_C5");
  auto preset_file = std::make_shared<std::string>();
  auto fs = std::make_shared<double>(1.0);
  auto n = std::make_shared<std::size_t>(3600);
  auto draws = std::make_shared<std::size_t>(0);
  Command c;
  c.app = root.add_subcommand("stochastic", "T1 time series (Lorentzian + white noise) or truncated-Gaussian draws");
  c.app->add_option("--preset", *preset, "preset name");
  c.app->add_option("--preset-file", *preset_file, "JSON preset file");
  c.app->add_option("--fs", *fs, "sampling frequency in Hz");
  c.app->add_option("--n", *n, "series length")->check(CLI::PositiveNumber);
  c.app->add_option("--draws", *draws, "emit this many T1 draws instead of a series");
  c.run = [=](const Global& g) {
    const TvPreset p = load_preset(*preset, *preset_file);
    Rng rng(g.seed);
    std::vector<double> v;
    Output o;
    if (*draws) {
      const TruncGauss d{p.mu_t1, p.sigma_t1, 0.0, std::numeric_limits<double>::infinity()};
      o.table.columns = {"index", "t1_us"};
      for (std::size_t i = 0; i < *draws; ++i) v.push_back(sample_t1(d, rng));
      for (std::size_t i = 0; i < v.size(); ++i) o.table.rows.push_back({static_cast<std::uint64_t>(i), v[i]});
    } else {
      v = simulate_t1_series(p, *fs, *n, rng);
      o.table.columns = {"index", "t_s", "t1_us"};
      for (std::size_t i = 0; i < v.size(); ++i)
        o.table.rows.push_back({static_cast<std::uint64_t>(i), static_cast<double>(i) / *fs, v[i]});
    }
    const double mean = kahan_sum(v) / static_cast<double>(v.size());
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    const double sd = v.size() > 1 ? std::sqrt(kahan_sum(sq) / static_cast<double>(v.size() - 1)) : 0.0;
    o.summary = p.name + (*draws ? " T1 draws: n=" : " T1 series: n=") + std::to_string(v.size()) +
                " mean=" + brief(mean) + " sd=" + brief(sd) + " us (table sigma " + brief(p.sigma_t1) +
                ", PSD sigma " + brief(psd_sigma_t1(p)) + ")";
    return o;
  };
  return c;
}

struct StopFlags {
  std::uint64_t min_errors = 100;
  std::uint64_t max_trials = 100000000;
  std::string accounting = "degenerate";
};

void add_stop_flags(CLI::App* app, StopFlags& f) {
  app->add_option("--min-errors", f.min_errors, "stop after this many word errors")->check(CLI::PositiveNumber);
  app->add_option("--max-trials", f.max_trials, "trial cap")->check(CLI::PositiveNumber);
  app->add_option("--accounting", f.accounting, "degenerate | physical")
      ->check(CLI::IsMember({"degenerate", "physical"}));
}

Command toric_cmd(CLI::App& root) {
  auto ds = std::make_shared<std::vector<int>>(std::vector<int>{3});
  auto ps = std::make_shared<std::vector<double>>(std::vector<double>{0.05});
  auto preset = std::make_shared<std::string>();
  auto preset_file = std::make_shared<std::string>();
  auto cv = std::make_shared<double>(-1.0);
  auto mu = std::make_shared<double>(0.0);
  auto stop = std::make_shared<StopFlags>();
  Command c;
  c.app = root.add_subcommand("toric-wer", "Toric code MWPM word error rate, static or time-varying");
  c.app->add_option("--d", *ds, "distances (comma separated)")->delimiter(',');
  c.app->add_option("--p", *ps, "depolarizing probabilities (comma separated)")->delimiter(',');
  c.app->add_option("--preset", *preset, "TVADCTA preset (time-varying run)");
  c.app->add_option("--preset-file", *preset_file, "JSON preset file");
  c.app->add_option("--cv", *cv, "TVADCTA with this T1 coefficient of variation");
  c.app->add_option("--mu", *mu, "Markov memory of the static channel");
  add_stop_flags(c.app, *stop);
  c.run = [=](const Global& g) {
    const auto opt = harness_options(g, stop->min_errors, stop->max_trials, stop->accounting);
    const bool tv = !preset->empty() || *cv >= 0.0;
    Output o;
    for (int d : *ds) {
      const auto task = DecoderTask::toric(d);
      if (tv) {
        if (*mu != 0.0) throw std::invalid_argument("--mu applies to static runs only");
        const ChannelSpec spec = *cv >= 0.0 ? ChannelSpec::tvadcta(ps->front(), *cv)
                                            : ChannelSpec::tvadcta(ps->front(), load_preset(*preset, *preset_file));
        for (auto& r : run_tv_wer(task, *ps, spec, opt)) o.records.push_back(std::move(r));
      } else {
        for (double p : *ps) {
          const auto params = PauliChannelParams::depolarizing(p);
          const auto spec = *mu > 0.0 ? ChannelSpec::markov(params, *mu) : ChannelSpec::pauli(params);
          o.records.push_back(run_static_wer(task, spec, opt));
        }
      }
    }
    o.summary = record_summary(std::string("toric ") + (tv ? "TVADCTA" : "static"), o.records, [](const WerRecord& r) {
      return r.decoder.substr(6) + "x" + r.decoder.substr(6) + " p=" + brief(r.p);
    });
    return o;
  };
  return c;
}

Command fivequbit_cmd(CLI::App& root) {
  auto decoder = std::make_shared<std::string>("dqmld");
  auto ps = std::make_shared<std::vector<double>>(std::vector<double>{0.05});
  auto alpha = std::make_shared<double>(1.0);
  auto mu = std::make_shared<double>(0.0);
  auto stop = std::make_shared<StopFlags>();
  Command c;
  c.app = root.add_subcommand("fivequbit-wer", "[[5,1,3]] word error rate with lookup or DQMLD decoding");
  c.app->add_option("--decoder", *decoder, "lookup | dqmld")->check(CLI::IsMember({"lookup", "dqmld"}));
  c.app->add_option("--p", *ps, "total error probabilities (comma separated)")->delimiter(',');
  c.app->add_option("--alpha", *alpha, "asymmetry pz/px (1: depolarizing)");
  c.app->add_option("--mu", *mu, "Markov memory");
  add_stop_flags(c.app, *stop);
  c.run = [=](const Global& g) {
    const auto opt = harness_options(g, stop->min_errors, stop->max_trials, stop->accounting);
    const auto task = DecoderTask::five_qubit(*decoder == "dqmld");
    Output o;
    for (double p : *ps) {
      const auto params = pauli_from_alpha(p, *alpha);
      const auto spec = *mu > 0.0 ? ChannelSpec::markov(params, *mu) : ChannelSpec::pauli(params);
      o.records.push_back(run_static_wer(task, spec, opt));
    }
    o.summary = record_summary("five-qubit " + *decoder, o.records, [](const WerRecord& r) { return "p=" + brief(r.p); });
    return o;
  };
  return c;
}

Command mismatch_cmd(CLI::App& root) {
  auto p_true = std::make_shared<double>(0.1);
  auto p_hat = std::make_shared<std::vector<double>>();
  auto alpha = std::make_shared<double>(10.0);
  auto trials = std::make_shared<std::uint64_t>(200000);
  Command c;
  c.app = root.add_subcommand("mismatch", "DQMLD word error rate with the decoder prior pinned to p_hat");
  c.app->add_option("--p-true", *p_true, "channel total error probability");
  c.app->add_option("--p-hat", *p_hat, "decoder priors (comma separated; default 0.25..2.5 x p-true)")
      ->delimiter(',');
  c.app->add_option("--alpha", *alpha, "asymmetry pz/px of channel and prior");
  c.app->add_option("--trials", *trials, "blocks per grid point (shared error stream)")->check(CLI::PositiveNumber);
  c.run = [=](const Global& g) {
    std::vector<double> grid = *p_hat;
    if (grid.empty())
      for (double f : {1e-4, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0, 2.5}) grid.push_back(f * *p_true);
    auto opt = harness_options(g, std::numeric_limits<std::uint64_t>::max(), *trials, "degenerate");
    Output o;
    o.records = mismatch_sweep(*p_true, grid, opt, *alpha);
    const auto best = std::min_element(o.records.begin(), o.records.end(),
                                       [](const WerRecord& a, const WerRecord& b) { return a.wer < b.wer; });
    double matched = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : o.records)
      if (r.p_prior == *p_true) matched = r.wer;
    o.summary = "mismatch p_true=" + brief(*p_true) + " alpha=" + brief(*alpha) + ": min WER=" + brief(best->wer) +
                " at p_hat=" + brief(best->p_prior) + ", matched WER=" + brief(matched) + ", " +
                std::to_string(o.records.size()) + " points";
    return o;
  };
  return c;
}

Command interleaver_cmd(CLI::App& root) {
  auto kind = std::make_shared<std::string>("random");
  auto n = std::make_shared<std::size_t>(0);
  auto s = std::make_shared<std::size_t>(0);
  auto alpha = std::make_shared<std::uint64_t>(0);
  auto k1 = std::make_shared<std::size_t>(8);
  auto restarts = std::make_shared<std::size_t>(100);
  auto input = std::make_shared<std::string>();
  auto emit_path = std::make_shared<std::string>();
  auto metrics = std::make_shared<bool>(false);
  Command c;
  c.app = root.add_subcommand("interleaver", "Build, measure or emit an interleaver");
  c.app->add_option("--kind", *kind, "random | s-random | welch-costas | jpl | file")
      ->check(CLI::IsMember({"random", "s-random", "welch-costas", "jpl", "file"}));
  c.app->add_option("--n", *n, "length");
  c.app->add_option("--s", *s, "S-random spread target");
  c.app->add_option("--alpha", *alpha, "Welch-Costas primitive root");
  c.app->add_option("--k1", *k1, "JPL row count");
  c.app->add_option("--max-restarts", *restarts, "S-random restarts");
  c.app->add_option("--input", *input, "permutation file (kind file)");
  c.app->add_option("--emit", *emit_path, "write the permutation to this file");
  c.app->add_flag("--metrics", *metrics, "compute spread and dispersion");
  c.run = [=](const Global& g) {
    Rng rng(g.seed);
    std::optional<Permutation> p;
    if (*kind == "file") {
      std::ifstream in(*input);
      if (!in) throw std::invalid_argument("cannot read permutation file '" + *input + "'");
      p = read_permutation(in);
    } else {
      if (*n == 0) throw std::invalid_argument("--n is required");
      if (*kind == "random")
        p = random_interleaver(*n, rng);
      else if (*kind == "s-random")
        p = s_random(*n, *s, rng, *restarts);
      else if (*kind == "welch-costas")
        p = welch_costas(*n, *alpha);
      else
        p = jpl(*n, *k1);
    }
    if (!emit_path->empty()) {
      std::ofstream f(*emit_path);
      if (!f) throw std::runtime_error("cannot write " + *emit_path);
      write_permutation(f, *p);
    }
    Output o;
    o.table.columns = {"kind", "n"};
    std::vector<Cell> row{*kind, static_cast<std::uint64_t>(p->size())};
    o.summary = *kind + " interleaver N=" + std::to_string(p->size());
    if (*metrics) {
      const std::size_t sp = spread(*p);
      const double eta = dispersion(*p);
      o.table.columns.insert(o.table.columns.end(), {"spread", "dispersion"});
      row.insert(row.end(), {static_cast<std::uint64_t>(sp), eta});
      o.summary += ": spread " + std::to_string(sp) + ", dispersion " + num(eta, 6);
    }
    if (!emit_path->empty()) o.summary += " (written to " + *emit_path + ")";
    o.table.rows.push_back(std::move(row));
    return o;
  };
  return c;
}

Command estimate_cmd(CLI::App& root) {
  auto mode = std::make_shared<std::string>("fisher");
  auto ps = std::make_shared<std::vector<double>>(std::vector<double>{0.25});
  auto probe = std::make_shared<std::string>("both");
  auto probes = std::make_shared<std::vector<std::size_t>>(std::vector<std::size_t>{1});
  auto curve = std::make_shared<std::string>();
  auto alpha = std::make_shared<double>(-1.0);
  auto blocks = std::make_shared<std::size_t>(100000);
  auto init = std::make_shared<double>(-1.0);
  Command c;
  c.app = root.add_subcommand("estimate", "Fisher information, estimator-averaged WER, online estimation");
  c.app->add_option("--mode", *mode, "fisher | averaged-wer | online")
      ->check(CLI::IsMember({"fisher", "averaged-wer", "online"}));
  c.app->add_option("--p", *ps, "depolarizing probabilities (comma separated)")->delimiter(',');
  c.app->add_option("--probe", *probe, "pure | epr | both")->check(CLI::IsMember({"pure", "epr", "both"}));
  c.app->add_option("--probes", *probes, "probe counts N (comma separated)")->delimiter(',');
  c.app->add_option("--curve", *curve, "sensitivity CSV (p_hat,wer) for averaged-wer");
  c.app->add_option("--alpha", *alpha, "online: asymmetric channel pz/px (Pauli estimator)");
  c.app->add_option("--blocks", *blocks, "online: number of [[5,1,3]] blocks")->check(CLI::PositiveNumber);
  c.app->add_option("--init", *init, "online: initial total probability (default p*)");
  c.run = [=](const Global& g) {
    Output o;
    std::vector<Probe> kinds;
    if (*probe != "epr") kinds.push_back(Probe::Pure);
    if (*probe != "pure") kinds.push_back(Probe::Epr);
    if (*mode == "fisher") {
      o.table.columns = {"p", "probe", "probes", "fisher", "cramer_rao_var"};
      for (double p : *ps)
        for (Probe k : kinds)
          for (std::size_t n : *probes)
            o.table.rows.push_back({p, std::string(to_string(k)), static_cast<std::uint64_t>(n), fisher(p, k),
                                    cramer_rao_var(p, k, n)});
      o.summary = "Fisher information at p=" + brief(ps->front()) + ":";
      for (Probe k : kinds) o.summary += std::string(" ") + to_string(k) + " J=" + brief(fisher(ps->front(), k));
      return o;
    }
    if (*mode == "averaged-wer") {
      if (curve->empty()) throw std::invalid_argument("averaged-wer needs --curve");
      std::ifstream in(*curve);
      if (!in) throw std::invalid_argument("cannot read curve file '" + *curve + "'");
      const SensitivityCurve sc = read_sensitivity_csv(in);
      o.table.columns = {"p", "probe", "probes", "averaged_wer", "wer_at_p"};
      for (double p : *ps)
        for (Probe k : kinds)
          for (std::size_t n : *probes)
            o.table.rows.push_back({p, std::string(to_string(k)), static_cast<std::uint64_t>(n),
                                    averaged_wer(sc, p, k, n), sc(p)});
      const auto& last = o.table.rows.back();
      o.summary = "averaged WER at p=" + brief(std::get<double>(last[0])) + " (" + std::get<std::string>(last[1]) +
                  ", N=" + std::to_string(std::get<std::uint64_t>(last[2])) +
                  "): " + brief(std::get<double>(last[3])) + " vs WER(p)=" + brief(std::get<double>(last[4]));
      return o;
    }
    const StabilizerCode code = five_qubit_code();
    const double p = ps->front();
    const bool asym = *alpha > 0.0;
    const EstimatorKind kind = asym ? EstimatorKind::Pauli : EstimatorKind::Depolarizing;
    const auto truth = asym ? pauli_from_alpha(p, *alpha) : PauliChannelParams::depolarizing(p);
    PauliChannelParams start = online_default_init(code, kind);
    if (*init >= 0.0) start = PauliChannelParams::depolarizing(*init);
    const auto r = online_monte_carlo(code, truth, start, kind, *blocks, g.seed);
    const auto oracle = online_oracle(code, truth, start, kind);
    const double b = std::sqrt(static_cast<double>(*blocks));
    o.table.columns = {"iteration", "p_hat", "px", "py", "pz"};
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const auto& t = r.trajectory[i];
      o.table.rows.push_back({static_cast<std::uint64_t>(i), t.p(), t.px, t.py, t.pz});
    }
    o.summary = "online estimate over " + std::to_string(*blocks) + " blocks (" + std::to_string(r.iterations) +
                " iterations): p_hat=" + brief(r.p_hat()) + " (oracle " + brief(oracle.limit.p()) + " +- " +
                brief(3 * oracle.sd_p / b) + ")";
    if (asym && r.alpha())
      o.summary += ", alpha_hat=" + brief(*r.alpha()) + " (oracle " + brief(oracle.alpha()) + " +- " +
                   brief(3 * oracle.sd_alpha / b) + ")";
    return o;
  };
  return c;
}

Command presets_cmd(CLI::App& root) {
  auto file = std::make_shared<std::string>();
  Command c;
  c.app = root.add_subcommand("presets", "List time-varying channel presets");
  c.app->add_option("--file", *file, "JSON preset file instead of the built-ins");
  c.run = [=](const Global&) {
    std::vector<TvPreset> ps;
    if (file->empty()) {
      ps = builtin_presets();
    } else {
      std::ifstream in(*file);
      if (!in) throw std::invalid_argument("cannot read preset file " + *file);
      std::stringstream ss;
      ss << in.rdbuf();
      ps = presets_from_json(ss.str());
    }
    Output o;
    o.json = nlohmann::ordered_json::parse(presets_to_json(ps));
    o.table.columns = {"name", "mu_t1", "sigma_t1", "h0", "a1", "inv_tau01", "a2", "inv_tau02", "mu_tphi",
                       "sigma_tphi", "cv", "psd_sigma_t1"};
    const double none = std::numeric_limits<double>::quiet_NaN();
    std::string names;
    for (const auto& p : ps) {
      o.table.rows.push_back({p.name, p.mu_t1, p.sigma_t1, p.h0, p.a1, p.inv_tau01, p.a2, p.inv_tau02,
                              p.mu_tphi.value_or(none), p.sigma_tphi.value_or(none), p.cv(), psd_sigma_t1(p)});
      names += " " + p.name + "(cv=" + num(p.cv(), 3) + ")";
    }
    o.summary = std::to_string(ps.size()) + " presets:" + names;
    return o;
  };
  return c;
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 0);
  if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
  return v;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qecc-lab: quantum error correction over time-varying channels"};
  app.name("qecc_lab");
  app.fallthrough();
  app.require_subcommand(1);

  Global g;
  std::string seed_text;
  auto* seed_opt = app.add_option("--seed", seed_text, "master seed (u64; default from QECCLAB_SEED or fixed)");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (harness CSV results are appended)");
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<Command> cmds;
  for (auto make : {capacity_cmd, noise_limit_cmd, outage_cmd, diamond_cmd, stochastic_cmd, toric_cmd, fivequbit_cmd,
                    mismatch_cmd, interleaver_cmd, estimate_cmd, presets_cmd})
    cmds.push_back(make(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n" << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (seed_opt->count() > 0)
      g.seed = parse_seed(seed_text);
    else if (const char* env = std::getenv("QECCLAB_SEED"); env && *env)
      g.seed = parse_seed(env);
  } catch (const std::exception&) {
    err << "error: seed must be an unsigned 64-bit integer\n" << app.help();
    return 2;
  }
  // restored on exit; run() may be called repeatedly in one process
  struct ThreadGuard {
    int saved = omp_get_max_threads();
    ~ThreadGuard() { omp_set_num_threads(saved); }
  } guard;
  if (g.workers > 0) omp_set_num_threads(g.workers);

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    for (const auto& c : cmds)
      if (c.app == chosen) emit(c.run(g), g, out, err);
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << chosen->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qecc::cli
