#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qecc/channels.hpp"
#include "qecc/interleavers.hpp"

using namespace qecc;

namespace {

// Straight from the definition: every pair, every candidate s.
std::size_t spread_oracle(const Permutation& p) {
  const long n = static_cast<long>(p.size());
  std::size_t best = 0;
  for (long s = 1; s <= n; ++s) {
    bool ok = true;
    for (long i = 0; i < n && ok; ++i)
      for (long j = i + 1; j < n && j - i < s && ok; ++j)
        ok = std::abs(static_cast<long>(p[i]) - static_cast<long>(p[j])) > s;
    if (ok) best = static_cast<std::size_t>(s);
  }
  return best;
}

double dispersion_oracle(const Permutation& p) {
  std::set<std::pair<long, long>> d;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      d.insert({static_cast<long>(j - i), static_cast<long>(p[j]) - static_cast<long>(p[i])});
  return static_cast<double>(d.size()) / (0.5 * p.size() * (p.size() - 1.0));
}

}  // namespace

TEST(permutation, validation_and_inverse) {
  EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 3, 1}), std::invalid_argument);
  Rng rng(31);
  const auto p = random_interleaver(50, rng);
  const auto q = p.inverse();
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(q[p[i]], i);
  EXPECT_EQ(random_interleaver(1, rng), Permutation::identity(1));
}

TEST(permutation, random_is_bijective) {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    const auto n = 1 + rng.below(10000);
    EXPECT_TRUE(is_bijection(random_interleaver(n, rng).map()));
  }
}

TEST(permutation, file_round_trip) {
  Rng rng(33);
  const auto p = random_interleaver(37, rng);
  std::stringstream ss;
  write_permutation(ss, p);
  EXPECT_EQ(read_permutation(ss), p);
  std::stringstream bad("3\n0 1 1\n");
  EXPECT_THROW(read_permutation(bad), std::invalid_argument);
  std::stringstream shortf("3\n0 1\n");
  EXPECT_THROW(read_permutation(shortf), std::invalid_argument);
}

TEST(metrics, identity) {
  for (std::size_t n : {2u, 5u, 40u}) {
    const auto id = Permutation::identity(n);
    EXPECT_EQ(spread(id), 1u);
    EXPECT_NEAR(dispersion(id), 2.0 / n, 1e-15);
  }
}

TEST(metrics, fast_matches_definition) {
  Rng rng(34);
  for (int t = 0; t < 200; ++t) {
    const auto n = t % 2 ? 2 + rng.below(60) : 20 + rng.below(40);
    const auto p = t % 2 ? random_interleaver(n, rng) : s_random(n, 1 + rng.below(1 + static_cast<std::uint64_t>(std::sqrt(n / 8.0))), rng);
    ASSERT_EQ(spread(p), spread_oracle(p));
    ASSERT_DOUBLE_EQ(dispersion(p), dispersion_oracle(p));
    ASSERT_DOUBLE_EQ(dispersion_serial(p), dispersion(p));
  }
}

TEST(s_random, small_exhaustive) {
  Rng rng(35);
  const auto p = s_random(10, 1, rng);
  EXPECT_TRUE(satisfies_s_random(p, 1));
  EXPECT_GE(spread(p), 1u);
  for (int t = 0; t < 50; ++t) {
    const auto q = s_random(200, 6, rng);
    ASSERT_TRUE(satisfies_s_random(q, 6));
    ASSERT_GE(spread(q), 6u);
  }
}

TEST(s_random, impossible_reports_attempts) {
  Rng rng(36);
  try {
    s_random(10, 8, rng, 3);
    FAIL() << "expected SRandomError";
  } catch (const SRandomError& e) {
    EXPECT_EQ(e.attempts(), 4u);
  }
}

TEST(welch_costas, hand_table) {
  const auto p = welch_costas(6, 3);
  EXPECT_EQ(p.map(), (std::vector<std::uint32_t>{0, 2, 1, 5, 3, 4}));
  EXPECT_THROW(welch_costas(7, 3), std::invalid_argument);  // 8 composite
  EXPECT_THROW(welch_costas(6, 2), std::invalid_argument);  // 2 has order 3 mod 7
  EXPECT_TRUE(is_primitive_root(2987, 3001));
  EXPECT_FALSE(is_primitive_root(1, 3001));
  // Costas property: every displacement vector distinct
  EXPECT_DOUBLE_EQ(dispersion(welch_costas(36, 2)), 1.0);
}

TEST(jpl, small_bijective) {
  const auto p = jpl(16, 8);
  EXPECT_TRUE(is_bijection(p.map()));
  EXPECT_THROW(jpl(20, 8), std::invalid_argument);
  // k2 = 31 shares the prime p1 = 31: the recurrence collapses
  EXPECT_THROW(jpl(8 * 31, 8), std::invalid_argument);
}

TEST(apply, round_trip_and_weight) {
  Rng rng(37);
  const auto e = sample_error(PauliChannelParams::depolarizing(0.3), 300, rng);
  EXPECT_EQ(apply_interleaver(Permutation::identity(300), e), e);
  const auto p = random_interleaver(300, rng);
  const auto f = apply_interleaver(p, e);
  EXPECT_EQ(f.weight(), e.weight());
  EXPECT_EQ(apply_deinterleaver(p, f), e);
  for (std::size_t i = 0; i < 300; ++i) ASSERT_EQ(f.get(i), e.get(p[i]));
}

TEST(table, reference_parameters_n3000) {
  const auto wc = welch_costas(3000, 2987);
  EXPECT_EQ(spread(wc), 1u);
  EXPECT_DOUBLE_EQ(dispersion(wc), 1.0);
  const auto j = jpl(3000);
  EXPECT_EQ(spread(j), 16u);
  EXPECT_NEAR(dispersion(j), 0.35, 0.01);
  Rng rng(38);
  const auto r = random_interleaver(3000, rng);
  EXPECT_EQ(spread(r), 1u);
  EXPECT_NEAR(dispersion(r), 0.81, 0.01);
  const auto s = s_random(3000, 25, rng);
  EXPECT_TRUE(satisfies_s_random(s, 25));
  EXPECT_EQ(spread(s), 25u);
  EXPECT_NEAR(dispersion(s), 0.8136, 0.01);
}
