#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qecc/info_limits.hpp"

using namespace qecc;

TEST(entropy, basics) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy4(PauliChannelParams::from_xyz(0.25, 0.25, 0.25)), 2.0);
  EXPECT_THROW(binary_entropy(1.5), std::domain_error);
}

TEST(capacity, amplitude_damping) {
  EXPECT_NEAR(capacity_ad(0.0), 1.0, 1e-12);
  EXPECT_EQ(capacity_ad(0.5), 0.0);
  EXPECT_EQ(capacity_ad(0.8), 0.0);
  EXPECT_NEAR(capacity_ad(0.432), 1.0 / 9, 2e-3);
  // brute-force maximization oracle
  for (double g : {0.05, 0.2, 0.35, 0.45}) {
    double best = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      const double xi = i / 200000.0;
      best = std::max(best, binary_entropy((1 - g) * xi) - binary_entropy(g * xi));
    }
    EXPECT_NEAR(capacity_ad(g), best, 1e-9) << g;
  }
}

TEST(capacity, ad_strictly_decreasing) {
  double prev = capacity_ad(0.0);
  for (int i = 1; i < 100; ++i) {
    const double c = capacity_ad(0.5 * i / 100.0);
    ASSERT_LT(c, prev);
    prev = c;
  }
}

TEST(capacity, phase_damping) {
  EXPECT_NEAR(capacity_pd(0.0), 1.0, 1e-15);
  EXPECT_NEAR(capacity_pd(1.0), 0.0, 1e-15);
  const double x = (1 - std::sqrt(0.5)) / 2;
  EXPECT_NEAR(capacity_pd(0.5), 1 + x * std::log2(x) + (1 - x) * std::log2(1 - x), 1e-15);
  EXPECT_LE(apd_bottleneck(0.1, 0.2), capacity_ad(0.1));
}

TEST(hashing, values) {
  EXPECT_EQ(hashing_bound(PauliChannelParams{}), 1.0);
  EXPECT_DOUBLE_EQ(hashing_bound(PauliChannelParams::from_xyz(0.25, 0.25, 0.25)), -1.0);
  const double p0 = depolarizing_hashing_limit(0.0);
  EXPECT_NEAR(p0, 0.1893, 1e-4);
  EXPECT_NEAR(hashing_bound(PauliChannelParams::depolarizing(p0)), 0.0, 1e-10);
}

TEST(noise_limit, reference_values) {
  EXPECT_NEAR(noise_limit(1.0 / 9, ChannelKind::AD), 0.432, 0.002);
  EXPECT_NEAR(noise_limit(1.0 / 9, ChannelKind::ADPTA), 0.3354, 0.002);
  EXPECT_NEAR(noise_limit(1.0 / 9, ChannelKind::ADCTA), 0.3065, 0.002);
  EXPECT_THROW(noise_limit(0.0, ChannelKind::AD), std::domain_error);
  EXPECT_THROW(noise_limit(1.0, ChannelKind::AD), std::domain_error);
}

TEST(noise_limit, inverts_capacity) {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.02, 0.95);
  for (int t = 0; t < 30; ++t) {
    const double r = u(eng);
    for (auto k : {ChannelKind::AD, ChannelKind::ADPTA, ChannelKind::ADCTA})
      EXPECT_NEAR(capacity(k, noise_limit(r, k)), r, 1e-8);
  }
}

TEST(critical_t1, values) {
  const double gs = noise_limit(1.0 / 9, ChannelKind::AD);
  EXPECT_NEAR(critical_t1(1.0 / 9, gs, 70.0, ChannelKind::AD), 70.0, 1e-9);
  EXPECT_LT(critical_t1(1.0 / 9, 1e-9, 70.0, ChannelKind::AD), 1e-6);
  EXPECT_NEAR(critical_t1(1.0 / 9, 0.2, 100.0, ChannelKind::AD), 100 * std::log(0.8) / std::log(1 - gs), 1e-9);
  EXPECT_NEAR(critical_t1(1.0 / 9, 0.2, 100.0, ChannelKind::AD), 100 * std::log(0.8) / std::log(0.568), 0.5);
}

TEST(q_function, values) {
  EXPECT_EQ(q_function(0.0), 0.5);
  EXPECT_EQ(q_function(INFINITY), 0.0);
  EXPECT_NEAR(q_function(1.96), 0.024997895148220435, 1e-15);
  EXPECT_NEAR(q_function(-1.0) + q_function(1.0), 1.0, 1e-15);
}

TEST(outage, shapes) {
  const double r = 1.0 / 9;
  const double gs = noise_limit(r, ChannelKind::AD);
  EXPECT_NEAR(outage_tvad(r, gs, 0.1), 0.5, 1e-9);
  EXPECT_EQ(outage_tvad(r, 0.3, 0.0), 0.0);
  EXPECT_EQ(outage_tvad(r, 0.5, 0.0), 1.0);
  EXPECT_LT(outage_tvad(r, 0.3, 1e-3), 1e-12);
  EXPECT_GT(outage_tvad(r, 0.5, 1e-3), 1 - 1e-12);
  EXPECT_THROW(outage_tvad(r, 0.7, 0.1), std::domain_error);
  EXPECT_THROW(outage_tvad(r, 0.0, 0.1), std::domain_error);
  const double gp = noise_limit(r, ChannelKind::ADPTA);
  EXPECT_NEAR(hashing_outage(r, gp, 0.1, Twirl::PTA), 0.5, 1e-9);
}

TEST(outage, monotone_on_grid) {
  for (double r : {0.05, 1.0 / 9, 0.3, 0.5}) {
    for (int i = 1; i <= 30; ++i) {
      const double g = 0.6 * i / 30.0;
      double prev = -1.0;
      for (double cv : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        const double p = outage_tvad(r, g, cv);
        // only meaningful below the limit, where spread raises outage
        if (g < noise_limit(r, ChannelKind::AD)) EXPECT_GE(p, prev - 1e-15) << r << " " << g << " " << cv;
        prev = p;
        EXPECT_GE(hashing_outage(r, g, cv, Twirl::PTA), p - 1e-12);
        EXPECT_GE(hashing_outage(r, g, cv, Twirl::CTA), p - 1e-12);
      }
    }
  }
  for (int i = 1; i <= 30; ++i) {
    const double g = 0.6 * i / 30.0;
    double prev = -1.0;
    for (double r : {0.02, 0.05, 0.1, 0.2, 0.3, 0.45}) {
      const double p = outage_tvad(r, g, 0.25);
      EXPECT_GE(p, prev - 1e-15);
      prev = p;
    }
  }
}

TEST(outage, curve_csv) {
  const auto c = outage_curve(1.0 / 9, 0.25, ChannelKind::AD, {0.1, 0.2, 0.3, 0.4});
  ASSERT_EQ(c.p_out.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_GE(c.p_out[i], c.p_out[i - 1]);
  const auto csv = c.to_csv();
  EXPECT_EQ(csv.substr(0, 12), "gamma,p_out\n");
}

TEST(rayleigh, values) {
  EXPECT_NEAR(classical_rayleigh_outage(1.0, 1.0), 0.6321205588285577, 1e-15);
  EXPECT_EQ(classical_rayleigh_outage(0.0, 3.0), 0.0);
  EXPECT_EQ(classical_rayleigh_outage(2.0, INFINITY), 0.0);
  EXPECT_LT(classical_rayleigh_outage(2.0, 1e12), 1e-11);
}

TEST(delta_out, constructed_curves) {
  Curve a, b;
  for (int i = 1; i <= 40; ++i) {
    const double p = 0.005 * i;
    a.x.push_back(p);
    a.y.push_back(std::pow(p, 3.0));
    b.x.push_back(2 * p);
    b.y.push_back(std::pow(p, 3.0));
  }
  EXPECT_NEAR(*delta_out(a, a, 1e-4), 0.0, 1e-12);
  EXPECT_NEAR(*delta_out(a, b, 1e-4), 10 * std::log10(2.0), 1e-9);
  EXPECT_FALSE(delta_out(a, b, 10.0).has_value());
}
