#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qecc/channels.hpp"

using namespace qecc;
using cd = std::complex<double>;

namespace {

// Random valid qubit state from a Bloch vector inside the ball.
Matrix2c random_state(Rng& rng) {
  double x, y, z;
  do {
    x = 2 * rng.uniform() - 1;
    y = 2 * rng.uniform() - 1;
    z = 2 * rng.uniform() - 1;
  } while (x * x + y * y + z * z > 1.0);
  Matrix2c rho;
  rho << cd(0.5 * (1 + z), 0), cd(0.5 * x, -0.5 * y), cd(0.5 * x, 0.5 * y), cd(0.5 * (1 - z), 0);
  return rho;
}

double max_abs_diff(const Matrix2c& a, const Matrix2c& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(decoherence_params, values) {
  auto d = decoherence_params(0.0, 50.0, 70.0);
  EXPECT_EQ(d.gamma, 0.0);
  EXPECT_EQ(d.lambda, 0.0);
  d = decoherence_params(10.0, 100.0, 200.0);
  EXPECT_NEAR(d.gamma, 0.0951626, 1e-7);
  EXPECT_NEAR(d.lambda, 0.0, 1e-15);
  d = decoherence_params(37.0, 10.0, 20.0);
  EXPECT_NEAR(d.lambda, 0.0, 1e-12);
  EXPECT_THROW(decoherence_params(1.0, 10.0, 20.5), std::domain_error);
  EXPECT_THROW(decoherence_params(-1.0, 10.0, 10.0), std::domain_error);
}

TEST(decoherence_params, tphi_route_matches) {
  const double t1 = 40.0, tphi = 55.0;
  const double t2 = t2_from_tphi(t1, tphi);
  const auto d = decoherence_params(3.0, t1, t2);
  // lambda = 1 - exp(-2t / Tphi) through 1/T2 = 1/(2T1) + 1/Tphi
  EXPECT_NEAR(d.lambda, 1.0 - std::exp(-2.0 * 3.0 / tphi), 1e-14);
}

TEST(kraus, completeness_and_identity) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const double g = rng.uniform(), l = rng.uniform();
    ASSERT_LE(make_apd(g, l).completeness_residual(), 1e-12);
    ASSERT_LE(make_ad(g).completeness_residual(), 1e-12);
    ASSERT_LE(make_pd(l).completeness_residual(), 1e-12);
  }
  EXPECT_LE(make_apd(0.2, 0.1).completeness_residual(), 1e-12);
  const auto id = make_apd(0.0, 0.0);
  const DensityMatrix2 rho(random_state(rng));
  EXPECT_LE(max_abs_diff(apply(id, rho).matrix(), rho.matrix()), 1e-15);
  EXPECT_THROW(make_apd(1.2, 0.0), std::domain_error);
  EXPECT_THROW(make_apd(0.2, -0.1), std::domain_error);
}

TEST(kraus, full_damping_reaches_ground) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix2 rho(random_state(rng));
    EXPECT_LE(max_abs_diff(apply(make_ad(1.0), rho).matrix(), DensityMatrix2::ground().matrix()), 1e-15);
  }
  const auto e = make_apd(1.0, 0.0).ops();
  Matrix2c excited = Matrix2c::Zero();
  excited(1, 1) = 1.0;
  EXPECT_NEAR(std::abs((e[1] * excited * e[1].adjoint())(0, 0)), 1.0, 1e-15);
}

TEST(kraus, action_matches_closed_form) {
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const double g = rng.uniform(), l = rng.uniform();
    const Matrix2c rho = random_state(rng);
    const auto out = apply(make_apd(g, l), DensityMatrix2(rho));
    ASSERT_LE(max_abs_diff(out.matrix(), apd_closed_form(g, l, rho)), 1e-12);
    ASSERT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    ASSERT_GE(out.min_eigenvalue(), -1e-10);
  }
}

TEST(kraus, apd_is_pd_after_ad) {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const double g = rng.uniform(), l = rng.uniform();
    const DensityMatrix2 rho(random_state(rng));
    const auto composed = KrausChannel::compose(make_pd(l), make_ad(g));
    ASSERT_LE(max_abs_diff(apply(composed, rho).matrix(), apply(make_apd(g, l), rho).matrix()), 1e-12);
  }
}

TEST(kraus, serial_amplitude_damping) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const double g1 = rng.uniform(), g2 = rng.uniform();
    const DensityMatrix2 rho(random_state(rng));
    const auto two = KrausChannel::compose(make_ad(g1), make_ad(g2));
    const auto one = make_ad(1.0 - (1.0 - g1) * (1.0 - g2));
    ASSERT_LE(max_abs_diff(apply(two, rho).matrix(), apply(one, rho).matrix()), 1e-12);
  }
}

TEST(density_matrix, invalid_states_rejected) {
  Matrix2c bad = Matrix2c::Identity();
  EXPECT_THROW(DensityMatrix2{bad}, std::domain_error);
  Matrix2c nonherm;
  nonherm << cd(0.5, 0), cd(0.3, 0), cd(0.1, 0), cd(0.5, 0);
  EXPECT_THROW(DensityMatrix2{nonherm}, std::domain_error);
  Matrix2c negative;
  negative << cd(0.5, 0), cd(0.9, 0), cd(0.9, 0), cd(0.5, 0);
  EXPECT_THROW(DensityMatrix2{negative}, std::domain_error);
}

TEST(twirl, pta_values) {
  const auto p0 = pta(0.0, 0.0);
  EXPECT_EQ(p0.pI, 1.0);
  EXPECT_EQ(p0.p(), 0.0);
  const double g = -std::expm1(-0.1);
  const auto p = pta(g, 0.0);
  EXPECT_NEAR(p.px, 0.0237906, 1e-7);
  EXPECT_NEAR(p.py, 0.0237906, 1e-7);
  EXPECT_NEAR(p.pz, 0.0005946, 1e-7);
  EXPECT_NEAR(pta(0.432, 0.0).pz, (2 - 0.432 - 2 * std::sqrt(0.568)) / 4, 1e-15);
}

TEST(twirl, cta_values) {
  EXPECT_EQ(cta(0.0, 0.0), 0.0);
  EXPECT_NEAR(cta(1.0, 1.0), 0.75, 1e-15);
  const auto d = decoherence_params(0.1 * 44.49, 44.49, 2 * 44.49);
  EXPECT_NEAR(cta(d.gamma, d.lambda), 0.0481759332406531, 1e-12);
  EXPECT_NEAR(cta(d.gamma, d.lambda), 0.05, 0.005);
}

TEST(twirl, cta_equals_pta_total) {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const double g = rng.uniform(), l = rng.uniform();
    ASSERT_NEAR(cta(g, l), pta(g, l).p(), 1e-12);
  }
}

TEST(twirl, monotone_in_both_parameters) {
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) {
      const double g = i / 40.0, l = j / 40.0, dg = 1 / 40.0;
      ASSERT_LE(cta(g, l), cta(g + dg, l) + 1e-15);
      ASSERT_LE(cta(g, l), cta(g, l + dg) + 1e-15);
      const auto a = pta(g, l), b = pta(g + dg, l), c = pta(g, l + dg);
      ASSERT_LE(a.px, b.px + 1e-15);
      ASSERT_LE(a.p(), b.p() + 1e-15);
      ASSERT_LE(a.pz, c.pz + 1e-15);
      // pz alone rises with gamma only without extra dephasing
      if (l == 0.0) ASSERT_LE(a.pz, b.pz + 1e-15);
    }
}

TEST(asymmetry, limits) {
  const auto a = asymmetry(1e-4, 50.0, 50.0);
  EXPECT_NEAR(a.alpha, 1.0, 1e-4);
  EXPECT_EQ(a.alpha_approx, 1.0);
  EXPECT_EQ(asymmetry(1.0, 50.0, 100.0).alpha_approx, 0.0);
  // 2 T1 / T2 - 1 = 1e4
  const double t1 = 100.0, t2 = 2.0 * t1 / (1e4 + 1.0);
  const auto big = asymmetry(1e-6, t1, t2);
  EXPECT_NEAR(big.alpha_approx, 1e4, 1e-6);
  EXPECT_NEAR(big.alpha / 1e4, 1.0, 0.01);
  EXPECT_THROW(asymmetry(0.0, 1.0, 1.0), std::domain_error);
}

TEST(pauli_from_alpha, values) {
  const auto d = pauli_from_alpha(0.3, 1.0);
  EXPECT_NEAR(d.px, 0.1, 1e-15);
  EXPECT_NEAR(d.pz, 0.1, 1e-15);
  const auto a = pauli_from_alpha(0.3, 100.0);
  EXPECT_NEAR(a.pz, 0.3 * 100 / 102, 1e-15);
  EXPECT_NEAR(a.px, 0.3 / 102, 1e-15);
  EXPECT_NEAR(a.pz, 0.2941176, 1e-7);
  EXPECT_EQ(pauli_from_alpha(0.0, 5.0).pI, 1.0);
  EXPECT_THROW(pauli_from_alpha(0.3, 0.0), std::domain_error);
}

TEST(pauli_params, clipping) {
  EXPECT_EQ(PauliChannelParams::from_xyz(-1e-16, 0.1, 0.1).px, 0.0);
  EXPECT_THROW(PauliChannelParams::from_xyz(-1e-9, 0.1, 0.1), std::domain_error);
  EXPECT_THROW(PauliChannelParams::from_xyz(0.5, 0.4, 0.2), std::domain_error);
}

TEST(sampling, identity_channel_and_empty) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(sample_error(PauliChannelParams{}, 13, rng).is_identity());
  EXPECT_EQ(sample_error(PauliChannelParams::depolarizing(0.3), 0, rng).size(), 0u);
}

TEST(sampling, marginals_within_four_sigma) {
  Rng rng(10);
  const auto params = PauliChannelParams::from_xyz(0.05, 0.02, 0.11);
  const std::size_t n = 10, blocks = 100000;
  std::array<double, 4> count{};
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto e = sample_error(params, n, rng);
    for (std::size_t q = 0; q < n; ++q) count[static_cast<std::size_t>(prob_index(e.get(q)))] += 1;
  }
  const double total = static_cast<double>(n * blocks);
  const auto p = params.as_array();
  for (std::size_t k = 0; k < 4; ++k) {
    const double sd = std::sqrt(p[k] * (1 - p[k]) / total);
    EXPECT_NEAR(count[k] / total, p[k], 4 * sd) << "outcome " << k;
  }
}

TEST(sampling, markov_extremes) {
  Rng rng(12);
  const auto params = PauliChannelParams::depolarizing(0.4);
  for (int t = 0; t < 200; ++t) {
    const auto e = sample_markov_error(params, 1.0, 9, rng);
    for (std::size_t q = 1; q < 9; ++q) ASSERT_EQ(e.get(q), e.get(0));
  }
  EXPECT_THROW(sample_markov_error(params, 1.5, 3, rng), std::domain_error);
}

TEST(sampling, markov_transition_matrix) {
  Rng rng(13);
  const auto params = PauliChannelParams::from_xyz(0.1, 0.05, 0.15);
  const double mu = 0.5;
  const std::size_t n = 1000001;
  const auto e = sample_markov_error(params, mu, n, rng);
  std::array<std::array<double, 4>, 4> counts{};
  std::array<double, 4> from{};
  for (std::size_t q = 1; q < n; ++q) {
    const auto a = static_cast<std::size_t>(prob_index(e.get(q - 1)));
    const auto b = static_cast<std::size_t>(prob_index(e.get(q)));
    counts[a][b] += 1;
    from[a] += 1;
  }
  const auto p = params.as_array();
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const double expect = (1 - mu) * p[b] + (a == b ? mu : 0.0);
      const double sd = std::sqrt(expect * (1 - expect) / from[a]);
      EXPECT_NEAR(counts[a][b] / from[a], expect, 4 * sd) << a << "->" << b;
    }
}

TEST(sampling, markov_zero_memory_marginals) {
  Rng rng(14);
  const auto params = PauliChannelParams::from_xyz(0.1, 0.05, 0.15);
  const std::size_t n = 200000;
  const auto e = sample_markov_error(params, 0.0, n, rng);
  std::array<double, 4> count{};
  for (std::size_t q = 0; q < n; ++q) count[static_cast<std::size_t>(prob_index(e.get(q)))] += 1;
  const auto p = params.as_array();
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(count[k] / n, p[k], 4 * std::sqrt(p[k] * (1 - p[k]) / n));
}
