#pragma once

// Single-qubit decoherence channels (amplitude damping, phase damping and
// their combination), their Pauli / Clifford twirl approximations, and Pauli
// error samplers.

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "qecc/pauli.hpp"
#include "qecc/rng.hpp"

namespace qecc {

using Matrix2c = Eigen::Matrix2cd;

class DensityMatrix2 {
 public:
  /// Validates trace, Hermiticity and positivity.
  explicit DensityMatrix2(const Matrix2c& rho);

  static DensityMatrix2 ground() { return DensityMatrix2(Matrix2c{{1.0, 0.0}, {0.0, 0.0}}); }

  const Matrix2c& matrix() const { return rho_; }
  std::complex<double> operator()(int r, int c) const { return rho_(r, c); }
  double min_eigenvalue() const;

 private:
  Matrix2c rho_;
};

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix2c> ops);

  const std::vector<Matrix2c>& ops() const { return ops_; }
  /// Max-abs entry of sum E^dagger E - I.
  double completeness_residual() const;

  /// Kraus set of `outer` applied after `inner`: {F_k E_l}.
  static KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

 private:
  std::vector<Matrix2c> ops_;
};

DensityMatrix2 apply(const KrausChannel& ch, const DensityMatrix2& rho);

struct DampingParams {
  double gamma = 0.0;   // damping probability
  double lambda = 0.0;  // scattering probability
};

/// gamma = 1 - exp(-t/T1), lambda = 1 - exp(t/T1 - 2t/T2). Requires t >= 0 and
/// 0 < T2 <= 2 T1; times in any consistent unit.
DampingParams decoherence_params(double t, double t1, double t2);
/// 1/T2 = 1/(2 T1) + 1/Tphi; an infinite Tphi gives the Ramsey limit 2 T1.
double t2_from_tphi(double t1, double tphi);

KrausChannel make_ad(double gamma);
KrausChannel make_pd(double lambda);
/// Phase damping after amplitude damping, three Kraus operators.
KrausChannel make_apd(double gamma, double lambda);
/// Closed-form APD action on rho.
Matrix2c apd_closed_form(double gamma, double lambda, const Matrix2c& rho);

struct PauliChannelParams {
  double pI = 1.0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;

  /// Builds (1 - px - py - pz, px, py, pz). Rounding negatives down to -1e-15
  /// are clamped to zero; anything else invalid throws std::domain_error.
  static PauliChannelParams from_xyz(double px, double py, double pz);
  static PauliChannelParams depolarizing(double p) { return from_xyz(p / 3.0, p / 3.0, p / 3.0); }

  double p() const { return px + py + pz; }
  std::array<double, 4> as_array() const { return {pI, px, py, pz}; }
  double operator[](Pauli g) const { return as_array()[static_cast<std::size_t>(prob_index(g))]; }
  /// Throws std::domain_error if not a probability vector.
  void validate() const;
};

PauliChannelParams pta(double gamma, double lambda);
/// Depolarizing probability of the Clifford twirl.
double cta(double gamma, double lambda);
PauliChannelParams cta_params(double gamma, double lambda);

struct Asymmetry {
  double alpha;         // pz / px of the Pauli twirl
  double alpha_approx;  // 2 T1 / T2 - 1, the t << T1 limit
};
/// Requires t > 0 so that px > 0.
Asymmetry asymmetry(double t, double t1, double t2);

PauliChannelParams pauli_from_alpha(double p, double alpha);

/// Inverse cumulative lookup for one qubit, u uniform on [0, 1).
Pauli draw_pauli(const PauliChannelParams& params, double u);

/// i.i.d. per-qubit draws.
PauliString sample_error(const PauliChannelParams& params, std::size_t n, Rng& rng);
/// First qubit from params; each next qubit repeats the previous operator with
/// probability mu, otherwise is a fresh draw: q(a|b) = (1-mu) p_a + mu delta_ab.
PauliString sample_markov_error(const PauliChannelParams& params, double mu, std::size_t n, Rng& rng);

}  // namespace qecc
