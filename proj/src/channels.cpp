#include "qecc/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qecc {

namespace {

constexpr double kStateTol = 1e-12;
constexpr double kClampTol = 1e-15;

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
}

double clamp_rounding(double v, const char* name) {
  if (v < 0.0) {
    if (v >= -kClampTol) return 0.0;
    throw std::domain_error(std::string(name) + " is negative: " + std::to_string(v));
  }
  return v;
}

// sqrt(1 - gamma - (1 - gamma) lambda) = sqrt((1 - gamma)(1 - lambda)), the coherence factor.
double coherence(double gamma, double lambda) { return std::sqrt((1.0 - gamma) * (1.0 - lambda)); }

}  // namespace

DensityMatrix2::DensityMatrix2(const Matrix2c& rho) : rho_(rho) {
  const auto tr = rho_.trace();
  if (std::abs(tr - 1.0) > kStateTol) throw std::domain_error("density matrix trace differs from 1");
  if (std::abs(rho_(1, 0) - std::conj(rho_(0, 1))) > kStateTol || std::abs(rho_(0, 0).imag()) > kStateTol ||
      std::abs(rho_(1, 1).imag()) > kStateTol)
    throw std::domain_error("density matrix is not Hermitian");
  if (min_eigenvalue() < -kStateTol) throw std::domain_error("density matrix has a negative eigenvalue");
}

double DensityMatrix2::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix2c> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

KrausChannel::KrausChannel(std::vector<Matrix2c> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw std::invalid_argument("a Kraus channel needs at least one operator");
}

double KrausChannel::completeness_residual() const {
  Matrix2c sum = Matrix2c::Zero();
  for (const auto& e : ops_) sum += e.adjoint() * e;
  return (sum - Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

KrausChannel KrausChannel::compose(const KrausChannel& outer, const KrausChannel& inner) {
  std::vector<Matrix2c> ops;
  ops.reserve(outer.ops_.size() * inner.ops_.size());
  for (const auto& f : outer.ops_)
    for (const auto& e : inner.ops_) ops.push_back(f * e);
  return KrausChannel(std::move(ops));
}

DensityMatrix2 apply(const KrausChannel& ch, const DensityMatrix2& rho) {
  Matrix2c out = Matrix2c::Zero();
  for (const auto& e : ch.ops()) out += e * rho.matrix() * e.adjoint();
  return DensityMatrix2(out);
}

DampingParams decoherence_params(double t, double t1, double t2) {
  if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
  if (!(t1 > 0.0)) throw std::domain_error("T1 must be positive");
  if (!(t2 > 0.0)) throw std::domain_error("T2 must be positive");
  if (t2 > 2.0 * t1) throw std::domain_error("T2 must not exceed 2*T1 (relaxation always implies dephasing)");
  DampingParams d;
  d.gamma = -std::expm1(-t / t1);
  d.lambda = -std::expm1(t / t1 - 2.0 * t / t2);
  d.lambda = clamp_rounding(d.lambda, "lambda");
  return d;
}

double t2_from_tphi(double t1, double tphi) {
  if (!(t1 > 0.0) || !(tphi > 0.0)) throw std::domain_error("T1 and Tphi must be positive");
  return 1.0 / (1.0 / (2.0 * t1) + 1.0 / tphi);
}

KrausChannel make_ad(double gamma) { return make_apd(gamma, 0.0); }

KrausChannel make_pd(double lambda) {
  require_unit_interval(lambda, "lambda");
  Matrix2c e0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - lambda)}};
  Matrix2c e1{{0.0, 0.0}, {0.0, std::sqrt(lambda)}};
  return KrausChannel({e0, e1});
}

KrausChannel make_apd(double gamma, double lambda) {
  require_unit_interval(gamma, "gamma");
  require_unit_interval(lambda, "lambda");
  Matrix2c e0{{1.0, 0.0}, {0.0, coherence(gamma, lambda)}};
  Matrix2c e1{{0.0, std::sqrt(gamma)}, {0.0, 0.0}};
  Matrix2c e2{{0.0, 0.0}, {0.0, std::sqrt((1.0 - gamma) * lambda)}};
  return KrausChannel({e0, e1, e2});
}

Matrix2c apd_closed_form(double gamma, double lambda, const Matrix2c& rho) {
  const double c = coherence(gamma, lambda);
  Matrix2c out;
  out(0, 0) = 1.0 - (1.0 - gamma) * rho(1, 1);
  out(0, 1) = rho(0, 1) * c;
  out(1, 0) = std::conj(rho(0, 1)) * c;
  out(1, 1) = (1.0 - gamma) * rho(1, 1);
  return out;
}

PauliChannelParams PauliChannelParams::from_xyz(double px, double py, double pz) {
  PauliChannelParams p;
  p.px = clamp_rounding(px, "px");
  p.py = clamp_rounding(py, "py");
  p.pz = clamp_rounding(pz, "pz");
  p.pI = clamp_rounding(1.0 - p.px - p.py - p.pz, "pI");
  p.validate();
  return p;
}

void PauliChannelParams::validate() const {
  for (double v : as_array())
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("Pauli probability outside [0, 1]: " + std::to_string(v));
  if (std::abs(pI + px + py + pz - 1.0) > 1e-12) throw std::domain_error("Pauli probabilities do not sum to 1");
}

PauliChannelParams pta(double gamma, double lambda) {
  require_unit_interval(gamma, "gamma");
  require_unit_interval(lambda, "lambda");
  const double c = coherence(gamma, lambda);
  return PauliChannelParams::from_xyz(gamma / 4.0, gamma / 4.0, (2.0 - gamma - 2.0 * c) / 4.0);
}

double cta(double gamma, double lambda) {
  require_unit_interval(gamma, "gamma");
  require_unit_interval(lambda, "lambda");
  return (2.0 + gamma - 2.0 * coherence(gamma, lambda)) / 4.0;
}

PauliChannelParams cta_params(double gamma, double lambda) { return PauliChannelParams::depolarizing(cta(gamma, lambda)); }

Asymmetry asymmetry(double t, double t1, double t2) {
  if (!(t > 0.0)) throw std::domain_error("asymmetry needs t > 0");
  const auto d = decoherence_params(t, t1, t2);
  const auto p = pta(d.gamma, d.lambda);
  return {p.pz / p.px, 2.0 * t1 / t2 - 1.0};
}

PauliChannelParams pauli_from_alpha(double p, double alpha) {
  require_unit_interval(p, "p");
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
  const double side = p / (alpha + 2.0);
  return PauliChannelParams::from_xyz(side, side, alpha * side);
}

Pauli draw_pauli(const PauliChannelParams& params, double u) {
  if (u < params.pI) return Pauli::I;
  u -= params.pI;
  if (u < params.px) return Pauli::X;
  u -= params.px;
  if (u < params.py) return Pauli::Y;
  u -= params.py;
  if (u < params.pz) return Pauli::Z;
  // u landed in the rounding slack at the top; pick the last nonzero outcome.
  if (params.pz > 0.0) return Pauli::Z;
  if (params.py > 0.0) return Pauli::Y;
  if (params.px > 0.0) return Pauli::X;
  return Pauli::I;
}

PauliString sample_error(const PauliChannelParams& params, std::size_t n, Rng& rng) {
  PauliString e(n);
  if (params.pI >= 1.0) return e;
  for (std::size_t q = 0; q < n; ++q) {
    const Pauli g = draw_pauli(params, rng.uniform());
    if (g != Pauli::I) e.set(q, g);
  }
  return e;
}

PauliString sample_markov_error(const PauliChannelParams& params, double mu, std::size_t n, Rng& rng) {
  require_unit_interval(mu, "mu");
  PauliString e(n);
  Pauli prev = Pauli::I;
  for (std::size_t q = 0; q < n; ++q) {
    Pauli g;
    if (q > 0 && rng.uniform() < mu)
      g = prev;
    else
      g = draw_pauli(params, rng.uniform());
    if (g != Pauli::I) e.set(q, g);
    prev = g;
  }
  return e;
}

}  // namespace qecc
