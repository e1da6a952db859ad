#include "qecc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <Eigen/Dense>

#include "qecc/info_limits.hpp"

namespace qecc {

namespace {

void require_open_prob(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("estimator needs p in (0, 1), got " + std::to_string(p));
}

double clamp_prob(double v) { return std::clamp(v, kOnlineClamp, 1.0 - kOnlineClamp); }

PauliChannelParams prior_from(const PauliChannelParams& est, EstimatorKind kind) {
  if (kind == EstimatorKind::Depolarizing) return PauliChannelParams::depolarizing(clamp_prob(est.p()));
  double px = clamp_prob(est.px), py = clamp_prob(est.py), pz = clamp_prob(est.pz);
  const double total = px + py + pz;
  if (total > 1.0 - kOnlineClamp) {
    const double scale = (1.0 - kOnlineClamp) / total;
    px *= scale;
    py *= scale;
    pz *= scale;
  }
  return PauliChannelParams::from_xyz(px, py, pz);
}

bool finite(const PauliChannelParams& p) {
  return std::isfinite(p.px) && std::isfinite(p.py) && std::isfinite(p.pz) && std::isfinite(p.pI);
}

}  // namespace

Probe parse_probe(const std::string& s) {
  if (s == "pure") return Probe::Pure;
  if (s == "epr") return Probe::Epr;
  throw std::invalid_argument("unknown probe '" + s + "' (expected pure or epr)");
}

const char* to_string(Probe p) { return p == Probe::Pure ? "pure" : "epr"; }

void EstimatorModel::validate() const {
  if (n < 1) throw std::domain_error("probe count must be at least 1");
  require_open_prob(p);
}

double fisher(double p, Probe probe) {
  require_open_prob(p);
  return probe == Probe::Pure ? 9.0 / (8.0 * p * (3.0 - 2.0 * p)) : 9.0 / (16.0 * p * (1.0 - p));
}

double cramer_rao_var(double p, Probe probe, std::size_t n) {
  if (n < 1) throw std::domain_error("probe count must be at least 1");
  return 1.0 / (static_cast<double>(n) * fisher(p, probe));
}

TruncGauss estimator_pdf(double p, Probe probe, std::size_t n) {
  return TruncGauss{p, std::sqrt(cramer_rao_var(p, probe, n)), 0.0, 1.0};
}

SensitivityCurve::SensitivityCurve(std::vector<double> p_hat, std::vector<double> wer)
    : x_(std::move(p_hat)), y_(std::move(wer)) {
  if (x_.empty() || x_.size() != y_.size()) throw std::invalid_argument("sensitivity curve needs matching, nonempty columns");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("sensitivity curve p_hat must be strictly increasing");
  for (double v : y_)
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("sensitivity curve WER outside [0, 1]");
}

double SensitivityCurve::operator()(double p) const {
  if (p <= x_.front()) return y_.front();
  if (p >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), p);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  const double t = (p - x_[k - 1]) / (x_[k] - x_[k - 1]);
  return y_[k - 1] + t * (y_[k] - y_[k - 1]);
}

SensitivityCurve read_sensitivity_csv(std::istream& is) {
  std::vector<double> x, y;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) {
      if (x.empty()) continue;  // header
      throw std::invalid_argument("sensitivity CSV: bad row '" + line + "'");
    }
    x.push_back(a);
    y.push_back(b);
  }
  return SensitivityCurve(std::move(x), std::move(y));
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double averaged_wer(const SensitivityCurve& curve, double p, Probe probe, std::size_t n) {
  const TruncGauss d = estimator_pdf(p, probe, n);
  const double lo = std::max(0.0, p - 12.0 * d.sigma), hi = std::min(1.0, p + 12.0 * d.sigma);
  if (!(hi - lo > 1e-14)) return curve(p);
  // integrate piecewise between curve knots so every piece is smooth
  std::vector<double> cuts{lo};
  for (double x : curve.p_hat())
    if (x > lo && x < hi) cuts.push_back(x);
  if (p > lo && p < hi) cuts.push_back(p);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto f = [&](double x) { return curve(x) * d.pdf(x); };
  const double scale = std::max(curve(p), 1e-300);
  double total = 0.0, mass = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    total += adaptive_simpson(f, a, b, kAveragedWerRelTol * scale * (b - a) / (hi - lo) * 0.1);
    mass += d.cdf(b) - d.cdf(a);
  }
  // renormalize for the tails beyond 12 sigma (mass is 1 to ~1e-32 in practice)
  return total / mass;
}

double online_estimate_step(const Marginals& m) {
  if (m.empty()) throw std::invalid_argument("no marginals");
  double s = 0.0;
  for (const auto& q : m) s += q[0];
  return 1.0 - s / static_cast<double>(m.size());
}

AsymmetricEstimate online_estimate_step_asym(const Marginals& m) {
  if (m.empty()) throw std::invalid_argument("no marginals");
  AsymmetricEstimate e;
  for (const auto& q : m) {
    e.px += q[1];
    e.py += q[2];
    e.pz += q[3];
  }
  const double n = static_cast<double>(m.size());
  e.px /= n;
  e.py /= n;
  e.pz /= n;
  if (e.px > 0.0) e.alpha = e.pz / e.px;
  return e;
}

std::optional<double> OnlineResult::alpha() const {
  if (estimate.px > 0.0) return estimate.pz / estimate.px;
  return std::nullopt;
}

PauliChannelParams online_default_init(const StabilizerCode& code, EstimatorKind kind) {
  const double pstar = depolarizing_hashing_limit(static_cast<double>(code.k()) / static_cast<double>(code.n()));
  (void)kind;  // p*/3 per component is the depolarizing point either way
  return PauliChannelParams::depolarizing(pstar);
}

OnlineResult online_decode(const StabilizerCode& code, std::uint32_t syndrome_idx, const PauliChannelParams& init,
                           EstimatorKind kind, std::size_t max_iters, double tolerance) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
  init.validate();
  OnlineResult r;
  r.trajectory.push_back(init);
  PauliChannelParams cur = init;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const auto m = posterior_marginals(code, syndrome_idx, prior_from(cur, kind));
    PauliChannelParams next;
    if (kind == EstimatorKind::Depolarizing) {
      const double p = online_estimate_step(m);
      next = {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
    } else {
      const auto a = online_estimate_step_asym(m);
      next = {1.0 - a.px - a.py - a.pz, a.px, a.py, a.pz};
    }
    if (!finite(next)) {
      r.trajectory.push_back(next);
      throw OnlineEstimationError("online estimate became non-finite at iteration " + std::to_string(it + 1),
                                  r.trajectory);
    }
    r.trajectory.push_back(next);
    r.iterations = it + 1;
    const double delta = std::max({std::abs(next.px - cur.px), std::abs(next.py - cur.py),
                                   std::abs(next.pz - cur.pz)});
    cur = next;
    if (kind == EstimatorKind::Depolarizing ? std::abs(next.p() - r.trajectory[it].p()) < tolerance
                                            : delta < tolerance)
      break;
  }
  r.estimate = cur;
  r.logical_class = decode_dqmld(code, syndrome_idx, prior_from(cur, kind)).logical_class;
  return r;
}

namespace {

// One estimator step averaged over syndromes: returns (px, py, pz).
Eigen::Vector3d joint_step(const StabilizerCode& code, const std::vector<double>& w, const PauliChannelParams& prior,
                           EstimatorKind kind) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (std::uint32_t s = 0; s < code.num_syndromes(); ++s) {
    if (w[s] == 0.0) continue;
    const auto m = posterior_marginals(code, s, prior);
    if (kind == EstimatorKind::Depolarizing) {
      const double p = online_estimate_step(m);
      acc += w[s] * Eigen::Vector3d(p / 3.0, p / 3.0, p / 3.0);
    } else {
      const auto a = online_estimate_step_asym(m);
      acc += w[s] * Eigen::Vector3d(a.px, a.py, a.pz);
    }
  }
  return acc;
}

PauliChannelParams from_vec(const Eigen::Vector3d& v) { return {1.0 - v.sum(), v[0], v[1], v[2]}; }

std::vector<double> normalized(const StabilizerCode& code, const std::vector<double>& w) {
  if (w.size() != code.num_syndromes()) throw std::invalid_argument("one weight per syndrome expected");
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw std::invalid_argument("syndrome weights must be nonnegative");
    total += v;
  }
  if (!(total > 0.0)) throw std::invalid_argument("syndrome weights sum to zero");
  std::vector<double> out(w);
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> tally(const StabilizerCode& code, const std::vector<std::uint32_t>& syn) {
  std::vector<double> counts(code.num_syndromes(), 0.0);
  for (auto s : syn) counts[s] += 1.0;
  return counts;
}

std::uint32_t block_syndrome(const StabilizerCode& code, const PauliChannelParams& truth, std::uint64_t seed,
                             std::size_t b) {
  Rng rng(seed, b);
  return syndrome_index(code.H, sample_error(truth, code.n(), rng));
}

}  // namespace

std::optional<double> JointOnlineResult::alpha() const {
  if (estimate.px > 0.0) return estimate.pz / estimate.px;
  return std::nullopt;
}

JointOnlineResult online_estimate_joint(const StabilizerCode& code, const std::vector<double>& syndrome_weights,
                                        const PauliChannelParams& init, EstimatorKind kind, std::size_t max_iters,
                                        double tolerance) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
  init.validate();
  const auto w = normalized(code, syndrome_weights);
  JointOnlineResult r;
  r.trajectory.push_back(init);
  PauliChannelParams cur = init;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const PauliChannelParams next = from_vec(joint_step(code, w, prior_from(cur, kind), kind));
    r.trajectory.push_back(next);
    if (!finite(next))
      throw OnlineEstimationError("online estimate became non-finite at iteration " + std::to_string(it + 1),
                                  r.trajectory);
    r.iterations = it + 1;
    const double delta =
        std::max({std::abs(next.px - cur.px), std::abs(next.py - cur.py), std::abs(next.pz - cur.pz),
                  std::abs(next.p() - cur.p())});
    cur = next;
    if (delta < tolerance) break;
  }
  r.estimate = cur;
  return r;
}

std::vector<double> syndrome_distribution(const StabilizerCode& code, const PauliChannelParams& truth) {
  truth.validate();
  const auto p = truth.as_array();
  std::vector<double> out(code.num_syndromes(), 0.0);
  for (std::uint32_t s = 0; s < code.num_syndromes(); ++s)
    for (std::uint32_t idx : code.errors_by_syndrome[s]) {
      double w = 1.0;
      std::uint32_t r = idx;
      for (std::size_t q = 0; q < code.n(); ++q, r >>= 2) w *= p[r & 3];
      out[s] += w;
    }
  return out;
}

OnlineOracle online_oracle(const StabilizerCode& code, const PauliChannelParams& truth, const PauliChannelParams& init,
                           EstimatorKind kind) {
  const auto w = syndrome_distribution(code, truth);
  OnlineOracle o;
  o.limit = online_estimate_joint(code, w, init, kind, 10000, 1e-15).estimate;
  const Eigen::Vector3d theta(o.limit.px, o.limit.py, o.limit.pz);

  // per-block covariance of the step at the limit
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  const auto prior = prior_from(o.limit, kind);
  for (std::uint32_t s = 0; s < code.num_syndromes(); ++s) {
    std::vector<double> one(code.num_syndromes(), 0.0);
    one[s] = 1.0;
    const Eigen::Vector3d g = joint_step(code, one, prior, kind) - theta;
    cov += w[s] * g * g.transpose();
  }
  // Jacobian of the averaged step by central differences
  Eigen::Matrix3d jac;
  const double h = 1e-6 * std::max(theta.minCoeff(), 1e-9);
  if (kind == EstimatorKind::Depolarizing) {
    const double p = o.limit.p();
    const double dh = 1e-6 * p;
    const double fp = joint_step(code, w, PauliChannelParams::depolarizing(p + dh), kind).sum();
    const double fm = joint_step(code, w, PauliChannelParams::depolarizing(p - dh), kind).sum();
    const double slope = (fp - fm) / (2.0 * dh);
    o.sd_p = std::sqrt(cov.sum()) / std::abs(1.0 - slope);
    return o;
  }
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d up = theta, dn = theta;
    up[k] += h;
    dn[k] -= h;
    jac.col(k) = (joint_step(code, w, from_vec(up), kind) - joint_step(code, w, from_vec(dn), kind)) / (2.0 * h);
  }
  const Eigen::Matrix3d a = (Eigen::Matrix3d::Identity() - jac).inverse();
  const Eigen::Matrix3d ct = a * cov * a.transpose();
  const Eigen::Vector3d gp(1.0, 1.0, 1.0);
  const Eigen::Vector3d ga(-theta[2] / (theta[0] * theta[0]), 0.0, 1.0 / theta[0]);
  o.sd_p = std::sqrt(gp.dot(ct * gp));
  o.sd_alpha = std::sqrt(ga.dot(ct * ga));
  return o;
}

JointOnlineResult online_monte_carlo(const StabilizerCode& code, const PauliChannelParams& truth,
                                     const PauliChannelParams& init, EstimatorKind kind, std::size_t blocks,
                                     std::uint64_t seed) {
  if (blocks == 0) throw std::domain_error("need at least one block");
  truth.validate();
  std::vector<std::uint32_t> syn(blocks);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < static_cast<long>(blocks); ++b)
    syn[static_cast<std::size_t>(b)] = block_syndrome(code, truth, seed, static_cast<std::size_t>(b));
  auto r = online_estimate_joint(code, tally(code, syn), init, kind);
  r.blocks = blocks;
  return r;
}

JointOnlineResult online_monte_carlo_serial(const StabilizerCode& code, const PauliChannelParams& truth,
                                            const PauliChannelParams& init, EstimatorKind kind, std::size_t blocks,
                                            std::uint64_t seed) {
  if (blocks == 0) throw std::domain_error("need at least one block");
  truth.validate();
  std::vector<std::uint32_t> syn(blocks);
  for (std::size_t b = 0; b < blocks; ++b) syn[b] = block_syndrome(code, truth, seed, b);
  auto r = online_estimate_joint(code, tally(code, syn), init, kind);
  r.blocks = blocks;
  return r;
}

}  // namespace qecc
