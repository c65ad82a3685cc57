#pragma once

// Cumulant-matched Gamma laws for the four received powers and the CDF of
// the ratio of two independent Gamma variables.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>

#include "socsec/errors.hpp"
#include "socsec/geometry.hpp"
#include "socsec/params.hpp"
#include "socsec/specfun.hpp"

namespace socsec {

struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

inline GammaParams fit_gamma(const MomentPair& m) {
  if (!(m.mean > 0.0) || !(m.variance > 0.0) || !std::isfinite(m.mean) || !std::isfinite(m.variance))
    throw DegenerateFit("Gamma fit needs positive finite mean and variance");
  return {m.mean * m.mean / m.variance, m.variance / m.mean};
}

inline MomentPair moments(const GammaParams& g) { return {g.mean(), g.variance()}; }

/// How the destination signal power T(y) is moment-matched.
enum class DestSignalModel {
  /// Exact first two moments of the coherent shot-noise sum (default).
  ShotNoise,
  /// nu = lR Q1^2 / (5 lR Q1^2 + Q2), theta = 3 P_R (5 lR Q1^2 + Q2) / Q1.
  Printed,
};

/// How the eavesdropper signal power T(z) is moment-matched.
enum class EveSignalModel {
  /// nu = lR Q1^2 / (lR Q1^2 + 2 Q2): the fit of mean P_R lR Q1 and
  /// variance P_R^2 (lR^2 Q1^2 + 2 lR Q2) (default).
  Rederived,
  /// nu = lR Q1 / (lR Q1^2 + 2 Q2) with the same theta.
  Printed,
};

/// Integration domain used for the jammer integrals over D-bar.
enum class JammerDomain {
  /// Three annular sectors A1 + A2 + A3 (default).
  Flabellate,
  /// Annulus(L1, L2) minus the protected disk, integrated exactly.
  Exact,
};

struct ModelOptions {
  DestSignalModel dest_signal = DestSignalModel::ShotNoise;
  EveSignalModel eve_signal = EveSignalModel::Rederived;
  JammerDomain jammer_domain = JammerDomain::Flabellate;
};

// ---------------------------------------------------------------------------
// Integral cache

/// Memo of radial power-law integrals keyed by (domain geometry, pole,
/// exponent, guard). Read-mostly: lookups take a shared lock, inserts an
/// exclusive one. Values are pure functions of the key, so caching never
/// changes a result.
class IntegralCache {
 public:
  using Key = std::array<double, 10>;

  template <class Compute>
  double get_or_compute(const Key& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = compute();
    std::unique_lock lock(mutex_);
    values_.emplace(key, value);
    return value;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    values_.clear();
  }

  [[nodiscard]] std::size_t size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
};

inline IntegralCache& integral_cache() {
  static IntegralCache cache;
  return cache;
}

// ---------------------------------------------------------------------------
// Power-law integrals

/// Q(order) = \int_{Disk(o, L1)} max(|x - pole|, guard)^(-order alpha) dx.
inline double q_moment(const SystemParams& p, Point pole, double order) {
  if (!(order > 0.0)) throw DomainError("q_moment order must be positive");
  const double s = order * p.alpha;
  const IntegralCache::Key key{0.0, p.L1, 0.0, 0.0, 0.0, pole.x, pole.y, s, p.guard, 0.0};
  return integral_cache().get_or_compute(key, [&] { return radial_integral(p.relay_region(), pole, s, p.guard); });
}

/// \int_{D-bar} max(|x - pole|, guard)^(-exponent) dx over the chosen domain.
inline double jammer_integral(const SystemParams& p, Point pole, double exponent,
                              JammerDomain domain = JammerDomain::Flabellate) {
  const double tag = domain == JammerDomain::Flabellate ? 1.0 : 2.0;
  const IntegralCache::Key key{tag, p.L1, p.L2, p.d, p.LG, pole.x, pole.y, exponent, p.guard, 0.0};
  return integral_cache().get_or_compute(key, [&] {
    if (p.guard == 0.0 && exponent >= 2.0) {
      const bool inside = domain == JammerDomain::Flabellate ? contains(p.jammer_decomposition(), pole)
                                                             : contains(p.jammer_domain(), pole);
      if (inside) throw NonConvergent("jammer integral diverges: receiver inside the jammer domain and guard = 0");
    }
    const PowerKernel kernel{exponent, p.guard};
    if (domain == JammerDomain::Flabellate) return integrate_radial(p.jammer_decomposition(), pole, kernel);
    return integrate_radial(p.jammer_domain(), pole, kernel);
  });
}

// ---------------------------------------------------------------------------
// Signal and interference fits

/// Exact mean and variance of T(y) = S^2 where S is the shot-noise sum
/// sum sqrt(P_R) |H| d^(-alpha/2) over the relay PPP. With
/// kappa_n = lR P_R^(n/2) Gamma(1 + n/2) Q(n/2) the cumulants of S,
/// E[S^2] = k2 + k1^2 and
/// E[S^4] = k4 + 4 k3 k1 + 3 k2^2 + 6 k2 k1^2 + k1^4.
inline MomentPair dest_signal_shot_noise_moments(const SystemParams& p) {
  const Point y = p.destination();
  const double lr = p.lambda_r();
  auto kappa = [&](int n) {
    const double half = 0.5 * n;
    return lr * std::pow(p.P_R, half) * std::tgamma(1.0 + half) * q_moment(p, y, half);
  };
  const double k1 = kappa(1);
  const double k2 = kappa(2);
  const double k3 = kappa(3);
  const double k4 = kappa(4);
  const double m2 = k2 + k1 * k1;
  const double m4 = k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 + k1 * k1 * k1 * k1;
  return {m2, m4 - m2 * m2};
}

/// Mean and variance implied by the printed fit: 3 lR P_R Q1 and
/// 45 lR^2 P_R^2 Q1^2 + 9 lR P_R^2 Q2.
inline MomentPair dest_signal_printed_moments(const SystemParams& p) {
  const Point y = p.destination();
  const double lr = p.lambda_r();
  const double q1 = q_moment(p, y, 1.0);
  const double q2 = q_moment(p, y, 2.0);
  return {3.0 * lr * p.P_R * q1, 45.0 * lr * lr * p.P_R * p.P_R * q1 * q1 + 9.0 * lr * p.P_R * p.P_R * q2};
}

inline GammaParams dest_signal_params(const SystemParams& p, const ModelOptions& opt = {}) {
  const double lr = p.lambda_r();
  if (!(lr > 0.0)) throw DegenerateFit("no relays (lambda_R = 0): T(y) is identically zero");
  if (opt.dest_signal == DestSignalModel::ShotNoise) return fit_gamma(dest_signal_shot_noise_moments(p));
  const Point y = p.destination();
  const double q1 = q_moment(p, y, 1.0);
  const double q2 = q_moment(p, y, 2.0);
  const double denom = 5.0 * lr * q1 * q1 + q2;
  return {lr * q1 * q1 / denom, 3.0 * p.P_R * denom / q1};
}

/// Campbell mean lJ P_j \int d^-alpha and variance 2 lJ P_j^2 \int d^-2alpha.
inline MomentPair interference_moments(const SystemParams& p, Point receiver, const ModelOptions& opt = {}) {
  const double lj = p.lambda_j();
  const double i1 = jammer_integral(p, receiver, p.alpha, opt.jammer_domain);
  const double i2 = jammer_integral(p, receiver, 2.0 * p.alpha, opt.jammer_domain);
  return {lj * p.P_j * i1, 2.0 * lj * p.P_j * p.P_j * i2};
}

inline GammaParams interference_params(const SystemParams& p, Point receiver, const ModelOptions& opt = {}) {
  const double lj = p.lambda_j();
  if (!(lj > 0.0)) throw DegenerateFit("no jammers (lambda_J = 0): interference is identically zero");
  const double i1 = jammer_integral(p, receiver, p.alpha, opt.jammer_domain);
  const double i2 = jammer_integral(p, receiver, 2.0 * p.alpha, opt.jammer_domain);
  if (!(i1 > 0.0) || !(i2 > 0.0)) throw DegenerateFit("empty jammer domain");
  return {lj * i1 * i1 / (2.0 * i2), 2.0 * p.P_j * i2 / i1};
}

/// Mean P_R lR Q1 and variance P_R^2 (lR^2 Q1^2 + 2 lR Q2) of the
/// conditionally exponential leakage T(z).
inline MomentPair eve_signal_moments(const SystemParams& p, Point eve) {
  const double lr = p.lambda_r();
  const double q1 = q_moment(p, eve, 1.0);
  const double q2 = q_moment(p, eve, 2.0);
  return {p.P_R * lr * q1, p.P_R * p.P_R * (lr * lr * q1 * q1 + 2.0 * lr * q2)};
}

inline GammaParams eve_signal_params(const SystemParams& p, Point eve, const ModelOptions& opt = {}) {
  const double lr = p.lambda_r();
  if (!(lr > 0.0)) throw DegenerateFit("no relays (lambda_R = 0): T(z) is identically zero");
  const double q1 = q_moment(p, eve, 1.0);
  const double q2 = q_moment(p, eve, 2.0);
  const double denom = lr * q1 * q1 + 2.0 * q2;
  const double numer = opt.eve_signal == EveSignalModel::Rederived ? lr * q1 * q1 : lr * q1;
  return {numer / denom, p.P_R * denom / q1};
}

// ---------------------------------------------------------------------------
// Double Gamma ratio

namespace detail {

/// 1 - P(T/I < beta) = C q^nT / (q+1)^(nT+nI) 2F1(1, nT+nI; nI+1; 1/(q+1)),
/// C = Gamma(nT+nI) / (nI Gamma(nT) Gamma(nI)), with the prefactor in logs.
inline double dgr_tail(double nu_t, double nu_i, double q) {
  const double sum = nu_t + nu_i;
  const double log_pref = nu_t * std::log(q) - sum * std::log1p(q) + std::lgamma(sum) - std::log(nu_i) -
                          std::lgamma(nu_t) - std::lgamma(nu_i);
  return std::exp(log_pref) * hyp2f1(1.0, sum, nu_i + 1.0, 1.0 / (q + 1.0));
}

}  // namespace detail

/// P(T / I < beta) for independent T ~ Gamma(nu_T, theta_T), I ~ Gamma(nu_I, theta_I).
///
/// With q = beta theta_I / theta_T the closed form needs 2F1 at 1/(q+1). For
/// q < 1 the same closed form is applied to the swapped pair,
/// P(T/I < beta) = 1 - P(I/T < 1/beta), so the 2F1 argument stays <= 1/2.
inline double dgr_cdf(const GammaParams& t, const GammaParams& i, double beta) {
  validate(t);
  validate(i);
  if (!(beta >= 0.0)) throw DomainError("dgr_cdf requires beta >= 0");
  if (beta == 0.0) return 0.0;
  if (std::isinf(beta)) return 1.0;
  const double q = beta * i.scale / t.scale;
  double p = q >= 1.0 ? 1.0 - detail::dgr_tail(t.shape, i.shape, q) : detail::dgr_tail(i.shape, t.shape, 1.0 / q);
  return std::clamp(p, 0.0, 1.0);
}

/// P(T / I > beta), evaluated without cancellation on either side of q = 1.
inline double dgr_ccdf(const GammaParams& t, const GammaParams& i, double beta) {
  validate(t);
  validate(i);
  if (!(beta >= 0.0)) throw DomainError("dgr_ccdf requires beta >= 0");
  if (beta == 0.0) return 1.0;
  if (std::isinf(beta)) return 0.0;
  const double q = beta * i.scale / t.scale;
  double p = q >= 1.0 ? detail::dgr_tail(t.shape, i.shape, q) : 1.0 - detail::dgr_tail(i.shape, t.shape, 1.0 / q);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace socsec
