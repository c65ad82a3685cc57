#pragma once

// Closed-form connection and secrecy outage probabilities.

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "socsec/errors.hpp"
#include "socsec/gamma_approx.hpp"
#include "socsec/geometry.hpp"
#include "socsec/parallel.hpp"
#include "socsec/params.hpp"
#include "socsec/quadrature.hpp"
#include "socsec/random.hpp"

namespace socsec {

struct OutageEstimate {
  enum class Method { ClosedForm, MonteCarlo, UpperBound };

  double value = 0.0;
  Method method = Method::ClosedForm;
  double ci_half_width = 0.0;
  std::map<std::string, double> meta;
  std::vector<std::string> warnings;
};

inline const char* to_string(OutageEstimate::Method m) {
  switch (m) {
    case OutageEstimate::Method::ClosedForm: return "closed-form";
    case OutageEstimate::Method::MonteCarlo: return "monte-carlo";
    case OutageEstimate::Method::UpperBound: return "upper-bound";
  }
  return "?";
}

namespace detail {

inline void echo_gamma(OutageEstimate& e, const std::string& prefix, const GammaParams& g) {
  e.meta[prefix + "_shape"] = g.shape;
  e.meta[prefix + "_scale"] = g.scale;
}

}  // namespace detail

/// Connection outage P(SIR_y < beta) under the Gamma fits of T(y) and I(y).
///
/// Without relays the signal is zero and outage is certain for beta > 0.
/// Without jammers the fitted signal is a.s. positive against zero
/// interference, so the outage is 0.
inline OutageEstimate cop_closed(const SystemParams& p, double beta, const ModelOptions& opt = {}) {
  validate(p);
  if (!(beta >= 0.0)) throw DomainError("cop_closed requires beta >= 0");
  OutageEstimate out;
  out.meta["beta"] = beta;
  if (beta == 0.0) return out;
  if (p.lambda_r() == 0.0) {
    out.value = 1.0;
    out.warnings.emplace_back("no relays: T(y) = 0");
    return out;
  }
  if (p.lambda_j() == 0.0) {
    out.warnings.emplace_back("no jammers: I(y) = 0");
    return out;
  }
  const GammaParams t = dest_signal_params(p, opt);
  const GammaParams i = interference_params(p, p.destination(), opt);
  detail::echo_gamma(out, "T", t);
  detail::echo_gamma(out, "I", i);
  out.meta["q"] = beta * i.scale / t.scale;
  out.value = dgr_cdf(t, i, beta);
  return out;
}

/// Secrecy outage P(SIR_z > beta_e) at a single eavesdropper z.
inline OutageEstimate sop_single_closed(const SystemParams& p, Point eve, double beta_e,
                                       const ModelOptions& opt = {}) {
  validate(p);
  if (!(beta_e >= 0.0)) throw DomainError("sop_single_closed requires beta_e >= 0");
  if (!contains(p.jammer_annulus(), eve)) throw DomainError("eavesdropper must lie in Annulus(L1, L2)");
  OutageEstimate out;
  out.meta["beta_e"] = beta_e;
  out.meta["eve_x"] = eve.x;
  out.meta["eve_y"] = eve.y;
  if (std::isinf(beta_e)) return out;
  if (p.lambda_r() == 0.0) {
    out.warnings.emplace_back("no relays: T(z) = 0");
    return out;
  }
  if (p.lambda_j() == 0.0) {
    out.value = 1.0;
    out.warnings.emplace_back("no jammers: I(z) = 0");
    return out;
  }
  const GammaParams t = eve_signal_params(p, eve, opt);
  const GammaParams i = interference_params(p, eve, opt);
  detail::echo_gamma(out, "T", t);
  detail::echo_gamma(out, "I", i);
  out.meta["q"] = beta_e * i.scale / t.scale;
  out.value = dgr_ccdf(t, i, beta_e);
  return out;
}

// ---------------------------------------------------------------------------
// Multi-eavesdropper upper bound

enum class RelaySumMode {
  /// S_k(z) = k P_R Q_z(1) / (pi L1^2): k times the mean gain of a uniform relay.
  ConditionalMean,
  /// S_k(z) from k relay positions drawn uniformly in the disk per node.
  Sampled,
};

struct MultiBoundOptions {
  ModelOptions model{};
  RelaySumMode relay_sum = RelaySumMode::ConditionalMean;
  std::uint64_t sampling_seed = 1;
  /// Starting Gauss-Legendre node counts of the outer z-integral.
  std::size_t radial_nodes = 64;
  std::size_t angular_nodes = 128;
  /// Node counts double until successive values agree to this relative level.
  double rel_tol = 1e-4;
  int max_doublings = 3;
  unsigned workers = 0;
  double truncation_warn = 1e-6;
};

namespace detail {

inline double poisson_pmf(std::size_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0));
}

/// G_k = \int_annulus Pois(k) exp(-lJ \int_Dbar kernel_k) dz for k = 1..kmax
/// on one outer grid. Angles cover [0, pi] and are doubled by the mirror
/// symmetry of both the jammer domain and the relay disk about the x-axis.
inline std::vector<double> multi_bound_terms(const SystemParams& p, double beta_e, std::size_t kmax,
                                             const MultiBoundOptions& opt, std::size_t nr, std::size_t nphi) {
  const quad::GaussLegendre rr = quad::gauss_legendre(nr);
  const quad::GaussLegendre ra = quad::gauss_legendre(nphi / 2);
  const double lr = p.lambda_r();
  const double lj = p.lambda_j();
  const double disk_area = std::numbers::pi * p.L1 * p.L1;
  const double mean_count = lr * disk_area;
  std::vector<double> pmf(kmax + 1);
  for (std::size_t k = 1; k <= kmax; ++k) pmf[k] = poisson_pmf(k, mean_count);

  const double r_mid = 0.5 * (p.L2 + p.L1);
  const double r_half = 0.5 * (p.L2 - p.L1);
  const double phi_half = 0.5 * std::numbers::pi;
  const std::size_t nodes = nr * ra.nodes.size();
  std::vector<double> slots(nodes * kmax, 0.0);

  const DbarDecomposition dbar = p.jammer_decomposition();
  const PuncturedAnnulus exact = p.jammer_domain();
  const bool jammed = lj > 0.0 && beta_e > 0.0;
  const bool flab = opt.model.jammer_domain == JammerDomain::Flabellate;

  parallel_for(
      nodes, opt.workers,
      [&](std::size_t n) {
        const std::size_t ir = n / ra.nodes.size();
        const std::size_t ia = n % ra.nodes.size();
        const double r = r_mid + r_half * rr.nodes[ir];
        const double phi = phi_half + phi_half * ra.nodes[ia];
        const double w = 2.0 * r_half * rr.weights[ir] * phi_half * ra.weights[ia] * r;
        const Point z{r * std::cos(phi), r * std::sin(phi)};
        double* row = &slots[n * kmax];
        if (!jammed) {
          for (std::size_t k = 1; k <= kmax; ++k) row[k - 1] = w * pmf[k];
          return;
        }
        SaturatingBatch kernel;
        kernel.alpha = p.alpha;
        kernel.guard = p.guard;
        kernel.scales.resize(kmax);
        if (opt.relay_sum == RelaySumMode::ConditionalMean) {
          const double q1 = integrate_radial(p.relay_region(), z, PowerKernel{p.alpha, p.guard});
          for (std::size_t k = 1; k <= kmax; ++k)
            kernel.scales[k - 1] = static_cast<double>(k) * p.P_R * q1 / disk_area / (beta_e * p.P_j);
        } else {
          Stream rng(opt.sampling_seed, n);
          double sum = 0.0;
          for (std::size_t k = 1; k <= kmax; ++k) {
            sum += std::pow(std::max(distance(sample_uniform(p.relay_region(), rng), z), p.guard), -p.alpha);
            kernel.scales[k - 1] = p.P_R * sum / (beta_e * p.P_j);
          }
        }
        // absolute accuracy of lJ * J well below the outer tolerance
        QuadratureControl ctl;
        ctl.rel_tol = 1e-8;
        ctl.abs_tol = 1e-6 / lj;
        ctl.max_intervals = 200;
        std::vector<double> j;
        if (flab)
          integrate_radial_batch(dbar, z, kernel, j, ctl);
        else
          integrate_radial_batch(exact, z, kernel, j, ctl);
        for (std::size_t k = 1; k <= kmax; ++k) row[k - 1] = w * pmf[k] * std::exp(-lj * j[k - 1]);
      },
      4);

  std::vector<double> g(kmax, 0.0);
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t k = 0; k < kmax; ++k) g[k] += slots[n * kmax + k];
  return g;
}

}  // namespace detail

/// Upper bound on the multi-eavesdropper secrecy outage for every
/// truncation K = 1..kmax from a single outer integration:
///   1 - exp(-lambda_e \int_annulus sum_{k<=K} Pois(k; lR pi L1^2)
///            exp(-lJ \int_Dbar 1 / (1 + S_k(z) d^alpha / (beta_e P_j)) dx) dz).
inline std::vector<OutageEstimate> sop_multi_upper_curve(const SystemParams& p, double beta_e, std::size_t kmax,
                                                         const MultiBoundOptions& opt = {}) {
  validate(p);
  if (kmax < 1) throw DomainError("sop_multi_upper requires K >= 1");
  if (!(beta_e >= 0.0)) throw DomainError("sop_multi_upper requires beta_e >= 0");
  std::vector<OutageEstimate> curve(kmax);
  for (std::size_t k = 0; k < kmax; ++k) {
    curve[k].method = OutageEstimate::Method::UpperBound;
    curve[k].meta["K"] = static_cast<double>(k + 1);
    curve[k].meta["beta_e"] = beta_e;
  }
  if (p.lambda_e == 0.0 || p.lambda_r() == 0.0 || std::isinf(beta_e)) return curve;

  std::size_t nr = opt.radial_nodes;
  std::size_t nphi = std::max<std::size_t>(2, opt.angular_nodes);
  std::vector<double> g = detail::multi_bound_terms(p, beta_e, kmax, opt, nr, nphi);
  auto total = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return 1.0 - std::exp(-p.lambda_e * s);
  };
  // sampled relay sums redraw positions at every node, so refinement only
  // trades one noisy estimate for another: evaluate once
  const bool sampled = opt.relay_sum == RelaySumMode::Sampled;
  bool converged = sampled;
  double change = 0.0;
  for (int round = 0; !sampled && round < opt.max_doublings; ++round) {
    nr *= 2;
    nphi *= 2;
    std::vector<double> finer = detail::multi_bound_terms(p, beta_e, kmax, opt, nr, nphi);
    const double a = total(g);
    const double b = total(finer);
    g = std::move(finer);
    change = std::abs(b - a);
    if (change <= opt.rel_tol * std::abs(b) || change <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergent("outer eavesdropper integral did not reach the requested relative agreement (change " +
                        std::to_string(change) + ")");

  double partial = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) {
    partial += g[k];
    OutageEstimate& e = curve[k];
    e.value = std::clamp(1.0 - std::exp(-p.lambda_e * partial), 0.0, 1.0);
    e.meta["radial_nodes"] = static_cast<double>(nr);
    e.meta["angular_nodes"] = static_cast<double>(nphi);
    e.meta["mean_relay_count"] = p.lambda_r() * std::numbers::pi * p.L1 * p.L1;
    const double ratio = partial > 0.0 ? g[k] / partial : 0.0;
    e.meta["last_term_ratio"] = ratio;
    if (sampled) e.warnings.emplace_back("relay sums sampled once per outer node; value carries sampling noise");
    if (ratio > opt.truncation_warn)
      e.warnings.emplace_back("TruncationWarning: k = K term is " + std::to_string(ratio) + " of the sum");
  }
  return curve;
}

inline OutageEstimate sop_multi_upper(const SystemParams& p, double beta_e, std::size_t K,
                                      const MultiBoundOptions& opt = {}) {
  return sop_multi_upper_curve(p, beta_e, K, opt).back();
}

}  // namespace socsec
