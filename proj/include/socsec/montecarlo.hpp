#pragma once

// Trial-level simulation of the second phase: the independent oracle for
// every closed form.
//
// Trial i draws everything from Stream(base_seed, i), and per-trial results
// land in slot i before a serial reduction, so estimates are bit-identical
// for any worker count. Thresholds on one curve share the same trials.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "socsec/channel.hpp"
#include "socsec/errors.hpp"
#include "socsec/outage.hpp"
#include "socsec/parallel.hpp"
#include "socsec/params.hpp"
#include "socsec/random.hpp"
#include "socsec/specfun.hpp"

namespace socsec {

struct TrialPlan {
  std::size_t trials = 100000;
  std::uint64_t base_seed = 1;
  /// 0 = all hardware threads. Never changes the result.
  unsigned workers = 0;
};

struct SimOptions {
  CategorizeMode categorize = CategorizeMode::Thinned;
  /// Build T(z) from explicit complex channels instead of the conditional
  /// exponential shortcut.
  bool phase_simulation = false;
};

enum class PowerVariable { Ty, Iy, Tz, Iz };

inline const char* to_string(PowerVariable v) {
  switch (v) {
    case PowerVariable::Ty: return "Ty";
    case PowerVariable::Iy: return "Iy";
    case PowerVariable::Tz: return "Tz";
    case PowerVariable::Iz: return "Iz";
  }
  return "?";
}

inline void validate(const TrialPlan& plan) {
  if (plan.trials < 1) throw ConfigError("TrialPlan.trials must be >= 1");
}

namespace detail {

template <class PerTrial>
std::vector<double> run_trials(const SystemParams& p, const TrialPlan& plan, PerTrial&& per_trial) {
  validate(p);
  validate(plan);
  std::vector<double> out(plan.trials);
  parallel_for(plan.trials, plan.workers, [&](std::size_t i) {
    Stream rng(plan.base_seed, i);
    out[i] = per_trial(rng);
  }, 256);
  return out;
}

template <class Rng>
double eve_signal(const SystemParams& p, const NodeSet& nodes, Point eve, const SimOptions& opt, Rng& rng) {
  if (opt.phase_simulation) return signal_power_eve_phases(nodes.relays, eve, p.P_R, p.alpha, rng, p.guard);
  return signal_power_eve(nodes.relays, eve, p.P_R, p.alpha, rng, p.guard);
}

inline OutageEstimate frequency(std::size_t hits, std::size_t n) {
  OutageEstimate e;
  e.method = OutageEstimate::Method::MonteCarlo;
  e.value = static_cast<double>(hits) / static_cast<double>(n);
  e.ci_half_width = 1.96 * std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
  e.meta["trials"] = static_cast<double>(n);
  return e;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-trial statistics

/// SIR at the destination, one entry per trial.
inline std::vector<double> simulate_dest_sir(const SystemParams& p, const TrialPlan& plan,
                                             const SimOptions& opt = {}) {
  const Point y = p.destination();
  return detail::run_trials(p, plan, [&](Stream& rng) {
    const NodeSet nodes = categorize(p, rng, opt.categorize);
    const double t = signal_power_dest(nodes.relays, y, p.P_R, p.alpha, rng, p.guard);
    const double i = interference_power(nodes.jammers, y, p.P_j, p.alpha, p.guard, rng);
    return sir(t, i);
  });
}

/// SIR at a fixed eavesdropper position, one entry per trial.
inline std::vector<double> simulate_eve_sir(const SystemParams& p, Point eve, const TrialPlan& plan,
                                            const SimOptions& opt = {}) {
  return detail::run_trials(p, plan, [&](Stream& rng) {
    const NodeSet nodes = categorize(p, rng, opt.categorize);
    const double t = detail::eve_signal(p, nodes, eve, opt, rng);
    const double i = interference_power(nodes.jammers, eve, p.P_j, p.alpha, p.guard, rng);
    return sir(t, i);
  });
}

/// Largest SIR over the sampled eavesdroppers (0 when there are none).
inline std::vector<double> simulate_max_eve_sir(const SystemParams& p, const TrialPlan& plan,
                                                const SimOptions& opt = {}) {
  return detail::run_trials(p, plan, [&](Stream& rng) {
    const NodeSet nodes = categorize(p, rng, opt.categorize);
    double best = 0.0;
    for (const Point& z : nodes.eavesdroppers) {
      const double t = detail::eve_signal(p, nodes, z, opt, rng);
      const double i = interference_power(nodes.jammers, z, p.P_j, p.alpha, p.guard, rng);
      best = std::max(best, sir(t, i));
    }
    return best;
  });
}

/// Samples of one received-power variable. Tz and Iz are taken at `eve`.
inline std::vector<double> simulate_variable(const SystemParams& p, PowerVariable v, const TrialPlan& plan,
                                             Point eve = {}, const SimOptions& opt = {}) {
  const Point y = p.destination();
  return detail::run_trials(p, plan, [&](Stream& rng) {
    const NodeSet nodes = categorize(p, rng, opt.categorize);
    switch (v) {
      case PowerVariable::Ty: return signal_power_dest(nodes.relays, y, p.P_R, p.alpha, rng, p.guard);
      case PowerVariable::Iy: return interference_power(nodes.jammers, y, p.P_j, p.alpha, p.guard, rng);
      case PowerVariable::Tz: return detail::eve_signal(p, nodes, eve, opt, rng);
      case PowerVariable::Iz: return interference_power(nodes.jammers, eve, p.P_j, p.alpha, p.guard, rng);
    }
    return 0.0;
  });
}

// ---------------------------------------------------------------------------
// Outage estimators

/// Fraction of samples below (strictly) each threshold.
inline std::vector<OutageEstimate> fraction_below(const std::vector<double>& samples, const std::vector<double>& thresholds) {
  std::vector<OutageEstimate> out;
  for (double b : thresholds) {
    const auto hits = static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [b](double s) { return s < b; }));
    out.push_back(detail::frequency(hits, samples.size()));
    out.back().meta["threshold"] = b;
  }
  return out;
}

/// Fraction of samples strictly above each threshold.
inline std::vector<OutageEstimate> fraction_above(const std::vector<double>& samples, const std::vector<double>& thresholds) {
  std::vector<OutageEstimate> out;
  for (double b : thresholds) {
    const auto hits = static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [b](double s) { return s > b; }));
    out.push_back(detail::frequency(hits, samples.size()));
    out.back().meta["threshold"] = b;
  }
  return out;
}

inline std::vector<OutageEstimate> estimate_cop_curve(const SystemParams& p, const std::vector<double>& betas,
                                                      const TrialPlan& plan, const SimOptions& opt = {}) {
  return fraction_below(simulate_dest_sir(p, plan, opt), betas);
}

inline OutageEstimate estimate_cop(const SystemParams& p, double beta, const TrialPlan& plan,
                                   const SimOptions& opt = {}) {
  return estimate_cop_curve(p, {beta}, plan, opt).front();
}

inline std::vector<OutageEstimate> estimate_sop_single_curve(const SystemParams& p, Point eve,
                                                             const std::vector<double>& betas, const TrialPlan& plan,
                                                             const SimOptions& opt = {}) {
  return fraction_above(simulate_eve_sir(p, eve, plan, opt), betas);
}

inline OutageEstimate estimate_sop_single(const SystemParams& p, Point eve, double beta_e, const TrialPlan& plan,
                                          const SimOptions& opt = {}) {
  return estimate_sop_single_curve(p, eve, {beta_e}, plan, opt).front();
}

inline std::vector<OutageEstimate> estimate_sop_multi_curve(const SystemParams& p, const std::vector<double>& betas,
                                                            const TrialPlan& plan, const SimOptions& opt = {}) {
  return fraction_above(simulate_max_eve_sir(p, plan, opt), betas);
}

inline OutageEstimate estimate_sop_multi(const SystemParams& p, double beta_e, const TrialPlan& plan,
                                         const SimOptions& opt = {}) {
  return estimate_sop_multi_curve(p, {beta_e}, plan, opt).front();
}

// ---------------------------------------------------------------------------
// Moments and histograms

/// 100 uniform bins on [0, 99.5th percentile]. `counts` are raw counts and
/// `total` includes the samples above the last edge.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  [[nodiscard]] double density(std::size_t bin) const {
    return static_cast<double>(counts[bin]) / (static_cast<double>(total) * (edges[bin + 1] - edges[bin]));
  }
};

inline Histogram make_histogram(const std::vector<double>& samples, std::size_t bins = 100, double upper_quantile = 0.995) {
  if (samples.empty()) throw DomainError("histogram of an empty sample");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(upper_quantile * static_cast<double>(sorted.size())));
  double top = sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
  if (!(top > 0.0)) top = 1.0;
  Histogram h;
  h.total = samples.size();
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = top * static_cast<double>(i) / static_cast<double>(bins);
  for (double s : samples) {
    if (s < 0.0 || s > top) continue;
    auto b = static_cast<std::size_t>(s / top * static_cast<double>(bins));
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

/// sum over bins of |empirical bin probability - Gamma bin probability|.
inline double l1_distance(const Histogram& h, const GammaParams& g) {
  double acc = 0.0;
  double prev = gamma_cdf(h.edges.front(), g);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double next = gamma_cdf(h.edges[i + 1], g);
    acc += std::abs(static_cast<double>(h.counts[i]) / static_cast<double>(h.total) - (next - prev));
    prev = next;
  }
  return acc;
}

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;
  /// standard error of the mean
  double mean_se = 0.0;
  std::size_t trials = 0;
  Histogram histogram;
};

inline MomentEstimate summarize(const std::vector<double>& samples) {
  MomentEstimate m;
  m.trials = samples.size();
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  m.mean = sum / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - m.mean) * (s - m.mean);
  m.variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
  m.mean_se = std::sqrt(m.variance / n);
  m.histogram = make_histogram(samples);
  return m;
}

inline MomentEstimate empirical_moments(const SystemParams& p, PowerVariable v, const TrialPlan& plan,
                                        Point eve = {}, const SimOptions& opt = {}) {
  return summarize(simulate_variable(p, v, plan, eve, opt));
}

}  // namespace socsec
