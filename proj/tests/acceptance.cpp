// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs a single
// criterion (ctest registers each separately). Exit status is nonzero when
// any selected criterion fails.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socsec/experiment.hpp"
#include "socsec/socsec.hpp"

using namespace socsec;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr std::size_t kTrials = 100000;

// 1. Gamma fit of T(y) and I(y) against 1e5-trial histograms
Verdict gamma_fit_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p;
  const TrialPlan plan{kTrials, 1, 0};
  const Histogram ty = make_histogram(simulate_variable(p, PowerVariable::Ty, plan));
  const Histogram iy = make_histogram(simulate_variable(p, PowerVariable::Iy, plan));
  const double l1_ty = l1_distance(ty, dest_signal_params(p));
  const double l1_iy = l1_distance(iy, interference_params(p, p.destination()));
  ModelOptions printed;
  printed.dest_signal = DestSignalModel::Printed;
  ModelOptions exact;
  exact.jammer_domain = JammerDomain::Exact;
  const double l1_ty_printed = l1_distance(ty, dest_signal_params(p, printed));
  const double l1_iy_exact = l1_distance(iy, interference_params(p, p.destination(), exact));
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = l1_ty <= 0.15 && l1_iy <= 0.15 && elapsed <= 120.0;
  v.detail = "L1(Ty) = " + fmt(l1_ty) + ", L1(Iy) = " + fmt(l1_iy) + " (limit 0.15); printed Ty fit " +
             fmt(l1_ty_printed) + ", exact-domain Iy fit " + fmt(l1_iy_exact) + "; " + fmt(elapsed, 3) + " s";
  return v;
}

// 2. COP closed form vs simulation on 21 points
Verdict cop_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p;
  std::vector<double> betas;
  for (int k = 0; k <= 20; ++k) betas.push_back(db_to_linear(-30.0 + 1.5 * k));
  const auto mc = estimate_cop_curve(p, betas, {kTrials, 1, 0});
  double worst = 0.0;
  double at = 0.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double gap = std::abs(cop_closed(p, betas[k]).value - mc[k].value);
    if (gap > worst) {
      worst = gap;
      at = linear_to_db(betas[k]);
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 0.1 && elapsed <= 300.0,
          "max |closed - MC| = " + fmt(worst) + " at " + fmt(at) + " dB (limit 0.1); " + fmt(elapsed, 3) + " s"};
}

// 3. single-eavesdropper SOP vs distance, eavesdropper on the +x axis
Verdict sop_agreement() {
  const SystemParams p;
  double worst = 0.0;
  double at = 0.0;
  for (double r = 20.0; r <= 100.0 + 1e-9; r += 5.0) {
    const Point z{r, 0.0};
    const double closed = sop_single_closed(p, z, 1.0).value;
    const double mc = estimate_sop_single(p, z, 1.0, {kTrials, 1, 0}).value;
    if (std::abs(closed - mc) > worst) {
      worst = std::abs(closed - mc);
      at = r;
    }
  }
  return {worst <= 0.1, "max |closed - MC| = " + fmt(worst) + " at |z| = " + fmt(at) + " m (limit 0.1)"};
}

// 4. truncation of the multi-eavesdropper bound
Verdict truncation() {
  const SystemParams p;
  const auto curve = sop_multi_upper_curve(p, 1.0, 20);
  bool monotone = true;
  for (std::size_t k = 1; k < curve.size(); ++k) monotone &= curve[k].value >= curve[k - 1].value;
  const double gap = std::abs(curve[10].value - curve[14].value);
  return {gap <= 1e-3 && monotone, "value(11) = " + fmt(curve[10].value, 7) + ", value(15) = " +
                                       fmt(curve[14].value, 7) + ", gap " + fmt(gap) + " (limit 1e-3); monotone " +
                                       (monotone ? "yes" : "no") + "; value(20) = " + fmt(curve[19].value, 7)};
}

// 5. bound dominates the simulated multi-eavesdropper SOP
Verdict bound_ordering() {
  const SystemParams p;
  std::vector<double> betas;
  for (int k = 0; k <= 8; ++k) betas.push_back(db_to_linear(-10.0 + 2.5 * k));
  const auto mc = estimate_sop_multi_curve(p, betas, {kTrials, 1, 0});
  bool ok = true;
  double slack = std::numeric_limits<double>::infinity();
  std::string worst;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double bound = sop_multi_upper(p, betas[k], 11).value;
    const double margin = bound - (mc[k].value - mc[k].ci_half_width);
    ok &= margin >= 0.0;
    if (margin < slack) {
      slack = margin;
      worst = fmt(linear_to_db(betas[k])) + " dB (bound " + fmt(bound) + ", MC " + fmt(mc[k].value) + ")";
    }
  }
  return {ok, "min(bound - (MC - CI)) = " + fmt(slack) + " at " + worst};
}

// 6. DGR against nested quadrature and the exponential-ratio identity
double dgr_oracle(const GammaParams& t, const GammaParams& i, double beta) {
  boost::math::quadrature::tanh_sinh<double> outer;
  boost::math::quadrature::tanh_sinh<double> inner;
  const double ratio = beta * i.scale / t.scale;
  auto density = [](double shape) {
    return [shape](double u) { return std::exp((shape - 1.0) * std::log(u) - u - std::lgamma(shape)); };
  };
  auto ft = density(t.shape);
  auto fi = density(i.shape);
  auto f = [&](double v) {
    const double top = ratio * v;
    if (!(top > 0.0)) return 0.0;
    return fi(v) * inner.integrate(ft, 0.0, top, 1e-14);
  };
  return outer.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

Verdict dgr_correctness() {
  std::mt19937_64 eng(20240601);
  std::uniform_real_distribution<double> shape(0.25, 6.0);
  std::uniform_real_distribution<double> logscale(-5.0, 1.0);
  std::uniform_real_distribution<double> logbeta(-2.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const GammaParams t{shape(eng), std::pow(10.0, logscale(eng))};
    const GammaParams i{shape(eng), std::pow(10.0, logscale(eng))};
    const double b = std::pow(10.0, logbeta(eng));
    worst = std::max(worst, std::abs(dgr_cdf(t, i, b) - dgr_oracle(t, i, b)));
  }
  double worst_exp = 0.0;
  for (double tt : {0.01, 1.0, 30.0})
    for (double ti : {0.02, 1.0, 50.0})
      for (double b : {1e-3, 0.3, 1.0, 10.0, 1e3}) {
        const double q = b * ti / tt;
        worst_exp = std::max(worst_exp, std::abs(dgr_cdf({1.0, tt}, {1.0, ti}, b) - q / (q + 1.0)));
      }
  return {worst <= 1e-8 && worst_exp <= 1e-10,
          "max |dgr - quadrature| = " + fmt(worst, 3) + " (limit 1e-8), exponential identity " + fmt(worst_exp, 3) +
              " (limit 1e-10)"};
}

// 7. special functions
Verdict special_functions() {
  double worst_f = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double x = 0.1 * k;
    worst_f = std::max(worst_f, std::abs(hyp2f1(1.0, 1.0, 2.0, x) + std::log1p(-x) / x));
    worst_f = std::max(worst_f, std::abs(hyp2f1(1.0, 2.0, 2.0, x) - 1.0 / (1.0 - x)));
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst_g = 0.0;
  for (double nu : {0.25, 0.5, 1.0, 2.3, 7.5, 30.0})
    for (double x : {0.05, 0.7, 3.0, 12.0, 40.0}) {
      auto f = [nu](double t) { return std::exp((nu - 1.0) * std::log(t) - t - std::lgamma(nu)); };
      const double ref = ts.integrate(f, x, std::numeric_limits<double>::infinity(), 1e-14);
      worst_g = std::max(worst_g, std::abs(reg_upper_gamma(nu, x) - ref));
    }
  return {worst_f <= 1e-10 && worst_g <= 1e-9,
          "2F1 identities max error " + fmt(worst_f, 3) + " (limit 1e-10), upper incomplete gamma " + fmt(worst_g, 3) +
              " (limit 1e-9)"};
}

// 8. PPP counts and Campbell means over 1e4 draws
Verdict ppp_campbell() {
  const SystemParams p;
  struct Case {
    std::string name;
    Region region;
    double density;
    Point pole;
  };
  const DbarDecomposition dbar = p.jammer_decomposition();
  const std::vector<Case> cases{
      {"relay disk", p.relay_region(), p.lambda_r(), p.destination()},
      {"annulus", p.jammer_annulus(), 0.01, Point{-30.0, 10.0}},
      {"sector", dbar.pieces[2], 0.01, p.destination()},
  };
  const int draws = 10000;
  const double s = 2.0;
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const double mean = c.density * area(c.region);
    const double campbell = c.density * radial_integral(c.region, c.pole, s, p.guard);
    std::vector<double> counts(draws), sums(draws);
    for (int t = 0; t < draws; ++t) {
      Stream rng(808, t);
      const auto pts = sample_ppp(c.region, c.density, rng);
      counts[t] = static_cast<double>(pts.size());
      double acc = 0.0;
      for (const Point& x : pts) acc += std::pow(std::max(distance(x, c.pole), p.guard), -s);
      sums[t] = acc;
    }
    const MomentEstimate n = summarize(counts);
    const MomentEstimate f = summarize(sums);
    // SE of the sample variance from the fourth central moment
    double m4 = 0.0;
    for (double x : counts) m4 += std::pow(x - n.mean, 4);
    m4 /= draws;
    const double var_se = std::sqrt((m4 - n.variance * n.variance) / draws);
    const double zc = (n.mean - mean) / n.mean_se;
    const double zv = (n.variance - mean) / var_se;
    const double zf = (f.mean - campbell) / f.mean_se;
    ok &= std::abs(zc) <= 3.0 && std::abs(zv) <= 3.0 && std::abs(zf) <= 3.0;
    detail += c.name + " z(count) " + fmt(zc, 2) + " z(var) " + fmt(zv, 2) + " z(sum) " + fmt(zf, 2) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 9. orderings, each a CI-separated pair of simulations
Verdict orderings() {
  const TrialPlan plan{kTrials, 9, 0};
  const SystemParams base;
  struct Pair {
    std::string name;
    OutageEstimate high;  // expected to be the larger value
    OutageEstimate low;
  };
  const Point near{20.0, 0.0};
  const Point far{60.0, 0.0};
  SystemParams c1_high = base;
  c1_high.c1 = 0.9;
  c1_high.c2 = 0.89;
  SystemParams cq_high = base;
  cq_high.c2 = base.c1 - 0.05;
  std::vector<Pair> pairs;
  for (const Point& z : {near, far}) {
    const std::string at = " at |z| = " + fmt(z.x) + " m";
    const OutageEstimate jammed = estimate_sop_single(base, z, 1.0, plan);
    pairs.push_back({"SOP decreasing in C1" + at, jammed, estimate_sop_single(c1_high, z, 1.0, plan)});
    pairs.push_back({"SOP decreasing in Cq" + at, jammed, estimate_sop_single(cq_high, z, 1.0, plan)});
    pairs.push_back({"NJA above jammed SOP" + at, estimate_sop_single(base.without_jammers(), z, 1.0, plan), jammed});
  }
  pairs.push_back({"SOP decreasing in |z|", estimate_sop_single(base, near, 1.0, plan),
                   estimate_sop_single(base, far, 1.0, plan)});
  const double beta = db_to_linear(-10.0);
  pairs.push_back({"COP increasing in Cq", estimate_cop(cq_high, beta, plan), estimate_cop(base, beta, plan)});
  bool ok = true;
  std::string detail;
  for (const Pair& q : pairs) {
    const bool separated = q.high.value - q.high.ci_half_width > q.low.value + q.low.ci_half_width;
    ok &= separated;
    detail += q.name + ": " + fmt(q.high.value) + " vs " + fmt(q.low.value) + (separated ? " ok" : " NOT separated") + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 10. every preset is byte-identical across worker counts
Verdict determinism() {
  bool ok = true;
  std::string detail;
  for (const Preset& preset : presets()) {
    ExperimentConfig c = preset.config;
    c.trials = 20000;
    c.seed = 7;
    // the bound presets over beta_e are checked on their simulation column;
    // fig7 exercises the parallel bound integration
    if (c.name == "fig8" || c.name == "fig10") c.mode = RunMode::MonteCarlo;
    if (c.name == "fig7") c.mode = RunMode::Closed;
    std::vector<std::string> outputs;
    for (unsigned w : {1u, 2u, 8u}) {
      c.workers = w;
      std::ostringstream os;
      write_csv(os, c, run(c));
      outputs.push_back(os.str());
    }
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    ok &= same;
    detail += c.name + (same ? " ok" : " DIFFERS") + ", ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"gamma fit fidelity", gamma_fit_fidelity},
      {"COP agreement", cop_agreement},
      {"single-eavesdropper SOP agreement", sop_agreement},
      {"bound truncation in K", truncation},
      {"bound above simulated multi-eavesdropper SOP", bound_ordering},
      {"DGR correctness", dgr_correctness},
      {"special functions", special_functions},
      {"PPP counts and Campbell means", ppp_campbell},
      {"monotonicity orderings", orderings},
      {"preset determinism across workers", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
