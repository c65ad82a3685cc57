#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "socsec/outage.hpp"

using namespace socsec;

namespace {

MultiBoundOptions coarse() {
  MultiBoundOptions o;
  o.radial_nodes = 16;
  o.angular_nodes = 32;
  o.max_doublings = 3;
  o.rel_tol = 1e-3;
  return o;
}

SystemParams with_cq(double cq, double lambda_e = 0.0005) {
  SystemParams p;
  p.c2 = p.c1 - cq;
  p.lambda_e = lambda_e;
  return p;
}

}  // namespace

TEST(Cop, LimitsAndRange) {
  const SystemParams p;
  EXPECT_EQ(cop_closed(p, 0.0).value, 0.0);
  EXPECT_THROW(cop_closed(p, -1.0), DomainError);
  EXPECT_EQ(cop_closed(p.without_jammers(), 0.1).value, 0.0);
  SystemParams no_relays = p;
  no_relays.c1 = 1.0;
  no_relays.c2 = 0.99;
  EXPECT_EQ(cop_closed(no_relays, 0.1).value, 1.0);
  EXPECT_NEAR(cop_closed(p, 1e12).value, 1.0, 1e-3);
}

TEST(Cop, MatchesDgrOfTheFits) {
  const SystemParams p;
  const double beta = db_to_linear(-19.0);
  const OutageEstimate e = cop_closed(p, beta);
  EXPECT_EQ(e.method, OutageEstimate::Method::ClosedForm);
  EXPECT_EQ(e.ci_half_width, 0.0);
  EXPECT_DOUBLE_EQ(e.value, dgr_cdf(dest_signal_params(p), interference_params(p, p.destination()), beta));
}

TEST(Cop, NondecreasingInBeta) {
  const SystemParams p;
  double prev = 0.0;
  for (int db = -40; db <= 10; ++db) {
    const double v = cop_closed(p, db_to_linear(db)).value;
    EXPECT_GE(v, prev);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(Cop, LargerCqRaisesOutage) {
  for (int db : {-25, -15, -5})
    EXPECT_LT(cop_closed(with_cq(0.01), db_to_linear(db)).value, cop_closed(with_cq(0.05), db_to_linear(db)).value);
}

TEST(SopSingle, LimitsAndRange) {
  const SystemParams p;
  const Point z{45.0, 0.0};
  EXPECT_EQ(sop_single_closed(p, z, std::numeric_limits<double>::infinity()).value, 0.0);
  EXPECT_THROW(sop_single_closed(p, {3.0, 0.0}, 1.0), DomainError);
  EXPECT_THROW(sop_single_closed(p, z, -1.0), DomainError);
  EXPECT_EQ(sop_single_closed(p.without_jammers(), z, 1.0).value, 1.0);
  const OutageEstimate e = sop_single_closed(p, z, 1.0);
  EXPECT_GE(e.value, 0.0);
  EXPECT_LE(e.value, 1.0);
  EXPECT_NEAR(e.value, 1.0 - dgr_cdf(eve_signal_params(p, z), interference_params(p, z), 1.0), 1e-12);
}

TEST(SopSingle, NonincreasingInBetaE) {
  const SystemParams p;
  for (double r : {20.0, 60.0}) {
    double prev = 1.0;
    for (int db = -20; db <= 20; ++db) {
      const double v = sop_single_closed(p, {r, 0.0}, db_to_linear(db)).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(SopSingle, NonincreasingAlongTheAxisInsideTheJammerField) {
  const SystemParams p;
  double prev = 1.0;
  for (double r = 20.0; r <= 50.0; r += 5.0) {
    const double v = sop_single_closed(p, {r, 0.0}, 1.0).value;
    EXPECT_LE(v, prev) << r;
    prev = v;
  }
}

TEST(SopSingle, JammingNeverHurtsSecrecy) {
  const SystemParams p;
  for (double r : {20.0, 60.0})
    EXPECT_GE(sop_single_closed(p.without_jammers(), {r, 0.0}, 1.0).value, sop_single_closed(p, {r, 0.0}, 1.0).value);
}

TEST(SopSingle, OrderingsInTrustThresholds) {
  const SystemParams p;
  SystemParams high_c1 = p;
  high_c1.c1 = 0.9;
  high_c1.c2 = 0.89;
  for (double r : {20.0, 60.0}) {
    EXPECT_LT(sop_single_closed(high_c1, {r, 0.0}, 1.0).value, sop_single_closed(p, {r, 0.0}, 1.0).value);
    EXPECT_LT(sop_single_closed(with_cq(0.05), {r, 0.0}, 1.0).value, sop_single_closed(p, {r, 0.0}, 1.0).value);
  }
}

TEST(SopMulti, EmptyEavesdropperProcess) {
  const SystemParams p = with_cq(0.01, 0.0);
  const OutageEstimate e = sop_multi_upper(p, 1.0, 11, coarse());
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.method, OutageEstimate::Method::UpperBound);
  EXPECT_THROW(sop_multi_upper(p, 1.0, 0), DomainError);
}

TEST(SopMulti, NoJammersHasClosedForm) {
  // every relay-carrying eavesdropper is in outage: the bound is
  // 1 - exp(-lambda_e |annulus| P(1 <= N <= K))
  const SystemParams p = SystemParams{}.without_jammers();
  const double mean = p.lambda_r() * std::numbers::pi * p.L1 * p.L1;
  double mass = 0.0;
  for (int k = 1; k <= 20; ++k) mass += std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
  const double expected = 1.0 - std::exp(-p.lambda_e * area(p.jammer_annulus()) * mass);
  EXPECT_NEAR(sop_multi_upper(p, 1.0, 20, coarse()).value, expected, 1e-10);
}

TEST(SopMulti, CurveIsMonotoneInK) {
  const SystemParams p;
  const auto curve = sop_multi_upper_curve(p, 1.0, 20, coarse());
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_GE(curve[k].value, curve[k - 1].value);
  EXPECT_FALSE(curve[0].warnings.empty());
  EXPECT_TRUE(curve[19].warnings.empty()) << curve[19].meta.at("last_term_ratio");
  EXPECT_DOUBLE_EQ(sop_multi_upper(p, 1.0, 7, coarse()).value, sop_multi_upper_curve(p, 1.0, 7, coarse()).back().value);
}

TEST(SopMulti, OrderingsOnLambdaEAndCqGrid) {
  const double lambda_es[] = {0.00025, 0.0005, 0.001};
  const double cqs[] = {0.005, 0.01, 0.05};
  double v[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      v[a][b] = sop_multi_upper(with_cq(cqs[b], lambda_es[a]), 1.0, 11, coarse()).value;
      EXPECT_GE(v[a][b], 0.0);
      EXPECT_LE(v[a][b], 1.0);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a + 1 < 3) {
        EXPECT_LE(v[a][b], v[a + 1][b]) << "lambda_e ordering";
      }
      if (b + 1 < 3) {
        EXPECT_GE(v[a][b], v[a][b + 1]) << "Cq ordering";
      }
    }
}

TEST(SopMulti, DeterministicAcrossWorkers) {
  const SystemParams p;
  MultiBoundOptions one = coarse();
  one.workers = 1;
  MultiBoundOptions three = coarse();
  three.workers = 3;
  EXPECT_EQ(sop_multi_upper(p, 2.0, 11, one).value, sop_multi_upper(p, 2.0, 11, three).value);
}

TEST(SopMulti, SampledRelaySumIsAValidProbability) {
  MultiBoundOptions o = coarse();
  o.relay_sum = RelaySumMode::Sampled;
  const OutageEstimate e = sop_multi_upper(SystemParams{}, 1.0, 11, o);
  EXPECT_GT(e.value, 0.0);
  EXPECT_LT(e.value, 1.0);
  EXPECT_FALSE(e.warnings.empty());
  // same draws, same answer
  EXPECT_EQ(e.value, sop_multi_upper(SystemParams{}, 1.0, 11, o).value);
  // and close to the conditional-mean bound
  EXPECT_NEAR(e.value, sop_multi_upper(SystemParams{}, 1.0, 11, coarse()).value, 0.1);
}

TEST(SopMulti, ExactJammerDomainIsClose) {
  MultiBoundOptions o = coarse();
  const double flab = sop_multi_upper(SystemParams{}, 1.0, 11, o).value;
  o.model.jammer_domain = JammerDomain::Exact;
  const double exact = sop_multi_upper(SystemParams{}, 1.0, 11, o).value;
  // the exact domain has slightly more jammers, hence a lower bound value
  EXPECT_LE(exact, flab);
  EXPECT_NEAR(exact, flab, 0.01);
}
