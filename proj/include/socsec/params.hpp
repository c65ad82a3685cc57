#pragma once

#include <cmath>
#include <string>

#include "socsec/errors.hpp"
#include "socsec/geometry.hpp"

namespace socsec {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// Scenario constants. Powers are linear milliwatts; lengths are meters.
///
/// Legitimate nodes form a PPP of density `lambda` with i.i.d. uniform trust
/// marks. Marks in [c1, 1] inside Disk(o, L1) are relays; marks in [c2, c1)
/// inside Annulus(L1, L2) are jammers, silenced within LG of the destination
/// at (d, 0). Eavesdroppers form an independent PPP of density `lambda_e` on
/// the same annulus. c2 == c1 is the no-jammer (NJA) baseline.
struct SystemParams {
  double lambda = 0.2;
  double c1 = 0.8;
  double c2 = 0.79;
  double L1 = 6.0;
  double L2 = 100.0;
  double LG = 5.0;
  double d = 60.0;
  double alpha = 4.0;
  double P_R = dbm_to_mw(10.0);
  double P_j = dbm_to_mw(1.0);
  double lambda_e = 0.0005;
  /// Distances below this are clamped in every path-loss evaluation.
  double guard = 0.5;

  [[nodiscard]] double lambda_r() const { return (1.0 - c1) * lambda; }
  [[nodiscard]] double lambda_j() const { return (c1 - c2) * lambda; }
  [[nodiscard]] double cq() const { return c1 - c2; }
  [[nodiscard]] Point destination() const { return {d, 0.0}; }

  [[nodiscard]] Disk relay_region() const { return {{}, L1}; }
  [[nodiscard]] Annulus jammer_annulus() const { return {{}, L1, L2}; }
  [[nodiscard]] Disk protected_zone() const { return {destination(), LG}; }
  [[nodiscard]] PuncturedAnnulus jammer_domain() const { return {jammer_annulus(), protected_zone()}; }
  [[nodiscard]] DbarDecomposition jammer_decomposition() const { return dbar_decompose(L1, L2, d, LG); }

  /// Same scenario without jammer assistance.
  [[nodiscard]] SystemParams without_jammers() const {
    SystemParams p = *this;
    p.c2 = p.c1;
    return p;
  }
};

inline void validate(const SystemParams& p) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid SystemParams: " + what); };
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) fail("lambda must be >= 0");
  if (!(p.c1 > 0.0 && p.c1 <= 1.0)) fail("c1 must lie in (0, 1]");
  if (!(p.c2 >= 0.0 && p.c2 <= p.c1)) fail("c2 must lie in [0, c1]");
  if (!(p.L1 > 0.0)) fail("L1 must be positive");
  if (!(p.LG > 0.0)) fail("LG must be positive");
  if (!(p.L1 < p.d - p.LG)) fail("protected zone must not reach the relay disk (L1 < d - LG)");
  if (!(p.d + p.LG < p.L2) || !std::isfinite(p.L2)) fail("protected zone must lie inside the annulus (d + LG < L2)");
  if (!(p.alpha > 2.0)) fail("alpha must exceed 2");
  if (!(p.P_R > 0.0) || !(p.P_j > 0.0)) fail("powers must be positive");
  if (!(p.lambda_e >= 0.0)) fail("lambda_e must be >= 0");
  if (!(p.guard >= 0.0)) fail("guard must be >= 0");
}

}  // namespace socsec
