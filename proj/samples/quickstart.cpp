// Closed forms next to a small simulation at the default parameters.

#include <cstdio>

#include "socsec/socsec.hpp"

int main() {
  using namespace socsec;
  const SystemParams p;
  const TrialPlan plan{20000, 1, 0};

  std::printf("relay density %.4g, jammer density %.4g\n", p.lambda_r(), p.lambda_j());
  const GammaParams t = dest_signal_params(p);
  const GammaParams i = interference_params(p, p.destination());
  std::printf("T(y) ~ Gamma(%.4g, %.4g), I(y) ~ Gamma(%.4g, %.4g)\n", t.shape, t.scale, i.shape, i.scale);

  std::printf("\n%8s %10s %10s\n", "beta dB", "COP", "COP (MC)");
  for (double db : {-30.0, -20.0, -10.0, 0.0}) {
    const double beta = db_to_linear(db);
    std::printf("%8.1f %10.4f %10.4f\n", db, cop_closed(p, beta).value, estimate_cop(p, beta, plan).value);
  }

  const Point eve{45.0, 0.0};
  std::printf("\nsingle eavesdropper at (45, 0), beta_e = 0 dB: closed %.4f, MC %.4f\n",
              sop_single_closed(p, eve, 1.0).value, estimate_sop_single(p, eve, 1.0, plan).value);

  MultiBoundOptions coarse;
  coarse.radial_nodes = 16;
  coarse.angular_nodes = 32;
  std::printf("multi-eavesdropper bound (K = 11): %.4f, MC %.4f\n", sop_multi_upper(p, 1.0, 11, coarse).value,
              estimate_sop_multi(p, 1.0, plan).value);
}
