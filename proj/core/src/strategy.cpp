#include "stackmfg/strategy.hpp"

namespace stackmfg {

double follower_drift(const ModelParams& p, double P_t, double K_t, double x_i, double xbar,
                      double phibar, double x0, double u0) {
  const double b2r = p.B * p.B / p.R;
  return (p.A - b2r * P_t) * x_i - b2r * (K_t * xbar + phibar) + p.F * x0 + p.g_eff() * u0 + p.f;
}

double stationarity_residual_follower(const ModelParams& p, double P_t, double K_t, double x_i,
                                      double xbar, double phibar, double u_i, double u0) {
  return p.B * (P_t * x_i + K_t * xbar + phibar) + p.R * u_i + p.L * u0;
}

double stationarity_residual_leader(const ModelParams& p, double Pi_t, double ybar0, double ybar,
                                    double psibar, double u0) {
  const double g = p.g_eff();
  return p.B0 * ybar0 + p.R0 * u0 + g * ybar - Pi_t * g * psibar;
}

}  // namespace stackmfg
