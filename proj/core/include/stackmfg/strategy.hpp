#pragma once

#include "stackmfg/grid.hpp"
#include "stackmfg/params.hpp"
#include "stackmfg/riccati.hpp"

namespace stackmfg {

/// Decentralized leader feedback
///   u0 = -R0^{-1} [B0 y0_bar + (G - B L / R) y_bar - Pi (G - B L / R) psi_bar].
/// Pure evaluation over the explicit state tuple; Pi(t) interpolated.
struct LeaderStrategy {
  const Trajectory<double>* Pi{nullptr};
  ModelParams params;

  double control(double t, double ybar0, double ybar, double psibar) const {
    const double g = params.g_eff();
    return -(params.B0 * ybar0 + g * ybar - Pi->eval(t) * g * psibar) / params.R0;
  }
};

/// Decentralized follower feedback
///   u_i = -R^{-1} [B (P x_i + K x_bar + phi_bar) + L u0].
struct FollowerStrategy {
  const Trajectory<double>* P{nullptr};
  const Trajectory<double>* K{nullptr};
  ModelParams params;

  double control(double t, double x_i, double xbar, double phibar, double u0) const {
    return control_at(P->eval(t), K->eval(t), x_i, xbar, phibar, u0);
  }

  /// Same formula with P(t), K(t) already looked up; lets the simulator
  /// reuse node values without re-interpolating.
  double control_at(double P_t, double K_t, double x_i, double xbar, double phibar,
                    double u0) const {
    return -(params.B * (P_t * x_i + K_t * xbar + phibar) + params.L * u0) / params.R;
  }
};

/// Closed-loop follower drift
///   (A - B R^{-1} B P) x_i - B R^{-1} B (K x_bar + phi_bar)
///     + F x0 + (G - B R^{-1} L) u0 + f.
/// Identical to the open-loop drift A x_i + B u_i + F x0 + G u0 + f when
/// u_i is the follower feedback above.
double follower_drift(const ModelParams& params, double P_t, double K_t, double x_i, double xbar,
                      double phibar, double x0, double u0);

/// B (P x_i + K x_bar + phi_bar) + R u_i + L u0; zero when u_i is the
/// follower feedback.
double stationarity_residual_follower(const ModelParams& params, double P_t, double K_t,
                                      double x_i, double xbar, double phibar, double u_i,
                                      double u0);

/// B0 y0_bar + R0 u0 + (G - B L / R) y_bar - Pi (G - B L / R) psi_bar;
/// zero when u0 is the leader feedback.
double stationarity_residual_leader(const ModelParams& params, double Pi_t, double ybar0,
                                    double ybar, double psibar, double u0);

}  // namespace stackmfg
