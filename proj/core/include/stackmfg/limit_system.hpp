#pragma once

#include <span>

#include "stackmfg/decoupling.hpp"

namespace stackmfg {

/// Time-0 closure of the decoupled limit system. Y(0) depends on x0(0)
/// through the H0 weight while X(0) = Phi(0) Y(0) + Psi(0) returns x0(0);
/// solving the two simultaneously gives
///   x0_init = (Phi12(0) xi_bar + Psi1(0)) / (1 - H0 Phi11(0)).
struct FixedPoint0 {
  double x0_init{0.0};
  Vec3 Y0{Vec3::Zero()};   // [H0 * x0_init, xi_bar, 0]
  double denominator{1.0}; // 1 - H0 * Phi11(0)
};

FixedPoint0 resolve_fixed_point(const Mat3& Phi0, const Vec3& Psi0, const ModelParams& params,
                                double denominator_min = 1e-10);

/// One simulated path of the limit system along a common-noise path.
///   Y = [y0_bar, x_bar, psi_bar], X = [x0_bar, y_bar, phi_bar],
///   Z = -Phi C Y, read as [z0_bar, ., V_bar] (components 0 and 2; the
///   middle entry of the ansatz is only approximately zero).
/// X is defined through the transform X = Phi Y + Psi at every node.
struct LimitState {
  Trajectory<Vec3> Y;
  Trajectory<Vec3> X;
  Trajectory<Vec3> Z;
};

/// Euler-Maruyama forward recursion
///   Y_{k+1} = Y_k + (A2 X_k - B2 Y_k + f_vec) h - C Y_k dW0_k
/// with X_k = Phi(t_k) Y_k + Psi(t_k). w0_increments holds the M Brownian
/// increments of W0 (variance h each).
LimitState simulate_limit_path(const ModelParams& params, const LeaderDecoupling& decoupling,
                               const Trajectory<double>& Pi, const FixedPoint0& fp,
                               std::span<const double> w0_increments);

}  // namespace stackmfg
