#pragma once

#include "stackmfg/blocks.hpp"
#include "stackmfg/grid.hpp"
#include "stackmfg/params.hpp"
#include "stackmfg/riccati.hpp"

namespace stackmfg {

/// Which form of the nonsymmetric leader Riccati equation to integrate /
/// measure. The linear (alpha, beta) flow satisfies the equation WITHOUT
/// the C Phi C noise term; the printed equation carries +C Phi C. The two
/// coincide whenever C0 = 0. Both are kept behind this switch as a
/// diagnostic; FlowCompatible is the default used by the pipeline.
enum class PhiVariant {
  FlowCompatible,   // dot Phi - Phi B2 + Phi A2 Phi - A1 Phi + B1 = 0
  WithNoiseTerm,    // ... + C Phi C = 0 (printed form)
  NegatedNoiseTerm  // ... - C Phi C = 0
};

struct LeaderDecoupling {
  Trajectory<Mat3> alpha;
  Trajectory<Mat3> beta;
  Trajectory<Mat3> Phi;       // alpha * beta^{-1}
  Trajectory<Vec3> Psi;
  Trajectory<double> beta_cond;
  double residual_sup{0.0};   // sup-node residual of the flow-compatible equation
};

/// Backward integration of the linear 6x3 system
///   d/dt (alpha; beta) = [[A1, -B1], [A2, -B2]] (alpha; beta)
/// from (0, I) at T. Phi(t) = alpha(t) beta(t)^{-1} at each node.
/// Pi must cover the substage times; pass it on the half-step refinement
/// of `grid`. Throws BetaSingularError when cond(beta) exceeds the cap.
LeaderDecoupling solve_phi_flow(const ModelParams& params, const Trajectory<double>& Pi,
                                const TimeGrid& grid, double beta_condition_max = 1e12);

/// Direct backward integration of the matrix Riccati equation from
/// Phi(T) = 0; cross-check oracle for solve_phi_flow.
Trajectory<Mat3> solve_phi_direct(const ModelParams& params, const Trajectory<double>& Pi,
                                  const TimeGrid& grid,
                                  PhiVariant variant = PhiVariant::FlowCompatible);

/// Backward linear offset equation
///   dot Psi + Phi A2 Psi + Phi f_vec - A1 Psi - f0_vec = 0,
///   Psi(T) = [xi0_mean, 0, 0].
/// Phi and Pi are interpolated at substage times; pass both on the
/// half-step refinement of `grid` for full accuracy.
Trajectory<Vec3> solve_Psi(const ModelParams& params, const Trajectory<Mat3>& Phi,
                           const Trajectory<double>& Pi, const TimeGrid& grid, double xi0_mean);

/// sup-node residual of the chosen equation variant for a given Phi
/// trajectory, with the time derivative estimated by finite differences
/// on the trajectory's own grid (4th-order stencil on interior nodes).
double phi_residual_sup(const ModelParams& params, const Trajectory<double>& Pi,
                        const Trajectory<Mat3>& Phi, PhiVariant variant);

/// sup-node ||Phi - Phi^T|| (informational: the solution is nonsymmetric).
double phi_asymmetry_sup(const Trajectory<Mat3>& Phi);

/// Full leader decoupling on `grid`: Pi on an internally refined grid,
/// the (alpha, beta) flow, Phi, Psi and diagnostics.
LeaderDecoupling solve_leader_decoupling(const ModelParams& params, const TimeGrid& grid,
                                         double beta_condition_max = 1e12);

}  // namespace stackmfg
