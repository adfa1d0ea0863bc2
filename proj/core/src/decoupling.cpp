#include "stackmfg/decoupling.hpp"

#include <algorithm>
#include <cmath>

namespace stackmfg {

namespace {

using FlowState = Eigen::Matrix<double, 6, 3>;

double cond3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  const auto& s = svd.singularValues();
  if (s(2) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(2);
}

double noise_sign(PhiVariant v) {
  switch (v) {
    case PhiVariant::FlowCompatible: return 0.0;
    case PhiVariant::WithNoiseTerm: return 1.0;
    case PhiVariant::NegatedNoiseTerm: return -1.0;
  }
  return 0.0;
}

}  // namespace

LeaderDecoupling solve_phi_flow(const ModelParams& p, const Trajectory<double>& Pi,
                                const TimeGrid& grid, double beta_condition_max) {
  auto rhs = [&](double t, const FlowState& s) -> FlowState {
    const BlockMatrices m = assemble_blocks(p, Pi.eval(t));
    const Mat3 al = s.topRows<3>();
    const Mat3 be = s.bottomRows<3>();
    FlowState out;
    out.topRows<3>() = m.A1 * al - m.B1 * be;
    out.bottomRows<3>() = m.A2 * al - m.B2 * be;
    return out;
  };
  FlowState terminal;
  terminal.topRows<3>() = Mat3::Zero();
  terminal.bottomRows<3>() = Mat3::Identity();
  Trajectory<FlowState> flow =
      integrate_backward_ode<FlowState>(rhs, terminal, grid, "solve_phi_flow");

  LeaderDecoupling dec;
  dec.alpha = Trajectory<Mat3>(grid);
  dec.beta = Trajectory<Mat3>(grid);
  dec.Phi = Trajectory<Mat3>(grid);
  dec.beta_cond = Trajectory<double>(grid);
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const Mat3 al = flow.at(k).topRows<3>();
    const Mat3 be = flow.at(k).bottomRows<3>();
    dec.alpha.at(k) = al;
    dec.beta.at(k) = be;
    const double c = cond3(be);
    dec.beta_cond.at(k) = c;
    if (!(c <= beta_condition_max)) throw BetaSingularError(k, c);
    // Phi^T = beta^{-T} alpha^T via a partial-pivoting solve
    dec.Phi.at(k) = be.transpose().partialPivLu().solve(al.transpose()).transpose();
  }
  dec.Phi.at(grid.M) = Mat3::Zero();  // alpha(T) = 0 exactly
  return dec;
}

Trajectory<Mat3> solve_phi_direct(const ModelParams& p, const Trajectory<double>& Pi,
                                  const TimeGrid& grid, PhiVariant variant) {
  const double sgn = noise_sign(variant);
  auto rhs = [&](double t, const Mat3& Phi) -> Mat3 {
    const BlockMatrices m = assemble_blocks(p, Pi.eval(t));
    Mat3 out = Phi * m.B2 - Phi * m.A2 * Phi + m.A1 * Phi - m.B1;
    if (sgn != 0.0) out -= sgn * (m.C * Phi * m.C);
    return out;
  };
  return integrate_backward_ode<Mat3>(rhs, Mat3::Zero(), grid, "solve_phi_direct");
}

Trajectory<Vec3> solve_Psi(const ModelParams& p, const Trajectory<Mat3>& Phi,
                           const Trajectory<double>& Pi, const TimeGrid& grid, double xi0_mean) {
  auto rhs = [&](double t, const Vec3& psi) -> Vec3 {
    const BlockMatrices m = assemble_blocks(p, Pi.eval(t));
    const Mat3 Ph = Phi.eval(t);
    return m.A1 * psi - Ph * (m.A2 * psi) - Ph * m.f_vec + m.f0_vec;
  };
  const Vec3 terminal(xi0_mean, 0.0, 0.0);
  return integrate_backward_ode<Vec3>(rhs, terminal, grid, "solve_Psi");
}

double phi_residual_sup(const ModelParams& p, const Trajectory<double>& Pi,
                        const Trajectory<Mat3>& Phi, PhiVariant variant) {
  const TimeGrid& grid = Phi.grid();
  if (grid.M < 4) return 0.0;
  const double h = grid.step();
  const double sgn = noise_sign(variant);
  double sup = 0.0;
  for (std::size_t k = 2; k + 2 <= grid.M; ++k) {
    // 4th-order central stencil for dPhi/dt
    const Mat3 dPhi =
        (-Phi.at(k + 2) + 8.0 * Phi.at(k + 1) - 8.0 * Phi.at(k - 1) + Phi.at(k - 2)) / (12.0 * h);
    const BlockMatrices m = assemble_blocks(p, Pi.eval(grid.node(k)));
    const Mat3& Ph = Phi.at(k);
    Mat3 res = dPhi - Ph * m.B2 + Ph * m.A2 * Ph - m.A1 * Ph + m.B1;
    if (sgn != 0.0) res += sgn * (m.C * Ph * m.C);
    sup = std::max(sup, res.cwiseAbs().maxCoeff());
  }
  return sup;
}

double phi_asymmetry_sup(const Trajectory<Mat3>& Phi) {
  double sup = 0.0;
  for (std::size_t k = 0; k < Phi.size(); ++k) {
    const Mat3 d = Phi.at(k) - Phi.at(k).transpose();
    sup = std::max(sup, d.cwiseAbs().maxCoeff());
  }
  return sup;
}

LeaderDecoupling solve_leader_decoupling(const ModelParams& p, const TimeGrid& grid,
                                         double beta_condition_max) {
  // Pi on quarter steps so both the flow (half-step grid) and its own
  // substages see exact values.
  const TimeGrid fine = grid.refined(2);
  const Trajectory<double> Pi4 = solve_Pi(p, grid.refined(4), PopulationSize::limit());
  const Trajectory<double> Pi2 = Pi4.restrict_to(fine);
  const Trajectory<double> Pi1 = Pi4.restrict_to(grid);

  LeaderDecoupling fine_dec = solve_phi_flow(p, Pi4, fine, beta_condition_max);

  LeaderDecoupling dec;
  dec.alpha = fine_dec.alpha.restrict_to(grid);
  dec.beta = fine_dec.beta.restrict_to(grid);
  dec.Phi = fine_dec.Phi.restrict_to(grid);
  dec.beta_cond = fine_dec.beta_cond.restrict_to(grid);
  dec.Psi = solve_Psi(p, fine_dec.Phi, Pi2, grid, p.xi0_mean());
  dec.residual_sup = phi_residual_sup(p, Pi1, dec.Phi, PhiVariant::FlowCompatible);
  return dec;
}

}  // namespace stackmfg
