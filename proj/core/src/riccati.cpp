#include "stackmfg/riccati.hpp"

#include <algorithm>

namespace stackmfg {

Trajectory<double> solve_P(const ModelParams& p, const TimeGrid& grid, PopulationSize pop) {
  const double c = pop.shrink(p.Gamma);
  const double b2r = p.B * p.B / p.R;
  auto rhs = [&](double, double P) { return P * P * b2r - 2.0 * p.A * P - c * p.Q; };
  return integrate_backward_ode<double>(rhs, p.H, grid, "solve_P");
}

Trajectory<double> solve_K(const ModelParams& p, const Trajectory<double>& P,
                           const TimeGrid& grid, PopulationSize pop) {
  const double c = pop.shrink(p.Gamma);
  const double b2r = p.B * p.B / p.R;
  auto rhs = [&](double t, double K) {
    const double Pt = P.eval(t);
    return Pt * b2r * K + K * b2r * (Pt + K) - 2.0 * p.A * K + c * p.Q * p.Gamma;
  };
  return integrate_backward_ode<double>(rhs, 0.0, grid, "solve_K");
}

Trajectory<double> solve_Pi(const ModelParams& p, const TimeGrid& grid, PopulationSize pop) {
  const double c = pop.shrink(p.Gamma);
  const double b2r = p.B * p.B / p.R;
  auto rhs = [&](double, double Pi) {
    return Pi * Pi * b2r - 2.0 * p.A * Pi - c * p.Q * (1.0 - p.Gamma);
  };
  return integrate_backward_ode<double>(rhs, p.H, grid, "solve_Pi");
}

FollowerRiccati solve_follower_riccati(const ModelParams& p, const TimeGrid& grid,
                                       PopulationSize pop) {
  // Substage times of the K integration fall on half-nodes, so P is
  // integrated on the half-step refinement first.
  const TimeGrid fine = grid.refined(2);
  Trajectory<double> P_fine = solve_P(p, fine, pop);
  FollowerRiccati out;
  out.P = P_fine.restrict_to(grid);
  out.K = solve_K(p, P_fine, grid, pop);
  out.Pi = solve_Pi(p, grid, pop);
  out.pop = pop;
  return out;
}

double riccati_convergence_gap(const ModelParams& p, const TimeGrid& grid, std::size_t N) {
  FollowerRiccati fn = solve_follower_riccati(p, grid, PopulationSize::finite(N));
  FollowerRiccati lim = solve_follower_riccati(p, grid, PopulationSize::limit());
  double gp = 0.0, gk = 0.0;
  for (std::size_t k = 0; k <= grid.M; ++k) {
    gp = std::max(gp, std::abs(fn.P.at(k) - lim.P.at(k)));
    gk = std::max(gk, std::abs(fn.K.at(k) - lim.K.at(k)));
  }
  return gp + gk;
}

}  // namespace stackmfg
