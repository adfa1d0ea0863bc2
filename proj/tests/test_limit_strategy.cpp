#include <cmath>
#include <vector>

#include <doctest.h>

#include "stackmfg/limit_system.hpp"
#include "stackmfg/strategy.hpp"

using namespace stackmfg;

TEST_CASE("time-0 closure is self-consistent") {
  const ModelParams p;
  const SimConfig c{TimeGrid(p.T, 400)};
  const LeaderDecoupling dec = solve_leader_decoupling(p, c.grid);
  const FixedPoint0 fp = resolve_fixed_point(dec.Phi.at(0), dec.Psi.at(0), p);

  // Y(0) = [H0 x0, xi_bar, 0] and X(0) = Phi(0) Y(0) + Psi(0) must return x0
  CHECK(fp.Y0(0) == p.H0 * fp.x0_init);
  CHECK(fp.Y0(1) == p.xi_bar());
  CHECK(fp.Y0(2) == 0.0);
  const Vec3 X0 = dec.Phi.at(0) * fp.Y0 + dec.Psi.at(0);
  CHECK(X0(0) == doctest::Approx(fp.x0_init).epsilon(1e-12));
  CHECK(fp.denominator == 1.0);  // H0 = 0 on the reference set
}

TEST_CASE("nontrivial terminal weight enters the closure") {
  ModelParams p;
  p.H0 = 0.8;
  const TimeGrid grid(p.T, 400);
  const LeaderDecoupling dec = solve_leader_decoupling(p, grid);
  const FixedPoint0 fp = resolve_fixed_point(dec.Phi.at(0), dec.Psi.at(0), p);
  CHECK(fp.denominator == doctest::Approx(1.0 - p.H0 * dec.Phi.at(0)(0, 0)));
  const Vec3 X0 = dec.Phi.at(0) * fp.Y0 + dec.Psi.at(0);
  CHECK(X0(0) == doctest::Approx(fp.x0_init).epsilon(1e-12));
}

TEST_CASE("degenerate closure raises the dedicated error") {
  ModelParams p;
  p.H0 = 1.0;
  Mat3 Phi0 = Mat3::Zero();
  Phi0(0, 0) = 1.0;  // denominator 1 - H0 * Phi11 = 0
  CHECK_THROWS_AS(resolve_fixed_point(Phi0, Vec3::Zero(), p), DegenerateFixedPointError);
}

TEST_CASE("limit path keeps the affine and noise identities at every node") {
  const ModelParams p;
  const TimeGrid grid(p.T, 200);
  const LeaderDecoupling dec = solve_leader_decoupling(p, grid);
  const Trajectory<double> Pi = solve_Pi(p, grid, PopulationSize::limit());
  const FixedPoint0 fp = resolve_fixed_point(dec.Phi.at(0), dec.Psi.at(0), p);

  std::vector<double> dw(grid.M);
  for (std::size_t k = 0; k < grid.M; ++k) dw[k] = 0.01 * std::sin(0.37 * double(k));
  const LimitState s = simulate_limit_path(p, dec, Pi, fp, dw);

  const BlockMatrices m = assemble_blocks(p, 1.0);  // C does not depend on Pi
  for (std::size_t k = 0; k <= grid.M; k += 20) {
    const Vec3 X_expected = dec.Phi.at(k) * s.Y.at(k) + dec.Psi.at(k);
    CHECK(detail::max_abs(s.X.at(k) - X_expected) <= 1e-12);
    const Vec3 Z_expected = -dec.Phi.at(k) * (m.C * s.Y.at(k));
    CHECK(detail::max_abs(s.Z.at(k) - Z_expected) <= 1e-12);
  }

  // boundary structure: psi_bar(0) = 0; at T the transform collapses to Psi(T)
  CHECK(s.Y.at(0)(2) == 0.0);
  CHECK(s.Y.at(0)(1) == p.xi_bar());
  CHECK(s.X.at(grid.M)(0) == doctest::Approx(p.xi0_mean()).epsilon(1e-12));
  CHECK(s.X.at(grid.M)(1) == 0.0);
  CHECK(s.X.at(grid.M)(2) == 0.0);
}

TEST_CASE("strategy evaluations satisfy their first-order conditions") {
  ModelParams p;
  p.R = 1.7; p.R0 = 0.8; p.B = 1.1; p.B0 = -0.6; p.L = 0.4; p.G = 0.9;
  Trajectory<double> P(TimeGrid(1.0, 1)), K(TimeGrid(1.0, 1)), Pi(TimeGrid(1.0, 1));
  P.at(0) = 1.3; P.at(1) = 0.9;
  K.at(0) = -0.2; K.at(1) = 0.1;
  Pi.at(0) = 1.1; Pi.at(1) = 1.0;

  const FollowerStrategy fs{&P, &K, p};
  const LeaderStrategy ls{&Pi, p};
  const double t = 0.35, x_i = 2.1, xbar = -0.7, phibar = 0.5;
  const double ybar0 = 1.2, ybar = -0.9, psibar = 0.3;

  const double u0 = ls.control(t, ybar0, ybar, psibar);
  const double u_i = fs.control(t, x_i, xbar, phibar, u0);
  CHECK(std::abs(stationarity_residual_leader(p, Pi.eval(t), ybar0, ybar, psibar, u0)) <= 1e-12);
  CHECK(std::abs(stationarity_residual_follower(p, P.eval(t), K.eval(t), x_i, xbar, phibar, u_i,
                                                u0)) <= 1e-12);
}

TEST_CASE("closed-loop drift equals open-loop drift under the feedback") {
  ModelParams p;
  p.A = -0.4; p.B = 1.2; p.R = 1.5; p.F = 0.7; p.G = 0.9; p.L = 0.3; p.f = -0.2;
  const double P_t = 1.1, K_t = -0.3, x_i = 0.8, xbar = 1.9, phibar = -0.6;
  const double x0 = 0.4, u0 = -1.3;
  const FollowerStrategy fs{nullptr, nullptr, p};
  const double u_i = fs.control_at(P_t, K_t, x_i, xbar, phibar, u0);
  const double open_loop = p.A * x_i + p.B * u_i + p.F * x0 + p.G * u0 + p.f;
  CHECK(follower_drift(p, P_t, K_t, x_i, xbar, phibar, x0, u0) ==
        doctest::Approx(open_loop).epsilon(1e-13));
}
