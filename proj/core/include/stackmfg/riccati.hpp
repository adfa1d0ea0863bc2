#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "stackmfg/errors.hpp"
#include "stackmfg/grid.hpp"
#include "stackmfg/params.hpp"

namespace stackmfg {

namespace detail {

inline double max_abs(double v) { return std::abs(v); }

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

constexpr double kBlowUpThreshold = 1e100;

template <typename V>
void guard(const V& v, std::size_t node, const char* solver) {
  const double m = max_abs(v);
  if (!std::isfinite(m) || m > kBlowUpThreshold)
    throw BlowUpError(solver, node);
}

}  // namespace detail

/// Classical 4th-order one-step integration of dy/dt = rhs(t, y), filled
/// backward from the terminal value at t_M down to t_0. The value at t_M
/// is the terminal datum exactly. rhs is evaluated at step midpoints;
/// time-varying coefficients must be defined there.
template <typename V, typename Rhs>
Trajectory<V> integrate_backward_ode(Rhs&& rhs, const V& terminal, const TimeGrid& grid,
                                     const char* solver_name = "integrate_backward_ode") {
  std::vector<V> values(grid.size(), terminal);
  const double h = grid.step();
  values[grid.M] = terminal;
  for (std::size_t k = grid.M; k-- > 0;) {
    const double t = grid.node(k + 1);
    const V& y = values[k + 1];
    const V k1 = rhs(t, y);
    const V k2 = rhs(t - 0.5 * h, V(y - 0.5 * h * k1));
    const V k3 = rhs(t - 0.5 * h, V(y - 0.5 * h * k2));
    const V k4 = rhs(t - h, V(y - h * k3));
    values[k] = y - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::guard(values[k], k, solver_name);
  }
  return Trajectory<V>(grid, std::move(values));
}

/// The follower value-function triple on a grid: P (own-state weight),
/// K (mean-field weight), Pi = P + K.
struct FollowerRiccati {
  Trajectory<double> P;
  Trajectory<double> K;
  Trajectory<double> Pi;
  PopulationSize pop;
};

/// dot P + 2 A P - P^2 B^2 / R + (1 - Gamma/N) Q = 0, P(T) = H.
/// In the limit the (1 - Gamma/N) factor is 1.
Trajectory<double> solve_P(const ModelParams& params, const TimeGrid& grid, PopulationSize pop);

/// dot K + 2 A K - P B^2 K / R - K B^2 (P + K) / R - (1 - Gamma/N) Q Gamma = 0,
/// K(T) = 0. P is interpolated at integrator substage times; pass it on a
/// half-step-refined grid for full 4th-order accuracy.
Trajectory<double> solve_K(const ModelParams& params, const Trajectory<double>& P,
                           const TimeGrid& grid, PopulationSize pop);

/// dot Pi + 2 A Pi - Pi^2 B^2 / R + (1 - Gamma/N) Q (1 - Gamma) = 0, Pi(T) = H.
Trajectory<double> solve_Pi(const ModelParams& params, const TimeGrid& grid, PopulationSize pop);

/// Full triple on `grid`. P is integrated internally on the half-step
/// refinement so that K sees exact substage values.
FollowerRiccati solve_follower_riccati(const ModelParams& params, const TimeGrid& grid,
                                       PopulationSize pop);

/// sup-node |P_N - P_limit| + |K_N - K_limit| for the same grid.
double riccati_convergence_gap(const ModelParams& params, const TimeGrid& grid, std::size_t N);

}  // namespace stackmfg
