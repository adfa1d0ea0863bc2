#include "stackmfg/limit_system.hpp"

#include <cassert>
#include <cmath>

#include "stackmfg/errors.hpp"

namespace stackmfg {

FixedPoint0 resolve_fixed_point(const Mat3& Phi0, const Vec3& Psi0, const ModelParams& p,
                                double denominator_min) {
  FixedPoint0 fp;
  fp.denominator = 1.0 - p.H0 * Phi0(0, 0);
  if (std::abs(fp.denominator) < denominator_min) throw DegenerateFixedPointError(fp.denominator);
  fp.x0_init = (Phi0(0, 1) * p.xi_bar() + Psi0(0)) / fp.denominator;
  fp.Y0 = Vec3(p.H0 * fp.x0_init, p.xi_bar(), 0.0);
  return fp;
}

LimitState simulate_limit_path(const ModelParams& p, const LeaderDecoupling& dec,
                               const Trajectory<double>& Pi, const FixedPoint0& fp,
                               std::span<const double> dw0) {
  const TimeGrid& grid = dec.Phi.grid();
  assert(dw0.size() == grid.M);
  const double h = grid.step();

  LimitState st{Trajectory<Vec3>(grid), Trajectory<Vec3>(grid), Trajectory<Vec3>(grid)};

  Vec3 Y = fp.Y0;
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const Mat3& Phi = dec.Phi.at(k);
    const Vec3& Psi = dec.Psi.at(k);
    const Vec3 X = Phi * Y + Psi;
    const BlockMatrices m = assemble_blocks(p, Pi.at(k));
    st.Y.at(k) = Y;
    st.X.at(k) = X;
    st.Z.at(k) = -(Phi * (m.C * Y));
    detail::guard(Y, k, "simulate_limit_path");
    if (k < grid.M) {
      Y += (m.A2 * X - m.B2 * Y + m.f_vec) * h - m.C * Y * dw0[k];
    }
  }
  return st;
}

}  // namespace stackmfg
