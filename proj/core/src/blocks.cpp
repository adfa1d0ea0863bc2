#include "stackmfg/blocks.hpp"

namespace stackmfg {

BlockMatrices assemble_blocks(const ModelParams& p, double Pi_t) {
  const double g = p.g_eff();            // G - B L / R
  const double b2r = p.B * p.B / p.R;
  const double acl = -p.A + b2r * Pi_t;  // -(A - B R^-1 B Pi)

  BlockMatrices m;
  m.A1 << p.A0, -p.B0 * g / p.R0, 0.0,
          p.Q0 * p.Gamma0, acl, 0.0,
          -Pi_t * p.F + p.Q * p.Gamma1, Pi_t * g * g / p.R0, acl;

  m.B1 << p.B0 * p.B0 / p.R0, 0.0, -p.B0 * Pi_t * g / p.R0,
          0.0, p.Q0 * p.Gamma0 * p.Gamma0, 0.0,
          -p.B0 * Pi_t * g / p.R0, 0.0, Pi_t * Pi_t * g * g / p.R0;

  m.A2 << -p.Q0, -p.F, 0.0,
          p.F, -g * g / p.R0, -b2r,
          0.0, b2r, 0.0;

  m.B2 << p.A0, -p.Q0 * p.Gamma0, -Pi_t * p.F + p.Q * p.Gamma1,
          p.B0 * g / p.R0, acl, -Pi_t * g * g / p.R0,
          0.0, 0.0, acl;

  m.C = Mat3::Zero();
  m.C(0, 0) = p.C0;

  m.f0_vec << p.f0, -p.Q0 * p.Gamma0 * p.eta0, p.Q * p.eta - Pi_t * p.f;
  m.f_vec << p.Q0 * p.eta0, p.f, 0.0;
  return m;
}

}  // namespace stackmfg
