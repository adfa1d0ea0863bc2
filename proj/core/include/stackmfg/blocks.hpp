#pragma once

#include <Eigen/Dense>

#include "stackmfg/params.hpp"

namespace stackmfg {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Coefficient blocks of the limit Hamiltonian system in the stacked
/// variables X = [x0_bar, y_bar, phi_bar] and Y = [y0_bar, x_bar, psi_bar]:
///   dX = [A1 X - B1 Y + C Z + f0_vec] dt + Z dW0
///   dY = [A2 X - B2 Y + f_vec] dt - C Y dW0
/// All blocks except A2, C and f_vec depend on time through Pi(t).
struct BlockMatrices {
  Mat3 A1, B1, A2, B2, C;
  Vec3 f0_vec, f_vec;
};

/// Pure assembly for a single value Pi_t of the limit Riccati solution.
BlockMatrices assemble_blocks(const ModelParams& params, double Pi_t);

}  // namespace stackmfg
