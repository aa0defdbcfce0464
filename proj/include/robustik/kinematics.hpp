#pragma once

#include <span>
#include <vector>

#include "robustik/numerics.hpp"
#include "robustik/quaternion.hpp"
#include "robustik/robot_model.hpp"

namespace robustik {

struct Pose {
  Vec3 position{};
  UnitQuaternion orientation{};
};

/// World-frame joint axes and joint positions at one configuration, plus the
/// tool pose. Everything else in this header is derived from it.
struct ChainState {
  std::vector<Vec3> axes;
  std::vector<Vec3> joint_positions;
  Pose tool;
};

/// Throws LengthMismatch when theta.size() != chain.dof().
ChainState chain_state(const KinematicChain& chain, std::span<const double> theta);

Pose fk_pose(const KinematicChain& chain, std::span<const double> theta);

/// 3xN; column j = axis_j × (p_tool − p_j).
Mat position_jacobian(const KinematicChain& chain, std::span<const double> theta);

/// 3xN; column j is joint axis j in the base frame.
Mat rotation_jacobian(const KinematicChain& chain, std::span<const double> theta);

/// 3x4 matrix with H·Hᵀ = I and H·q = 0 such that a world-frame angular
/// velocity w moves the quaternion as q̇ = ½ Hᵀ w:
///
///   H(q) = [ -eps | eta·I + skew(eps) ]
///
/// For small rotations H(q_d)·q is half the world-frame rotation vector
/// taking q_d to q.
Mat h_matrix(const UnitQuaternion& q);

/// 4xN map δΘ -> δq = ½ Hᵀ(q) J_r evaluated at theta.
Mat quat_error_jacobian(const KinematicChain& chain, std::span<const double> theta);

/// Rank of J_p at a generic configuration (2 for planar chains, 3 otherwise).
/// Estimated from a fixed set of pseudo-random configurations.
std::size_t generic_position_rank(const KinematicChain& chain);

/// True when J_p J_pᵀ loses rank relative to the chain's generic rank, i.e.
/// its eigenvalue of that index falls below 1e-12 of the largest.
bool is_position_singular(const Mat& jp, std::size_t generic_rank);

}  // namespace robustik
