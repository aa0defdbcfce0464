#pragma once

#include <cstdint>
#include <vector>

#include "robustik/kinematics.hpp"
#include "robustik/robot_model.hpp"

namespace robustik {

struct IKRequest {
  Pose target;
  std::size_t count = 30;
  std::uint64_t seed = 0;
  double pos_tol = 1e-6;
  /// Bound on the quaternion included angle arccos(|q·q_d|).
  double rot_tol = 1e-6;
  /// When false only the target position is solved for; orientation is free.
  bool constrain_orientation = true;

  std::size_t oversample = 10;
  int max_iterations = 200;
  double initial_damping = 1e-3;
  double dedupe_radius = 0.05;
};

struct IKSolutionSet {
  std::vector<JointVector> solutions;
  std::vector<Pose> achieved_poses;
  std::size_t attempts = 0;
  std::size_t converged = 0;
};

/// Random-restart damped least squares. Starts are drawn uniformly inside the
/// joint limits from `seed`; converged solutions are ordered by residual
/// (ties by start index), de-duplicated in joint space and truncated to
/// `count`. Unreachable targets yield an empty set rather than an error.
IKSolutionSet solve_ik(const KinematicChain& chain, const IKRequest& req);

/// Residuals used for convergence: position distance and quaternion included angle.
struct PoseResidual {
  double position;
  double rotation;
};
PoseResidual pose_residual(const Pose& achieved, const Pose& target);

}  // namespace robustik
