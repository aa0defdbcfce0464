#include "robustik/kinematics.hpp"

#include <random>

#include "robustik/error.hpp"

namespace robustik {

ChainState chain_state(const KinematicChain& chain, std::span<const double> theta) {
  const std::size_t n = chain.dof();
  if (theta.size() != n) {
    throw Error(ErrorKind::LengthMismatch,
                "expected " + std::to_string(n) + " joint angles, got " + std::to_string(theta.size()));
  }
  ChainState s;
  s.axes.reserve(n);
  s.joint_positions.reserve(n);

  Vec3 p{};
  UnitQuaternion q{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& joint = chain.joints()[i];
    p = p + q.rotate(joint.origin);
    s.joint_positions.push_back(p);
    s.axes.push_back(q.rotate(joint.axis));
    q = quat_multiply(q, UnitQuaternion::from_axis_angle(joint.axis, theta[i]));
  }
  const auto& tool = chain.tool_offset();
  s.tool.position = p + q.rotate(tool.origin);
  s.tool.orientation = quat_multiply(q, tool.rotation);
  return s;
}

Pose fk_pose(const KinematicChain& chain, std::span<const double> theta) {
  return chain_state(chain, theta).tool;
}

Mat position_jacobian(const KinematicChain& chain, std::span<const double> theta) {
  const ChainState s = chain_state(chain, theta);
  Mat jp(3, chain.dof());
  for (std::size_t j = 0; j < chain.dof(); ++j) {
    jp.set_col(j, cross(s.axes[j], s.tool.position - s.joint_positions[j]));
  }
  return jp;
}

Mat rotation_jacobian(const KinematicChain& chain, std::span<const double> theta) {
  const ChainState s = chain_state(chain, theta);
  Mat jr(3, chain.dof());
  for (std::size_t j = 0; j < chain.dof(); ++j) jr.set_col(j, s.axes[j]);
  return jr;
}

Mat h_matrix(const UnitQuaternion& q) {
  const double w = q.eta();
  const Vec3 e = q.eps();
  return Mat{{-e.x, w, -e.z, e.y},
             {-e.y, e.z, w, -e.x},
             {-e.z, -e.y, e.x, w}};
}

Mat quat_error_jacobian(const KinematicChain& chain, std::span<const double> theta) {
  const ChainState s = chain_state(chain, theta);
  Mat jr(3, chain.dof());
  for (std::size_t j = 0; j < chain.dof(); ++j) jr.set_col(j, s.axes[j]);
  return 0.5 * (h_matrix(s.tool.orientation).transpose() * jr);
}

namespace {

std::size_t numeric_rank3(const Mat& jp) {
  const auto eig = sym_eig(gram(jp));
  const double top = eig.front().value;
  if (!(top > 0.0)) return 0;
  std::size_t r = 0;
  for (const auto& e : eig) r += e.value > 1e-12 * top ? 1 : 0;
  return r;
}

}  // namespace

std::size_t generic_position_rank(const KinematicChain& chain) {
  std::mt19937_64 rng(0x5eed);
  std::size_t best = 0;
  JointVector theta(chain.dof());
  for (int trial = 0; trial < 16 && best < 3; ++trial) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const auto& lim = chain.joints()[i].limits;
      theta[i] = std::uniform_real_distribution<double>(lim.lo, lim.hi)(rng);
    }
    best = std::max(best, numeric_rank3(position_jacobian(chain, theta)));
  }
  return best;
}

bool is_position_singular(const Mat& jp, std::size_t generic_rank) {
  if (generic_rank == 0) return false;
  const auto eig = sym_eig(gram(jp));
  const double top = eig.front().value;
  if (!(top > 0.0)) return true;
  return !(eig[generic_rank - 1].value > 1e-12 * top);
}

}  // namespace robustik
