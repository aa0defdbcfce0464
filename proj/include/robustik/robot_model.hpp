#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robustik/numerics.hpp"
#include "robustik/quaternion.hpp"

namespace robustik {

/// Joint angles in radians, one per joint of a chain.
using JointVector = std::vector<double>;

struct JointLimits {
  double lo;
  double hi;
};

/// A revolute joint. `origin` is the offset (meters) from the parent joint
/// frame to this joint's frame; `axis` is the unit rotation axis in that frame.
struct JointSpec {
  Vec3 axis;
  Vec3 origin;
  JointLimits limits;
};

struct RigidTransform {
  Vec3 origin{};
  UnitQuaternion rotation{};
};

/// Serial chain of revolute joints followed by a fixed tool transform.
/// Immutable once constructed; the constructor rejects invalid chains.
class KinematicChain {
 public:
  KinematicChain(std::string name, std::vector<JointSpec> joints, RigidTransform tool_offset);

  const std::string& name() const noexcept { return name_; }
  const std::vector<JointSpec>& joints() const noexcept { return joints_; }
  const RigidTransform& tool_offset() const noexcept { return tool_offset_; }
  std::size_t dof() const noexcept { return joints_.size(); }

  /// Sum of all link offsets including the tool: an upper bound on reach.
  double total_length() const noexcept;

  bool within_limits(std::span<const double> theta) const;
  JointVector clamp_to_limits(JointVector theta) const;

  friend bool operator==(const KinematicChain& a, const KinematicChain& b);

 private:
  std::string name_;
  std::vector<JointSpec> joints_;
  RigidTransform tool_offset_;
};

/// Parses a robot-spec document (JSON; see docs/robot_spec.md).
/// Throws ParseError for malformed documents or unknown keys and
/// Error{Validation} for semantic problems (non-unit axis, lo >= hi, no joints).
KinematicChain load_chain(std::string_view text);
KinematicChain load_chain_file(const std::string& path);

/// Deterministic serialization; doubles round-trip exactly.
std::string save_chain(const KinematicChain& chain);

namespace reference {

/// Planar 3R arm: three z joints, unit links along x, tool 1 m past joint 3.
KinematicChain planar3r();

/// Single z joint with a unit link, for closed-form checks.
KinematicChain planar1r();

/// Desk-scale 7-DoF arm with an S-R-S layout (roll/pitch alternating axes),
/// 0.3 m shoulder height, 0.45 m upper arm and forearm, 0.13 m wrist-to-tool.
KinematicChain desk7();

}  // namespace reference

}  // namespace robustik
