#pragma once

// Unit quaternions in Hamilton convention, scalar first: q = (eta, eps).
// A quaternion maps to the active rotation R(q) so that R(a ⊗ b) = R(a) R(b).
// Composition along a chain is parent-then-child:
//
//   q_world_tool = q_world_j1 ⊗ q_j1_j2 ⊗ ... ⊗ q_jn_tool
//
// Worked two-joint example: joint 1 turns 90 deg about world z, joint 2 turns
// 90 deg about its own x axis (world y after joint 1):
//
//   (c45, 0, 0, s45) ⊗ (c45, s45, 0, 0) = (0.5, 0.5, 0.5, 0.5)
//
// which maps tool x -> world y, tool y -> world z, tool z -> world x.

#include <array>

#include "robustik/numerics.hpp"

namespace robustik {

class UnitQuaternion {
 public:
  /// Identity rotation.
  constexpr UnitQuaternion() = default;

  /// Normalizes the four components and flips the sign so eta >= 0.
  /// Throws NonFinite on a zero or non-finite input.
  static UnitQuaternion normalized(double eta, Vec3 eps);
  static UnitQuaternion normalized(const std::array<double, 4>& wxyz);
  static UnitQuaternion from_axis_angle(Vec3 unit_axis, double angle);
  /// From an orthonormal rotation matrix (row-major 3x3).
  static UnitQuaternion from_rotation_matrix(const Mat& r);

  double eta() const noexcept { return eta_; }
  Vec3 eps() const noexcept { return eps_; }
  std::array<double, 4> components() const noexcept { return {eta_, eps_.x, eps_.y, eps_.z}; }

  UnitQuaternion conjugate() const noexcept;
  Mat rotation_matrix() const;
  Vec3 rotate(Vec3 v) const noexcept;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  constexpr UnitQuaternion(double eta, Vec3 eps) : eta_(eta), eps_(eps) {}

  double eta_ = 1.0;
  Vec3 eps_{};
};

/// Hamilton product a ⊗ b, renormalized and canonicalized.
UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b);
inline UnitQuaternion quat_conjugate(const UnitQuaternion& q) { return q.conjugate(); }

/// Four-vector dot product; |dot| is the cosine of the quaternion included angle.
double quat_dot(const UnitQuaternion& a, const UnitQuaternion& b) noexcept;

/// arccos(|a·b|), the included angle between the two points on the unit
/// 3-sphere. This is half of the rotation angle of a⁻¹ ⊗ b.
double quat_included_angle(const UnitQuaternion& a, const UnitQuaternion& b) noexcept;

/// Rotation angle of a⁻¹ ⊗ b in [0, pi].
double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b) noexcept;

/// Skew-symmetric cross-product matrix: skew(a) b = a × b.
Mat skew(Vec3 a);

}  // namespace robustik
