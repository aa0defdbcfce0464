#pragma once

// Task-space error sets induced by the joint error ball δΘᵀδΘ <= c, and the
// worst-case bounds over them.

#include <span>

#include "robustik/numerics.hpp"
#include "robustik/quaternion.hpp"
#include "robustik/robot_model.hpp"

namespace robustik {

/// Isotropic Gaussian joint error with per-joint standard deviation `sigma`;
/// the error ball is its k-sigma set, radius squared c = (k·sigma)².
class JointErrorModel {
 public:
  /// Throws Validation when sigma < 0 or k <= 0.
  JointErrorModel(double sigma, double k);

  double sigma() const noexcept { return sigma_; }
  double k() const noexcept { return k_; }
  double c() const noexcept { return (k_ * sigma_) * (k_ * sigma_); }
  double radius() const noexcept { return k_ * sigma_; }

 private:
  double sigma_;
  double k_;
};

/// Ellipsoid {δX : δXᵀ S⁺ δX <= 1} with shape S = c·J_p·J_pᵀ.
struct PositionErrorSet {
  Mat shape;

  static PositionErrorSet from_jacobian(const Mat& jp, const JointErrorModel& model);
};

/// Orientation error set around q_d: the tangent vectors v = H_d δq satisfy
/// vᵀ (J_r J_rᵀ)⁻¹ v <= c/4.
struct RotationErrorSet {
  Mat shape;  // J_r J_rᵀ
  Mat hd;     // H(q_d)
  UnitQuaternion qd;
  double c;

  static RotationErrorSet from_jacobian(const Mat& jr, const UnitQuaternion& qd,
                                        const JointErrorModel& model);
};

/// Distance from the ellipsoid center to its farthest point, sqrt(λmax(S)).
double position_bound_r3(const PositionErrorSet& set);

/// Half-width of the ellipsoid's shadow on a unit direction v, sqrt(vᵀ S v).
/// Throws NonUnitDirection when | ‖v‖ − 1 | > 1e-9.
double position_bound_direction(const PositionErrorSet& set, Vec3 v);

/// Area of the ellipsoid's shadow on the plane spanned by the two orthonormal
/// columns of `basis` (3x2): pi * sqrt(det(Tᵀ S T)).
/// Throws NonOrthonormalBasis when TᵀT differs from I by more than 1e-9.
double position_bound_plane(const PositionErrorSet& set, const Mat& basis);

struct RotationBound {
  double angle;            // arccos(|q_dᵀ q*|)
  UnitQuaternion bounding; // q*
  Vec3 tangent;            // v*
};

/// Worst-case orientation over the set: v* = ½ sqrt(c λmax) V_max,
/// q* = normalize(q_d + H_dᵀ v*), angle = arccos(|q_dᵀ q*|).
RotationBound rotation_bound_detail(const RotationErrorSet& set);
double rotation_bound(const RotationErrorSet& set);

/// ‖δΘ‖² <= c, boundary inclusive.
bool joint_ball_contains(std::span<const double> delta, const JointErrorModel& model);

/// Orthonormal basis (3x2) of the plane with the given normal.
Mat plane_basis_from_normal(Vec3 normal);

}  // namespace robustik
