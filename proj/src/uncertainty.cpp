#include "robustik/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "robustik/error.hpp"
#include "robustik/kinematics.hpp"

namespace robustik {

JointErrorModel::JointErrorModel(double sigma, double k) : sigma_(sigma), k_(k) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::Validation, "sigma must be >= 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::Validation, "k must be > 0");
}

PositionErrorSet PositionErrorSet::from_jacobian(const Mat& jp, const JointErrorModel& model) {
  if (jp.rows() != 3) throw Error(ErrorKind::DimensionMismatch, "position Jacobian must be 3xN");
  return {model.c() * gram(jp)};
}

RotationErrorSet RotationErrorSet::from_jacobian(const Mat& jr, const UnitQuaternion& qd,
                                                 const JointErrorModel& model) {
  if (jr.rows() != 3) throw Error(ErrorKind::DimensionMismatch, "rotation Jacobian must be 3xN");
  return {gram(jr), h_matrix(qd), qd, model.c()};
}

double position_bound_r3(const PositionErrorSet& set) {
  return std::sqrt(std::max(0.0, sym_eig_max(set.shape).value));
}

double position_bound_direction(const PositionErrorSet& set, Vec3 v) {
  if (!(std::abs(norm(v) - 1.0) <= 1e-9)) throw Error(ErrorKind::NonUnitDirection, "direction must be unit length");
  const std::array<double, 3> vv{v.x, v.y, v.z};
  const Vec3 sv = multiply3(set.shape, vv);
  return std::sqrt(std::max(0.0, dot(v, sv)));
}

double position_bound_plane(const PositionErrorSet& set, const Mat& basis) {
  if (basis.rows() != 3 || basis.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "plane basis must be 3x2");
  const Mat t_t = basis.transpose() * basis;
  if ((t_t - Mat::identity(2)).max_abs() > 1e-9) {
    throw Error(ErrorKind::NonOrthonormalBasis, "plane basis columns must be orthonormal");
  }
  const Mat projected = basis.transpose() * set.shape * basis;
  return std::numbers::pi * std::sqrt(std::max(0.0, det_small(projected)));
}

RotationBound rotation_bound_detail(const RotationErrorSet& set) {
  const EigenPair top = sym_eig_max(set.shape);
  const double lambda = std::max(0.0, top.value);
  const double scale = 0.5 * std::sqrt(set.c * lambda);
  const Vec3 v{scale * top.vector[0], scale * top.vector[1], scale * top.vector[2]};

  const std::array<double, 3> vv{v.x, v.y, v.z};
  const auto dq = multiply(set.hd.transpose(), vv);
  const auto qd = set.qd.components();
  const UnitQuaternion q_star =
      UnitQuaternion::normalized(qd[0] + dq[0], {qd[1] + dq[1], qd[2] + dq[2], qd[3] + dq[3]});
  const double angle = std::acos(std::clamp(std::abs(quat_dot(set.qd, q_star)), -1.0, 1.0));
  return {angle, q_star, v};
}

double rotation_bound(const RotationErrorSet& set) { return rotation_bound_detail(set).angle; }

bool joint_ball_contains(std::span<const double> delta, const JointErrorModel& model) {
  double s = 0.0;
  for (double d : delta) s += d * d;
  return s <= model.c();
}

Mat plane_basis_from_normal(Vec3 normal) {
  const double n = norm(normal);
  if (!(n > 0.0)) throw Error(ErrorKind::NonUnitDirection, "plane normal must be non-zero");
  const Vec3 u = (1.0 / n) * normal;
  // Seed with the world axis least aligned with the normal.
  Vec3 seed{1, 0, 0};
  if (std::abs(u.y) < std::abs(u.x) && std::abs(u.y) <= std::abs(u.z)) seed = {0, 1, 0};
  else if (std::abs(u.z) < std::abs(u.x)) seed = {0, 0, 1};
  Vec3 a = cross(u, seed);
  a = (1.0 / norm(a)) * a;
  const Vec3 b = cross(u, a);
  Mat t(3, 2);
  t.set_col(0, a);
  t.set_col(1, b);
  return t;
}

}  // namespace robustik
