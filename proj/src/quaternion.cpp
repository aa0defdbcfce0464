#include "robustik/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robustik/error.hpp"

namespace robustik {

UnitQuaternion UnitQuaternion::normalized(double eta, Vec3 eps) {
  const double n = std::sqrt(eta * eta + dot(eps, eps));
  if (!std::isfinite(n) || n == 0.0) {
    throw Error(ErrorKind::NonFinite, "quaternion with zero or non-finite norm");
  }
  // Leave inputs that are already unit to rounding untouched so that
  // normalization is idempotent and file round-trips are exact.
  double s = std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? 1.0 : 1.0 / n;
  if (eta < 0.0) s = -s;
  return UnitQuaternion(eta * s, eps * s);
}

UnitQuaternion UnitQuaternion::normalized(const std::array<double, 4>& wxyz) {
  return normalized(wxyz[0], {wxyz[1], wxyz[2], wxyz[3]});
}

UnitQuaternion UnitQuaternion::from_axis_angle(Vec3 unit_axis, double angle) {
  const double h = 0.5 * angle;
  return normalized(std::cos(h), std::sin(h) * unit_axis);
}

UnitQuaternion UnitQuaternion::from_rotation_matrix(const Mat& r) {
  if (r.rows() != 3 || r.cols() != 3) throw Error(ErrorKind::DimensionMismatch, "rotation matrix must be 3x3");
  // Shepperd's method: pivot on the largest of the four squared components.
  const double tr = r(0, 0) + r(1, 1) + r(2, 2);
  const std::array<double, 4> d = {tr, r(0, 0), r(1, 1), r(2, 2)};
  const auto pivot = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  double w = 0, x = 0, y = 0, z = 0;
  switch (pivot) {
    case 0: {
      const double s = 2.0 * std::sqrt(1.0 + tr);
      w = 0.25 * s;
      x = (r(2, 1) - r(1, 2)) / s;
      y = (r(0, 2) - r(2, 0)) / s;
      z = (r(1, 0) - r(0, 1)) / s;
      break;
    }
    case 1: {
      const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
      w = (r(2, 1) - r(1, 2)) / s;
      x = 0.25 * s;
      y = (r(0, 1) + r(1, 0)) / s;
      z = (r(0, 2) + r(2, 0)) / s;
      break;
    }
    case 2: {
      const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
      w = (r(0, 2) - r(2, 0)) / s;
      x = (r(0, 1) + r(1, 0)) / s;
      y = 0.25 * s;
      z = (r(1, 2) + r(2, 1)) / s;
      break;
    }
    default: {
      const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
      w = (r(1, 0) - r(0, 1)) / s;
      x = (r(0, 2) + r(2, 0)) / s;
      y = (r(1, 2) + r(2, 1)) / s;
      z = 0.25 * s;
      break;
    }
  }
  return normalized(w, {x, y, z});
}

UnitQuaternion UnitQuaternion::conjugate() const noexcept {
  // (eta, -eps) keeps eta >= 0, so no re-canonicalization is needed.
  return UnitQuaternion(eta_, -eps_);
}

Mat UnitQuaternion::rotation_matrix() const {
  const double w = eta_, x = eps_.x, y = eps_.y, z = eps_.z;
  return Mat{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

Vec3 UnitQuaternion::rotate(Vec3 v) const noexcept {
  // v' = v + 2 eta (eps × v) + 2 eps × (eps × v)
  const Vec3 t = 2.0 * cross(eps_, v);
  return v + eta_ * t + cross(eps_, t);
}

UnitQuaternion quat_multiply(const UnitQuaternion& a, const UnitQuaternion& b) {
  const double ea = a.eta(), eb = b.eta();
  const Vec3 va = a.eps(), vb = b.eps();
  return UnitQuaternion::normalized(ea * eb - dot(va, vb), ea * vb + eb * va + cross(va, vb));
}

double quat_dot(const UnitQuaternion& a, const UnitQuaternion& b) noexcept {
  return a.eta() * b.eta() + dot(a.eps(), b.eps());
}

double quat_included_angle(const UnitQuaternion& a, const UnitQuaternion& b) noexcept {
  return std::acos(std::clamp(std::abs(quat_dot(a, b)), -1.0, 1.0));
}

double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b) noexcept {
  // 2 atan2(|vec|, |scalar|) of a⁻¹ ⊗ b; accurate for small angles, unlike acos.
  const double ea = a.eta(), eb = b.eta();
  const Vec3 va = -a.eps(), vb = b.eps();
  const double w = ea * eb - dot(va, vb);
  const Vec3 v = ea * vb + eb * va + cross(va, vb);
  return 2.0 * std::atan2(norm(v), std::abs(w));
}

Mat skew(Vec3 a) {
  return Mat{{0.0, -a.z, a.y}, {a.z, 0.0, -a.x}, {-a.y, a.x, 0.0}};
}

}  // namespace robustik
