#include "robustik/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "robustik/kinematics.hpp"

namespace robustik {

namespace {

constexpr double kFdStep = 1e-7;
constexpr double kFdTolerance = 1e-6;

JointVector random_configuration(const KinematicChain& chain, std::mt19937_64& rng) {
  JointVector theta(chain.dof());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto& lim = chain.joints()[i].limits;
    theta[i] = std::uniform_real_distribution<double>(lim.lo, lim.hi)(rng);
  }
  return theta;
}

JointVector random_sphere_point(std::size_t n, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  JointVector u(n);
  double s = 0.0;
  for (double& x : u) {
    x = g(rng);
    s += x * x;
  }
  const double scale = radius / std::sqrt(s);
  for (double& x : u) x *= scale;
  return u;
}

/// Point on the joint ball boundary ‖δΘ‖ = radius. Odd draws are uniform on
/// the sphere; even draws lie in the row space of `jac` (δΘ ∝ jacᵀw), which
/// is where the image of the sphere reaches the task-space boundary.
JointVector boundary_sample(const Mat& jac, double radius, std::size_t draw, std::mt19937_64& rng) {
  if (draw % 2 == 1) return random_sphere_point(jac.cols(), radius, rng);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::vector<double> w{g(rng), g(rng), g(rng)};
  JointVector d = multiply(jac.transpose(), w);
  double s = 0.0;
  for (double x : d) s += x * x;
  if (!(s > 0.0)) return random_sphere_point(jac.cols(), radius, rng);
  const double scale = radius / std::sqrt(s);
  for (double& x : d) x *= scale;
  return d;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

CheckResult check_round_trip(const KinematicChain& chain) {
  const std::string once = save_chain(chain);
  const KinematicChain reloaded = load_chain(once);
  const bool same = reloaded == chain && save_chain(reloaded) == once;
  return {"robot_spec_round_trip", same, same ? "identical" : "reloaded chain differs"};
}

CheckResult check_jacobians(const KinematicChain& chain, std::mt19937_64& rng) {
  double worst_p = 0.0, worst_q = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const JointVector theta = random_configuration(chain, rng);
    const Mat jp = position_jacobian(chain, theta);
    const Mat jq = quat_error_jacobian(chain, theta);
    const auto q0 = fk_pose(chain, theta).orientation;
    for (std::size_t j = 0; j < chain.dof(); ++j) {
      JointVector plus = theta, minus = theta;
      plus[j] += kFdStep;
      minus[j] -= kFdStep;
      const Pose a = fk_pose(chain, plus);
      const Pose b = fk_pose(chain, minus);
      for (std::size_t r = 0; r < 3; ++r) {
        const double fd = (a.position[r] - b.position[r]) / (2.0 * kFdStep);
        worst_p = std::max(worst_p, std::abs(fd - jp(r, j)));
      }
      // Align both samples with q0 on the double cover before differencing.
      auto qa = a.orientation.components();
      auto qb = b.orientation.components();
      if (quat_dot(a.orientation, q0) < 0) for (double& c : qa) c = -c;
      if (quat_dot(b.orientation, q0) < 0) for (double& c : qb) c = -c;
      for (std::size_t r = 0; r < 4; ++r) {
        worst_q = std::max(worst_q, std::abs((qa[r] - qb[r]) / (2.0 * kFdStep) - jq(r, j)));
      }
    }
  }
  const bool ok = worst_p <= kFdTolerance && worst_q <= kFdTolerance;
  return {"jacobian_finite_difference", ok,
          "max |J_p - FD| = " + fmt(worst_p) + ", max |dq/dtheta - FD| = " + fmt(worst_q)};
}

CheckResult check_bounds(const KinematicChain& chain, const JointErrorModel& model, std::mt19937_64& rng) {
  constexpr int kConfigurations = 3;
  constexpr std::size_t kSamples = 100000;
  const double radius = model.radius();
  int violations = 0;
  double worst_tight_p = 1.0, worst_tight_o = 1.0;
  for (int cfg = 0; cfg < kConfigurations; ++cfg) {
    const JointVector theta = random_configuration(chain, rng);
    const Mat jp = position_jacobian(chain, theta);
    const Mat jr = rotation_jacobian(chain, theta);
    const UnitQuaternion qd = fk_pose(chain, theta).orientation;
    const double p_bound = position_bound_r3(PositionErrorSet::from_jacobian(jp, model));
    const double o_bound = rotation_bound(RotationErrorSet::from_jacobian(jr, qd, model));
    double p_best = 0.0, o_best = 0.0;
    for (std::size_t s = 0; s < kSamples; ++s) {
      const JointVector dp = boundary_sample(jp, radius, s, rng);
      const JointVector dr = boundary_sample(jr, radius, s, rng);
      const double p = norm(multiply3(jp, dp));
      // Linearized orientation: angle between q_d and q_d + ½ Hᵀ J_r δΘ.
      const double o = std::atan(0.5 * norm(multiply3(jr, dr)));
      if (p > p_bound * (1 + 1e-12) + 1e-18 || o > o_bound * (1 + 1e-12) + 1e-18) ++violations;
      p_best = std::max(p_best, p);
      o_best = std::max(o_best, o);
    }
    if (p_bound > 0) worst_tight_p = std::min(worst_tight_p, p_best / p_bound);
    if (o_bound > 0) worst_tight_o = std::min(worst_tight_o, o_best / o_bound);
  }
  const bool ok = violations == 0 && worst_tight_p >= 0.99 && worst_tight_o >= 0.99;
  return {"bound_soundness_and_tightness", ok,
          "violations = " + std::to_string(violations) + ", attained P " + fmt(worst_tight_p) + ", O " +
              fmt(worst_tight_o)};
}

}  // namespace

std::vector<CheckResult> run_validation(const KinematicChain& chain, const JointErrorModel& model,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_round_trip(chain));
  out.push_back(check_jacobians(chain, rng));
  out.push_back(check_bounds(chain, model, rng));
  return out;
}

}  // namespace robustik
