#include "robustik/ik_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "robustik/error.hpp"

namespace robustik {

PoseResidual pose_residual(const Pose& achieved, const Pose& target) {
  return {norm(achieved.position - target.position),
          0.5 * rotation_angle_between(achieved.orientation, target.orientation)};
}

namespace {

struct Attempt {
  std::size_t start_index;
  JointVector theta;
  Pose pose;
  double residual;
};

/// Stacked task error and Jacobian at theta. Rotation error is 2·H(q)·q_d,
/// the small-angle world rotation vector from the current to the target
/// orientation, which pairs with the world-frame J_r.
struct Linearization {
  std::vector<double> error;
  Mat jacobian;
  Pose pose;
  double cost;
};

Linearization linearize(const KinematicChain& chain, const JointVector& theta, const IKRequest& req) {
  const ChainState s = chain_state(chain, theta);
  const std::size_t n = chain.dof();
  const std::size_t m = req.constrain_orientation ? 6 : 3;
  Linearization lin{std::vector<double>(m), Mat(m, n), s.tool, 0.0};

  const Vec3 ep = req.target.position - s.tool.position;
  for (std::size_t r = 0; r < 3; ++r) lin.error[r] = ep[r];
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 col = cross(s.axes[j], s.tool.position - s.joint_positions[j]);
    for (std::size_t r = 0; r < 3; ++r) lin.jacobian(r, j) = col[r];
  }

  if (req.constrain_orientation) {
    auto qd = req.target.orientation.components();
    if (quat_dot(s.tool.orientation, req.target.orientation) < 0.0) {
      for (double& c : qd) c = -c;
    }
    const auto er = multiply(h_matrix(s.tool.orientation), qd);
    for (std::size_t r = 0; r < 3; ++r) lin.error[3 + r] = 2.0 * er[r];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < 3; ++r) lin.jacobian(3 + r, j) = s.axes[j][r];
  }

  lin.cost = std::inner_product(lin.error.begin(), lin.error.end(), lin.error.begin(), 0.0);
  return lin;
}

bool converged(const Pose& pose, const IKRequest& req) {
  const PoseResidual r = pose_residual(pose, req.target);
  return r.position <= req.pos_tol && (!req.constrain_orientation || r.rotation <= req.rot_tol);
}

double residual_score(const Pose& pose, const IKRequest& req) {
  const PoseResidual r = pose_residual(pose, req.target);
  return req.constrain_orientation ? r.position + r.rotation : r.position;
}

std::optional<Attempt> run_attempt(const KinematicChain& chain, const IKRequest& req,
                                   JointVector theta, std::size_t start_index) {
  double damping = req.initial_damping;
  Linearization lin = linearize(chain, theta, req);
  for (int iter = 0; iter < req.max_iterations; ++iter) {
    if (converged(lin.pose, req)) break;

    // Δ = Jᵀ (J Jᵀ + μ I)⁻¹ e
    Mat normal = gram(lin.jacobian);
    for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += damping;
    const auto y = cholesky_solve(cholesky_lower(normal), lin.error);
    const auto step = multiply(lin.jacobian.transpose(), y);

    JointVector candidate = theta;
    for (std::size_t i = 0; i < candidate.size(); ++i) candidate[i] += step[i];
    candidate = chain.clamp_to_limits(std::move(candidate));

    Linearization next = linearize(chain, candidate, req);
    if (next.cost < lin.cost) {
      theta = std::move(candidate);
      lin = std::move(next);
      damping = std::max(0.5 * damping, 1e-9);
    } else {
      damping *= 10.0;
      if (damping > 1e6) break;
    }
  }
  if (!converged(lin.pose, req)) return std::nullopt;
  return Attempt{start_index, std::move(theta), lin.pose, residual_score(lin.pose, req)};
}

double joint_distance(const JointVector& a, const JointVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

IKSolutionSet solve_ik(const KinematicChain& chain, const IKRequest& req) {
  if (req.count == 0) throw Error(ErrorKind::Validation, "IK count must be >= 1");
  if (!(req.pos_tol > 0.0) || !(req.rot_tol > 0.0)) throw Error(ErrorKind::Validation, "IK tolerances must be > 0");

  IKSolutionSet out;
  // Nothing beyond the summed link offsets is reachable from the base origin.
  if (norm(req.target.position) > chain.total_length()) return out;

  const std::size_t starts = req.count * std::max<std::size_t>(1, req.oversample);
  std::mt19937_64 rng(req.seed);
  std::vector<JointVector> initial(starts, JointVector(chain.dof()));
  for (auto& theta : initial) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const auto& lim = chain.joints()[i].limits;
      theta[i] = std::uniform_real_distribution<double>(lim.lo, lim.hi)(rng);
    }
  }

  std::vector<Attempt> found;
  for (std::size_t s = 0; s < starts; ++s) {
    if (auto a = run_attempt(chain, req, initial[s], s)) found.push_back(std::move(*a));
  }
  out.attempts = starts;
  out.converged = found.size();

  std::stable_sort(found.begin(), found.end(), [](const Attempt& l, const Attempt& r) {
    return l.residual != r.residual ? l.residual < r.residual : l.start_index < r.start_index;
  });
  for (auto& a : found) {
    if (out.solutions.size() >= req.count) break;
    const bool distinct = std::all_of(out.solutions.begin(), out.solutions.end(), [&](const JointVector& kept) {
      return joint_distance(kept, a.theta) >= req.dedupe_radius;
    });
    if (!distinct) continue;
    out.solutions.push_back(std::move(a.theta));
    out.achieved_poses.push_back(a.pose);
  }
  return out;
}

}  // namespace robustik
