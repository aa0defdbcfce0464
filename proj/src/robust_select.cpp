#include "robustik/robust_select.hpp"

#include <cmath>

#include "robustik/error.hpp"
#include "robustik/kinematics.hpp"

namespace robustik {

namespace {

double position_term(const PositionErrorSet& set, const PositionMode& mode) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FullR3>) {
          return position_bound_r3(set);
        } else if constexpr (std::is_same_v<T, AlongDirection>) {
          return position_bound_direction(set, m.direction);
        } else {
          return position_bound_plane(set, m.basis);
        }
      },
      mode);
}

SolutionScore score_with_rank(const KinematicChain& chain, std::span<const double> theta,
                              const UnitQuaternion& qd, const JointErrorModel& model,
                              const TaskMetric& metric, std::size_t generic_rank) {
  const ChainState s = chain_state(chain, theta);
  Mat jp(3, chain.dof());
  Mat jr(3, chain.dof());
  for (std::size_t j = 0; j < chain.dof(); ++j) {
    jp.set_col(j, cross(s.axes[j], s.tool.position - s.joint_positions[j]));
    jr.set_col(j, s.axes[j]);
  }
  if (is_position_singular(jp, generic_rank)) {
    throw Error(ErrorKind::RankDeficient, "position Jacobian is singular at this configuration");
  }
  const double p = position_term(PositionErrorSet::from_jacobian(jp, model), metric.position_mode);
  const double o = rotation_bound(RotationErrorSet::from_jacobian(jr, qd, model));
  return {p, o, p + metric.lambda * o};
}

}  // namespace

SolutionScore score_solution(const KinematicChain& chain, std::span<const double> theta,
                             const UnitQuaternion& qd, const JointErrorModel& model,
                             const TaskMetric& metric) {
  return score_with_rank(chain, theta, qd, model, metric, generic_position_rank(chain));
}

RobustIKResult select_robust(const KinematicChain& chain, const std::vector<JointVector>& solutions,
                             const std::vector<UnitQuaternion>& orientations,
                             const JointErrorModel& model, const TaskMetric& metric) {
  if (solutions.empty()) throw Error(ErrorKind::EmptyIKSet, "no IK solutions to score");
  if (orientations.size() != solutions.size()) {
    throw Error(ErrorKind::LengthMismatch, "one orientation per solution is required");
  }
  if (!(metric.lambda >= 0.0)) throw Error(ErrorKind::Validation, "lambda must be >= 0");
  if (!(metric.epsilon > 0.0)) throw Error(ErrorKind::Validation, "epsilon must be > 0");

  const std::size_t rank = generic_position_rank(chain);
  RobustIKResult result;
  auto& entries = result.report.entries;
  entries.reserve(solutions.size());
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    ScoredSolution e{solutions[i], 0.0, 0.0, 0.0, false, false};
    try {
      const SolutionScore s = score_with_rank(chain, solutions[i], orientations[i], model, metric, rank);
      e.position = s.position;
      e.rotation = s.rotation;
      e.combined = s.combined;
      e.feasible = s.combined <= metric.epsilon;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::RankDeficient) throw;
      e.position = e.rotation = e.combined = std::numeric_limits<double>::infinity();
      e.singular = true;
    }
    entries.push_back(std::move(e));
  }

  auto& report = result.report;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].combined < entries[report.best_index].combined) report.best_index = i;
    if (entries[i].combined > entries[report.worst_index].combined) report.worst_index = i;
  }
  if (entries[report.best_index].feasible) result.best = entries[report.best_index].theta;
  return result;
}

RobustIKResult robust_ik(const KinematicChain& chain, const JointErrorModel& model,
                         const TaskMetric& metric, const IKRequest& ik_req) {
  const IKSolutionSet set = solve_ik(chain, ik_req);
  if (set.solutions.empty()) {
    throw Error(ErrorKind::EmptyIKSet, "IK found no solution for the target (" +
                                           std::to_string(set.attempts) + " attempts)");
  }
  std::vector<UnitQuaternion> orientations;
  orientations.reserve(set.solutions.size());
  for (const auto& pose : set.achieved_poses) {
    orientations.push_back(ik_req.constrain_orientation ? ik_req.target.orientation : pose.orientation);
  }
  return select_robust(chain, set.solutions, orientations, model, metric);
}

}  // namespace robustik
