#pragma once

#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "robustik/ik_engine.hpp"
#include "robustik/uncertainty.hpp"

namespace robustik {

struct FullR3 {};
struct AlongDirection {
  Vec3 direction;
};
struct OnPlane {
  Mat basis;  // 3x2, orthonormal columns
};
using PositionMode = std::variant<FullR3, AlongDirection, OnPlane>;

/// Task metric M = P + lambda·O with feasibility M <= epsilon.
/// lambda is in meters per radian; in plane mode P is an area and lambda,
/// epsilon take the matching units.
struct TaskMetric {
  PositionMode position_mode = FullR3{};
  double lambda = 0.0;
  double epsilon = std::numeric_limits<double>::infinity();
};

struct SolutionScore {
  double position;  // P
  double rotation;  // O, radians
  double combined;  // M
};

/// Bounds for one configuration. Throws RankDeficient when J_p loses rank
/// relative to the chain's generic rank.
SolutionScore score_solution(const KinematicChain& chain, std::span<const double> theta,
                             const UnitQuaternion& qd, const JointErrorModel& model,
                             const TaskMetric& metric);

struct ScoredSolution {
  JointVector theta;
  double position;
  double rotation;
  double combined;  // +inf for singular configurations
  bool feasible;
  bool singular;
};

struct BoundReport {
  std::vector<ScoredSolution> entries;
  std::size_t best_index = 0;   // argmin of M, lowest index on ties
  std::size_t worst_index = 0;  // argmax of M, lowest index on ties
};

struct RobustIKResult {
  /// Θ*, present when the best solution satisfies M <= epsilon.
  std::optional<JointVector> best;
  BoundReport report;
};

/// Scores a given solution set against one orientation per solution (the
/// target orientation, or the achieved one for position-only IK).
/// Throws EmptyIKSet when `solutions` is empty.
RobustIKResult select_robust(const KinematicChain& chain, const std::vector<JointVector>& solutions,
                             const std::vector<UnitQuaternion>& orientations,
                             const JointErrorModel& model, const TaskMetric& metric);

/// IK followed by selection. Uses ik_req.target as the desired pose.
RobustIKResult robust_ik(const KinematicChain& chain, const JointErrorModel& model,
                         const TaskMetric& metric, const IKRequest& ik_req);

}  // namespace robustik
