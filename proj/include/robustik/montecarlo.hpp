#pragma once

// Monte Carlo validation of the error bounds: joint errors are drawn from the
// Gaussian model, pushed through the full nonlinear forward kinematics, and
// scored against scenario-specific success tests.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "robustik/kinematics.hpp"
#include "robustik/uncertainty.hpp"

namespace robustik {

/// Success when |vᵀ(p − p_d)| <= clearance (pre-grasp along one axis).
struct DirectionalClearance {
  Vec3 direction;
  double clearance;
};

/// Success when ‖p − p_d‖ + l_p·θ_z <= (hole − peg)/2, with θ_z the angle
/// between realized and desired tool z axes.
struct PegInHole {
  double peg_length;
  double hole_diameter;
  double peg_diameter;
};

struct Scenario {
  std::variant<DirectionalClearance, PegInHole> kind;
  Pose target;
  std::string id;

  /// Throws Validation on clearance <= 0 or hole <= peg.
  void validate() const;
  double clearance() const;
};

struct TrialResult {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  std::uint64_t rng_seed = 0;
};

struct WilsonInterval {
  double lo;
  double hi;
};

/// Wilson score interval with z standard deviations.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z);

/// Binomial standard deviation sqrt(p(1−p)/n) of an observed rate.
double binomial_sigma(const TrialResult& r);

/// Seed of the counter-based stream for one trial. Independent of the
/// solution index so different solutions see common random numbers.
std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t scenario_index, std::uint64_t trial_index);

/// n i.i.d. N(0, sigma²) draws; not truncated to the error ball.
JointVector sample_joint_error(const JointErrorModel& model, std::size_t n, std::mt19937_64& rng);

/// Exact peg-tip position error ‖(p − p_d) + l_p (z − z_d)‖.
double peg_tip_error(const Pose& realized, const Pose& desired, double peg_length);
/// Its upper bound ‖p − p_d‖ + l_p·θ_z used as the success functional.
double peg_tip_error_bound(const Pose& realized, const Pose& desired, double peg_length);

TrialResult run_trials(const KinematicChain& chain, std::span<const double> theta, const Scenario& scenario,
                       const JointErrorModel& model, std::size_t trials, std::uint64_t rng_seed,
                       std::size_t scenario_index = 0);

struct SweepRow {
  std::size_t solution_index;
  std::size_t scenario_index;
  std::string scenario_id;
  double clearance;
  TrialResult result;
};

/// Every (solution, scenario) pair, row-major by solution.
std::vector<SweepRow> sweep(const KinematicChain& chain, const std::vector<JointVector>& solutions,
                            const std::vector<Scenario>& scenarios, const JointErrorModel& model,
                            std::size_t trials, std::uint64_t seed);

/// CSV with header solution_index,scenario_id,clearance_m,trials,successes,rate,wilson_lo,wilson_hi.
/// Wilson bounds use z = 3.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Fraction of in-ball trials (‖δΘ‖² <= c) whose nonlinear error along
/// `direction` exceeds the linearized directional bound.
struct LinearizationAudit {
  std::size_t trials = 0;
  std::size_t in_ball = 0;
  std::size_t exceed = 0;
  double fraction() const { return in_ball == 0 ? 0.0 : static_cast<double>(exceed) / static_cast<double>(in_ball); }
};

LinearizationAudit audit_linearization(const KinematicChain& chain, std::span<const double> theta, Vec3 direction,
                                       const JointErrorModel& model, std::size_t trials, std::uint64_t seed);

}  // namespace robustik
