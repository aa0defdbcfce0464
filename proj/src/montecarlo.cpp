#include "robustik/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "robustik/error.hpp"

namespace robustik {

void Scenario::validate() const {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DirectionalClearance>) {
          if (!(k.clearance > 0.0)) throw Error(ErrorKind::Validation, "clearance must be > 0");
          if (std::abs(norm(k.direction) - 1.0) > 1e-9) {
            throw Error(ErrorKind::NonUnitDirection, "clearance direction must be unit length");
          }
        } else {
          if (!(k.hole_diameter > k.peg_diameter)) throw Error(ErrorKind::Validation, "hole must be wider than peg");
          if (!(k.peg_length >= 0.0)) throw Error(ErrorKind::Validation, "peg length must be >= 0");
        }
      },
      kind);
}

double Scenario::clearance() const {
  if (const auto* d = std::get_if<DirectionalClearance>(&kind)) return d->clearance;
  const auto& p = std::get<PegInHole>(kind);
  return 0.5 * (p.hole_diameter - p.peg_diameter);
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double binomial_sigma(const TrialResult& r) {
  if (r.trials == 0) return 0.0;
  return std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(r.trials));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t scenario_index, std::uint64_t trial_index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ scenario_index) ^ trial_index);
}

JointVector sample_joint_error(const JointErrorModel& model, std::size_t n, std::mt19937_64& rng) {
  JointVector d(n, 0.0);
  if (model.sigma() == 0.0) return d;
  std::normal_distribution<double> gauss(0.0, model.sigma());
  for (double& x : d) x = gauss(rng);
  return d;
}

double peg_tip_error(const Pose& realized, const Pose& desired, double peg_length) {
  const Vec3 z = realized.orientation.rotate({0, 0, 1});
  const Vec3 zd = desired.orientation.rotate({0, 0, 1});
  return norm((realized.position - desired.position) + peg_length * (z - zd));
}

double peg_tip_error_bound(const Pose& realized, const Pose& desired, double peg_length) {
  const Vec3 z = realized.orientation.rotate({0, 0, 1});
  const Vec3 zd = desired.orientation.rotate({0, 0, 1});
  const double theta_z = std::atan2(norm(cross(z, zd)), dot(z, zd));
  return norm(realized.position - desired.position) + peg_length * theta_z;
}

namespace {

bool trial_succeeds(const Scenario& scenario, const Pose& realized) {
  if (const auto* d = std::get_if<DirectionalClearance>(&scenario.kind)) {
    return std::abs(dot(d->direction, realized.position - scenario.target.position)) <= d->clearance;
  }
  const auto& peg = std::get<PegInHole>(scenario.kind);
  return peg_tip_error_bound(realized, scenario.target, peg.peg_length) <= scenario.clearance();
}

}  // namespace

TrialResult run_trials(const KinematicChain& chain, std::span<const double> theta, const Scenario& scenario,
                       const JointErrorModel& model, std::size_t trials, std::uint64_t rng_seed,
                       std::size_t scenario_index) {
  scenario.validate();
  if (theta.size() != chain.dof()) throw Error(ErrorKind::LengthMismatch, "run_trials joint vector");

  TrialResult r;
  r.trials = trials;
  r.rng_seed = rng_seed;
  JointVector perturbed(theta.size());
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(trial_stream_seed(rng_seed, scenario_index, t));
    const JointVector delta = sample_joint_error(model, theta.size(), rng);
    for (std::size_t i = 0; i < theta.size(); ++i) perturbed[i] = theta[i] + delta[i];
    if (trial_succeeds(scenario, fk_pose(chain, perturbed))) ++r.successes;
  }
  r.rate = trials == 0 ? 0.0 : static_cast<double>(r.successes) / static_cast<double>(trials);
  return r;
}

std::vector<SweepRow> sweep(const KinematicChain& chain, const std::vector<JointVector>& solutions,
                            const std::vector<Scenario>& scenarios, const JointErrorModel& model,
                            std::size_t trials, std::uint64_t seed) {
  if (solutions.empty() || scenarios.empty()) throw Error(ErrorKind::Validation, "sweep needs solutions and scenarios");
  std::vector<SweepRow> rows;
  rows.reserve(solutions.size() * scenarios.size());
  for (std::size_t s = 0; s < solutions.size(); ++s) {
    for (std::size_t c = 0; c < scenarios.size(); ++c) {
      rows.push_back({s, c, scenarios[c].id, scenarios[c].clearance(),
                      run_trials(chain, solutions[s], scenarios[c], model, trials, seed, c)});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "solution_index,scenario_id,clearance_m,trials,successes,rate,wilson_lo,wilson_hi\n";
  for (const auto& row : rows) {
    const auto w = wilson_interval(row.result.successes, row.result.trials, 3.0);
    out << row.solution_index << ',' << row.scenario_id << ',' << row.clearance << ',' << row.result.trials << ','
        << row.result.successes << ',' << row.result.rate << ',' << w.lo << ',' << w.hi << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

LinearizationAudit audit_linearization(const KinematicChain& chain, std::span<const double> theta, Vec3 direction,
                                       const JointErrorModel& model, std::size_t trials, std::uint64_t seed) {
  const Pose nominal = fk_pose(chain, theta);
  const double bound =
      position_bound_direction(PositionErrorSet::from_jacobian(position_jacobian(chain, theta), model), direction);
  LinearizationAudit audit;
  audit.trials = trials;
  JointVector perturbed(theta.size());
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(trial_stream_seed(seed, 0, t));
    const JointVector delta = sample_joint_error(model, theta.size(), rng);
    if (!joint_ball_contains(delta, model)) continue;
    ++audit.in_ball;
    for (std::size_t i = 0; i < theta.size(); ++i) perturbed[i] = theta[i] + delta[i];
    const double err = std::abs(dot(direction, fk_pose(chain, perturbed).position - nominal.position));
    if (err > bound) ++audit.exceed;
  }
  return audit;
}

}  // namespace robustik
