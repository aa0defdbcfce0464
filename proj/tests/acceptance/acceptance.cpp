// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "robustik/cli.hpp"
#include "robustik/montecarlo.hpp"
#include "robustik/robust_select.hpp"

using namespace robustik;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const JointErrorModel kModel(0.0045, 2.0);
constexpr std::size_t kBoundarySamples = 100000;
// Floating-point slack for "never exceeds": bound and sample are evaluated
// by different code paths, so allow rounding at the 1e-9 relative level.
constexpr double kRoundoff = 1e-9;

const Pose kPregrasp{{0.71305, 0.3786, 0.300}, UnitQuaternion::normalized({0.0086, 0.9992, 0.0370, 0.0155})};
const Pose kPegTarget{{0.6165, 0.077, 0.4025}, UnitQuaternion::normalized({0.6839, 0.7174, 0.0799, -0.1064})};

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

IKRequest ik(const Pose& target, std::uint64_t seed, bool orientation = true) {
  IKRequest r;
  r.target = target;
  r.count = 30;
  r.seed = seed;
  r.constrain_orientation = orientation;
  return r;
}

// ---- 1 -------------------------------------------------------------------
Outcome jacobians() {
  std::mt19937_64 rng(101);
  const KinematicChain chains[] = {reference::planar3r(), reference::desk7()};
  double worst_p = 0, worst_q = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto& c = chains[t % 2];
    const auto th = oracle::random_theta(c, rng);
    worst_p = std::max(worst_p, (position_jacobian(c, th) - oracle::fd_position_jacobian(c, th, 1e-7)).max_abs());
    worst_q = std::max(worst_q, (quat_error_jacobian(c, th) - oracle::fd_quat_jacobian(c, th, 1e-7)).max_abs());
  }
  return {worst_p <= 1e-6 && worst_q <= 1e-6,
          "1000 (chain, theta) pairs, max |J_p - FD| = " + fmt(worst_p) + ", max |dq - FD| = " + fmt(worst_q)};
}

// ---- 2 -------------------------------------------------------------------
Outcome position_bounds() {
  std::mt19937_64 rng(102);
  int violations = 0;
  double worst_r3 = 1.0, worst_dir = 1.0;
  const double r = kModel.radius();
  for (const auto& c : {reference::planar3r(), reference::desk7()}) {
    const auto th = oracle::random_theta(c, rng);
    const Mat jp = oracle::position_jacobian(c, th);
    const auto set = PositionErrorSet::from_jacobian(position_jacobian(c, th), kModel);

    const double b = position_bound_r3(set);
    double best = 0;
    for (std::size_t s = 0; s < kBoundarySamples; ++s) {
      const double e = norm(oracle::image(jp, oracle::boundary_sample(jp, r, s, rng)));
      if (e > b * (1 + kRoundoff)) ++violations;
      best = std::max(best, e);
    }
    worst_r3 = std::min(worst_r3, best / b);

    for (int d = 0; d < 100; ++d) {
      const auto u = oracle::random_sphere(3, 1.0, rng);
      const Vec3 v{u[0], u[1], u[2]};
      const double bd = position_bound_direction(set, v);
      double top = 0;
      for (std::size_t s = 0; s < kBoundarySamples; ++s) {
        const double e = std::abs(dot(v, oracle::image(jp, oracle::boundary_sample(jp, r, s, rng))));
        if (e > bd * (1 + kRoundoff)) ++violations;
        top = std::max(top, e);
      }
      worst_dir = std::min(worst_dir, top / bd);
    }
  }
  return {violations == 0 && worst_r3 >= 0.99 && worst_dir >= 0.99,
          "3R + desk7, 1e5 boundary samples per bound, 100 directions: violations = " + std::to_string(violations) +
              ", worst attained r3 " + fmt(worst_r3) + ", directional " + fmt(worst_dir)};
}

// ---- 3 -------------------------------------------------------------------
Outcome rotation_bounds() {
  std::mt19937_64 rng(103);
  int violations = 0;
  double worst = 1.0;
  for (const auto& c : {reference::planar3r(), reference::desk7()}) {
    for (int k = 0; k < 3; ++k) {
      const auto th = oracle::random_theta(c, rng);
      const Mat jr = oracle::rotation_jacobian(c, th);
      const auto qd = oracle::fk_quat(c, th);
      const double b =
          rotation_bound(RotationErrorSet::from_jacobian(rotation_jacobian(c, th), fk_pose(c, th).orientation, kModel));
      double best = 0;
      for (std::size_t s = 0; s < kBoundarySamples; ++s) {
        const double a = oracle::linear_rotation_angle(qd, jr, oracle::boundary_sample(jr, kModel.radius(), s, rng));
        if (a > b * (1 + kRoundoff)) ++violations;
        best = std::max(best, a);
      }
      worst = std::min(worst, best / b);
    }
  }
  return {violations == 0 && worst >= 0.99,
          "3R + desk7, 3 configurations each, 1e5 boundary samples: violations = " + std::to_string(violations) +
              ", worst attained " + fmt(worst)};
}

// ---- 4 -------------------------------------------------------------------
Outcome planar_reproduction() {
  const auto p = reference::planar3r();
  const JointErrorModel ball(0.0025, 2.0);  // radius 0.005
  TaskMetric tm;
  tm.position_mode = AlongDirection{{0, 1, 0}};
  const auto r = robust_ik(p, ball, tm, ik({{1.2, 0.8, 0.0}, {}}, 0, false));
  const auto& e = r.report.entries;
  std::mt19937_64 rng(104);
  std::vector<double> oracle_y;
  double lo = 1e300, hi = 0;
  for (const auto& s : e) {
    oracle_y.push_back(oracle::directional_max(oracle::position_jacobian(p, s.theta), {0, 1, 0}, ball.radius(), 20000, rng));
    lo = std::min(lo, oracle_y.back());
    hi = std::max(hi, oracle_y.back());
  }
  const auto argmin = static_cast<std::size_t>(std::min_element(oracle_y.begin(), oracle_y.end()) - oracle_y.begin());
  const double spread = (hi - lo) / lo;
  const bool ok = e.size() >= 4 && spread >= 0.20 && r.best && argmin == r.report.best_index;
  return {ok, std::to_string(e.size()) + " IK solutions, y-bound range [" + fmt(lo) + ", " + fmt(hi) + "] m (spread " +
                  fmt(100 * spread, 4) + "%), selected " + std::to_string(r.report.best_index) + ", oracle argmin " +
                  std::to_string(argmin)};
}

// ---- 5 -------------------------------------------------------------------
Outcome filter_semantics() {
  const std::string robot = std::string(ROBUSTIK_DATA_DIR) + "/desk7.json";
  const std::vector<std::string> base{"--robot", robot, "--target-pos", "0.71305,0.3786,0.300", "--target-quat",
                                      "0.0086,0.9992,0.0370,0.0155", "--metric", "dir", "--seed", "1"};
  auto call = [&](const std::string& cmd, std::vector<std::string> extra, std::string& out) {
    std::vector<std::string> a{cmd};
    a.insert(a.end(), base.begin(), base.end());
    a.insert(a.end(), extra.begin(), extra.end());
    std::ostringstream o, err;
    const int code = cli::run(a, o, err);
    out = o.str();
    return code;
  };

  std::string csv;
  if (call("bounds", {}, csv) != 0) return {false, "bounds failed"};
  // Smallest M in the report, and its joint vector as printed by the report.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  double min_m = 1e300;
  std::string min_theta;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    const double m = std::stod(cells[cells.size() - 2]);
    if (m < min_m) {
      min_m = m;
      min_theta.clear();
      for (std::size_t i = 1; i + 4 < cells.size(); ++i) min_theta += (i > 1 ? "," : "") + cells[i];
    }
  }

  std::string below, above, again;
  const int code_below = call("select", {"--epsilon", fmt(min_m * 0.99, 17)}, below);
  const int code_above = call("select", {"--epsilon", fmt(min_m * 1.01, 17)}, above);
  const int code_again = call("select", {"--epsilon", fmt(min_m * 1.01, 17)}, again);
  const bool printed = above.find("theta* = " + min_theta + "\n") != std::string::npos;
  const bool ok = code_below == cli::kNoRobustIK && below.find("no robust IK within epsilon") != std::string::npos &&
                  code_above == cli::kOk && printed && code_again == code_above && again == above;
  return {ok, "min M = " + fmt(min_m) + " m; eps = 0.99 min M -> exit " + std::to_string(code_below) +
                  ", eps = 1.01 min M -> exit " + std::to_string(code_above) + (printed ? " with argmin" : " WRONG theta") +
                  (again == above ? ", repeat run identical" : ", repeat run differs")};
}

// Shared by 6 and 7: monotone within 3 binomial sigma, pairwise ordering.
double sigma_of(const TrialResult& r) { return binomial_sigma(r); }

bool monotone(const std::vector<TrialResult>& by_clearance_ascending) {
  for (std::size_t i = 1; i < by_clearance_ascending.size(); ++i) {
    const auto& a = by_clearance_ascending[i - 1];
    const auto& b = by_clearance_ascending[i];
    if (b.rate < a.rate - 3.0 * std::max(sigma_of(a), sigma_of(b))) return false;
  }
  return true;
}

std::string curve(const std::vector<TrialResult>& v) {
  std::string s;
  for (const auto& r : v) s += (s.empty() ? "" : " ") + fmt(100 * r.rate, 3);
  return s;
}

// ---- 6 -------------------------------------------------------------------
Outcome success_rates() {
  const auto d = reference::desk7();
  TaskMetric tm;
  tm.position_mode = AlongDirection{{0, 1, 0}};
  const auto r = robust_ik(d, kModel, tm, ik(kPregrasp, 1));
  const auto& best = r.report.entries[r.report.best_index].theta;
  const auto& worst = r.report.entries[r.report.worst_index].theta;
  std::vector<Scenario> grid;
  for (int mm10 = 35; mm10 <= 70; mm10 += 5) grid.push_back({DirectionalClearance{{0, 1, 0}, mm10 * 1e-4}, kPregrasp, ""});
  const auto rows = sweep(d, {best, worst}, grid, kModel, 1000, 7);
  std::vector<TrialResult> b, w;
  for (const auto& row : rows) (row.solution_index == 0 ? b : w).push_back(row.result);

  bool ordered = true, separated = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (b[i].rate < w[i].rate - 3.0 * std::max(sigma_of(b[i]), sigma_of(w[i]))) ordered = false;
    if (b[i].rate > 0.8 && !(w[i].rate > 0.8)) separated = true;
  }
  const bool mono = monotone(b) && monotone(w);
  return {ordered && mono && separated,
          "clearance 3.5..7 mm, 1000 trials: best% [" + curve(b) + "], worst% [" + curve(w) + "]; (a) " +
              (ordered ? "ok" : "fail") + ", (b) " + (mono ? "ok" : "fail") + ", (c) " + (separated ? "ok" : "fail")};
}

// ---- 7 -------------------------------------------------------------------
Outcome peg_in_hole() {
  const double lp = 0.10;
  std::mt19937_64 rng(107);
  std::normal_distribution<double> g(0.0, 0.02);
  int broken = 0;
  const auto d = reference::desk7();
  for (int t = 0; t < 10000; ++t) {
    const auto th = oracle::random_theta(d, rng);
    const Pose desired = fk_pose(d, th);
    JointVector moved = th;
    for (double& x : moved) x += 5 * g(rng);
    const Pose realized = fk_pose(d, moved);
    if (!(peg_tip_error(realized, desired, lp) <= peg_tip_error_bound(realized, desired, lp))) ++broken;
  }

  TaskMetric tm;
  tm.lambda = lp;
  const auto r = robust_ik(d, kModel, tm, ik(kPegTarget, 1));
  const auto& best = r.report.entries[r.report.best_index].theta;
  const auto& worst = r.report.entries[r.report.worst_index].theta;
  std::vector<Scenario> grid;  // ascending clearance: d_P from 18 down to 4 mm
  for (int dp = 18; dp >= 4; --dp) grid.push_back({PegInHole{lp, 0.024, dp * 1e-3}, kPegTarget, ""});
  const auto rows = sweep(d, {best, worst}, grid, kModel, 1000, 7);
  std::vector<TrialResult> b, w;
  for (const auto& row : rows) (row.solution_index == 0 ? b : w).push_back(row.result);
  const bool mono = monotone(b) && monotone(w);
  return {broken == 0 && mono, "tip error <= bound on 10000 poses (" + std::to_string(broken) +
                                   " broken); d_P 18..4 mm best% [" + curve(b) + "], worst% [" + curve(w) + "], " +
                                   (mono ? "monotone" : "NOT monotone")};
}

// ---- 8 -------------------------------------------------------------------
Outcome linearization() {
  const auto d = reference::desk7();
  TaskMetric tm;
  tm.position_mode = AlongDirection{{0, 1, 0}};
  const auto r = robust_ik(d, kModel, tm, ik(kPregrasp, 1));
  std::size_t in_ball = 0, exceed = 0;
  for (const auto& e : r.report.entries) {
    const auto a = audit_linearization(d, e.theta, {0, 1, 0}, kModel, 10000, 8);
    in_ball += a.in_ball;
    exceed += a.exceed;
  }
  const double fraction = in_ball == 0 ? 1.0 : static_cast<double>(exceed) / static_cast<double>(in_ball);
  return {in_ball > 0 && fraction < 0.01, "desk7 pre-grasp, all " + std::to_string(r.report.entries.size()) +
                                              " solutions: " + std::to_string(exceed) + " of " +
                                              std::to_string(in_ball) + " in-ball trials exceed the directional bound (" +
                                              fmt(100 * fraction, 4) + "%)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime requirement
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "jacobian_finite_difference", 10, jacobians},
      {2, "position_bound_soundness_tightness", 30, position_bounds},
      {3, "rotation_bound_soundness_tightness", 30, rotation_bounds},
      {4, "planar3r_directional_ordering", 0, planar_reproduction},
      {5, "select_filter_semantics", 0, filter_semantics},
      {6, "success_rate_best_vs_worst", 120, success_rates},
      {7, "peg_in_hole_metric", 0, peg_in_hole},
      {8, "linearization_residual_audit", 0, linearization},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] criterion %d %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget_s > 0 ? (in_time ? " (within budget)" : " (OVER budget)") : "");
    std::fflush(stdout);
  }
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
