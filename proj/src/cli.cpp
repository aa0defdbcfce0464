#include "robustik/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "robustik/error.hpp"
#include "robustik/montecarlo.hpp"
#include "robustik/robust_select.hpp"
#include "robustik/validation.hpp"

namespace robustik::cli {

namespace {

struct RunConfig {
  std::string robot;
  std::vector<double> target_pos;
  std::vector<double> target_quat;
  double sigma = 0.0045;
  double k = 2.0;
  double lambda = 0.0;
  double epsilon = std::numeric_limits<double>::infinity();
  std::string metric = "full";
  std::vector<double> direction{0.0, 1.0, 0.0};
  std::size_t ik_count = 30;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::string out;

  // sweep
  std::string scenario = "clearance";
  std::vector<double> clearances;
  double gripper_opening = 0.072;
  std::vector<double> block_widths;
  double peg_length = 0.10;
  double hole_diameter = 0.024;
  std::vector<double> peg_diameters;
  std::string solutions = "best-worst";
};

/// Thrown for user-facing input problems; maps to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--robot", cfg.robot, "Robot-spec file (JSON)")->required();
  sub.add_option("--sigma", cfg.sigma, "Joint error standard deviation [rad]")->capture_default_str();
  sub.add_option("--k", cfg.k, "Confidence multiplier; ball radius is k*sigma")->capture_default_str();
  sub.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sub.add_option("--trials", cfg.trials, "Monte Carlo trials per (solution, scenario); used by sweep")
      ->capture_default_str();
  sub.add_option("--out", cfg.out, "Output file (default: stdout)");
}

void add_task(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--target-pos", cfg.target_pos, "Target position x,y,z [m]")
      ->delimiter(',')
      ->expected(3)
      ->required();
  sub.add_option("--target-quat", cfg.target_quat,
                 "Target orientation eta,ex,ey,ez; omit for position-only IK")
      ->delimiter(',')
      ->expected(4);
  sub.add_option("--lambda", cfg.lambda, "Rotation weight [m/rad]")->capture_default_str();
  sub.add_option("--epsilon", cfg.epsilon, "Tolerance on M = P + lambda*O");
  sub.add_option("--metric", cfg.metric, "Position bound: full | dir | plane")
      ->check(CLI::IsMember({"full", "dir", "plane"}))
      ->capture_default_str();
  sub.add_option("--direction", cfg.direction, "Direction (dir) or plane normal (plane) x,y,z")
      ->delimiter(',')
      ->expected(3);
  sub.add_option("--ik-count", cfg.ik_count, "Number of IK solutions M")->capture_default_str();
}

Vec3 to_vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

Pose target_pose(const RunConfig& cfg, std::ostream& err) {
  Pose p;
  p.position = to_vec3(cfg.target_pos);
  if (!cfg.target_quat.empty()) {
    const auto& q = cfg.target_quat;
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    if (!(n > 0.0) || !std::isfinite(n)) throw InputError("--target-quat must be a non-zero quaternion");
    if (std::abs(n - 1.0) > 1e-6) {
      err << "warning: --target-quat has norm " << std::setprecision(17) << n << "; normalizing\n";
    }
    p.orientation = UnitQuaternion::normalized({q[0], q[1], q[2], q[3]});
  }
  return p;
}

TaskMetric task_metric(const RunConfig& cfg) {
  TaskMetric m;
  m.lambda = cfg.lambda;
  m.epsilon = cfg.epsilon;
  if (cfg.metric == "dir") {
    Vec3 v = to_vec3(cfg.direction);
    const double n = norm(v);
    if (!(n > 0.0)) throw InputError("--direction must be non-zero");
    m.position_mode = AlongDirection{(1.0 / n) * v};
  } else if (cfg.metric == "plane") {
    m.position_mode = OnPlane{plane_basis_from_normal(to_vec3(cfg.direction))};
  }
  return m;
}

IKRequest ik_request(const RunConfig& cfg, const Pose& target) {
  IKRequest req;
  req.target = target;
  req.count = cfg.ik_count;
  req.seed = cfg.seed;
  req.constrain_orientation = !cfg.target_quat.empty();
  return req;
}

/// Output sink: the --out file when given, otherwise `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_report_csv(std::ostream& out, const BoundReport& report) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  const std::size_t n = report.entries.empty() ? 0 : report.entries.front().theta.size();
  out << "index";
  for (std::size_t j = 0; j < n; ++j) out << ",theta_" << j;
  out << ",P,O,M,feasible\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    out << i;
    for (double t : e.theta) out << ',' << t;
    out << ',' << e.position << ',' << e.rotation << ',' << e.combined << ',' << (e.feasible ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

std::string joint_list(const JointVector& theta) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  for (std::size_t i = 0; i < theta.size(); ++i) ss << (i ? "," : "") << theta[i];
  return ss.str();
}

RobustIKResult solve_and_score(const RunConfig& cfg, const KinematicChain& chain, std::ostream& err) {
  const Pose target = target_pose(cfg, err);
  return robust_ik(chain, JointErrorModel(cfg.sigma, cfg.k), task_metric(cfg), ik_request(cfg, target));
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const KinematicChain chain = load_chain_file(cfg.robot);
  const RobustIKResult r = solve_and_score(cfg, chain, err);
  Sink sink(cfg.out, out);
  write_report_csv(sink.get(), r.report);
  if (sink.is_file()) {
    out << "solutions: " << r.report.entries.size() << ", best: " << r.report.best_index
        << ", worst: " << r.report.worst_index << '\n';
  }
  return kOk;
}

int cmd_select(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const KinematicChain chain = load_chain_file(cfg.robot);
  const RobustIKResult r = solve_and_score(cfg, chain, err);
  const auto& best = r.report.entries[r.report.best_index];
  if (r.best) {
    out << "robust IK: index " << r.report.best_index << ", M = " << std::setprecision(17) << best.combined << '\n';
    out << "theta* = " << joint_list(*r.best) << '\n';
  } else {
    out << "no robust IK within epsilon (min M = " << std::setprecision(17) << best.combined
        << " at index " << r.report.best_index << ")\n";
  }
  Sink sink(cfg.out, out);
  write_report_csv(sink.get(), r.report);
  return r.best ? kOk : kNoRobustIK;
}

std::vector<Scenario> build_scenarios(const RunConfig& cfg, const Pose& target) {
  std::vector<Scenario> scenarios;
  auto label = [](const char* prefix, double v) {
    std::ostringstream ss;
    ss << prefix << std::setprecision(6) << v;
    return ss.str();
  };
  if (cfg.scenario == "clearance") {
    Vec3 v = to_vec3(cfg.direction);
    const double n = norm(v);
    if (!(n > 0.0)) throw InputError("--direction must be non-zero");
    v = (1.0 / n) * v;
    for (double c : cfg.clearances) {
      scenarios.push_back({DirectionalClearance{v, c}, target, label("clearance_", c)});
    }
    for (double w : cfg.block_widths) {
      scenarios.push_back({DirectionalClearance{v, 0.5 * (cfg.gripper_opening - w)}, target, label("block_w_", w)});
    }
  } else {
    for (double d : cfg.peg_diameters) {
      scenarios.push_back({PegInHole{cfg.peg_length, cfg.hole_diameter, d}, target, label("peg_d_", d)});
    }
  }
  if (scenarios.empty()) {
    throw InputError("sweep needs --clearances/--block-widths (clearance) or --peg-diameters (peg)");
  }
  for (const auto& s : scenarios) s.validate();
  return scenarios;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const KinematicChain chain = load_chain_file(cfg.robot);
  const Pose target = target_pose(cfg, err);
  const JointErrorModel model(cfg.sigma, cfg.k);
  const auto scenarios = build_scenarios(cfg, target);
  const RobustIKResult r = robust_ik(chain, model, task_metric(cfg), ik_request(cfg, target));

  std::vector<std::size_t> picked;
  if (cfg.solutions == "all") {
    for (std::size_t i = 0; i < r.report.entries.size(); ++i) picked.push_back(i);
  } else if (cfg.solutions == "best") {
    picked = {r.report.best_index};
  } else {
    picked = {r.report.best_index};
    if (r.report.worst_index != r.report.best_index) picked.push_back(r.report.worst_index);
  }
  std::vector<JointVector> thetas;
  for (std::size_t i : picked) thetas.push_back(r.report.entries[i].theta);

  auto rows = sweep(chain, thetas, scenarios, model, cfg.trials, cfg.seed);
  for (auto& row : rows) row.solution_index = picked[row.solution_index];
  Sink sink(cfg.out, out);
  write_sweep_csv(sink.get(), rows);

  if (cfg.scenario == "clearance") {
    const Vec3 v = std::get<DirectionalClearance>(scenarios.front().kind).direction;
    for (std::size_t i : picked) {
      const auto audit = audit_linearization(chain, r.report.entries[i].theta, v, model, cfg.trials, cfg.seed);
      err << "linearization audit: solution " << i << ", in-ball trials " << audit.in_ball
          << ", exceeding directional bound " << audit.exceed << ", fraction " << audit.fraction() << '\n';
    }
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const KinematicChain chain = load_chain_file(cfg.robot);
  const auto checks = run_validation(chain, JointErrorModel(cfg.sigma, cfg.k), cfg.seed);
  Sink sink(cfg.out, out);
  bool all = true;
  for (const auto& c : checks) {
    sink.get() << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Robust inverse kinematics under bounded joint actuation error", "robustik"};
  app.set_config("--config", "", "Optional TOML/INI config; command-line flags take precedence");
  app.require_subcommand(1);

  auto* bounds = app.add_subcommand("bounds", "Per-IK-solution error bounds P, O, M");
  add_common(*bounds, cfg);
  add_task(*bounds, cfg);

  auto* select = app.add_subcommand("select", "Robust IK: argmin of M subject to M <= epsilon");
  add_common(*select, cfg);
  add_task(*select, cfg);

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo success rates over a clearance grid");
  add_common(*sweep_cmd, cfg);
  add_task(*sweep_cmd, cfg);
  sweep_cmd->add_option("--scenario", cfg.scenario, "clearance | peg")
      ->check(CLI::IsMember({"clearance", "peg"}))
      ->capture_default_str();
  sweep_cmd->add_option("--clearances", cfg.clearances, "Clearances [m]")->delimiter(',');
  sweep_cmd->add_option("--gripper-opening", cfg.gripper_opening, "Gripper opening [m]")->capture_default_str();
  sweep_cmd->add_option("--block-widths", cfg.block_widths, "Block widths [m]; clearance = (opening - W)/2")
      ->delimiter(',');
  sweep_cmd->add_option("--peg-length", cfg.peg_length, "Peg length l_p [m]")->capture_default_str();
  sweep_cmd->add_option("--hole-diameter", cfg.hole_diameter, "Hole diameter [m]")->capture_default_str();
  sweep_cmd->add_option("--peg-diameters", cfg.peg_diameters, "Peg diameters [m]")->delimiter(',');
  sweep_cmd->add_option("--solutions", cfg.solutions, "best | best-worst | all")
      ->check(CLI::IsMember({"best", "best-worst", "all"}))
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Run oracle self-checks on a robot spec");
  add_common(*validate, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(cfg, out, err);
    if (select->parsed()) return cmd_select(cfg, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    return cmd_validate(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::EmptyIKSet ? kUnreachable : kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace robustik::cli
