#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robustik/error.hpp"
#include "robustik/ik_engine.hpp"
#include "robustik/kinematics.hpp"
#include "robustik/montecarlo.hpp"
#include "robustik/robust_select.hpp"

namespace py = pybind11;
using namespace robustik;

namespace {

py::array_t<double> to_numpy(const Mat& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto v = a.mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) v(r, c) = m(r, c);
  return a;
}

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec3(Vec3 v) { return {v.x, v.y, v.z}; }

Pose make_pose(const std::array<double, 3>& p, const std::array<double, 4>& q) {
  return {to_vec3(p), UnitQuaternion::normalized(q)};
}

TaskMetric make_metric(const std::string& mode, std::optional<std::array<double, 3>> direction, double lambda,
                       double epsilon) {
  TaskMetric m;
  m.lambda = lambda;
  m.epsilon = epsilon;
  if (mode == "dir") {
    m.position_mode = AlongDirection{to_vec3(direction.value_or(std::array<double, 3>{0, 1, 0}))};
  } else if (mode == "plane") {
    m.position_mode = OnPlane{plane_basis_from_normal(to_vec3(direction.value_or(std::array<double, 3>{0, 0, 1})))};
  } else if (mode != "full") {
    throw py::value_error("metric must be 'full', 'dir' or 'plane'");
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust inverse kinematics under bounded joint actuation error";

  static py::exception<Error> robust_error(m, "RobustError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(robust_error, e.what());
    }
  });

  py::class_<KinematicChain>(m, "Chain")
      .def_property_readonly("name", &KinematicChain::name)
      .def_property_readonly("dof", &KinematicChain::dof)
      .def_property_readonly("total_length", &KinematicChain::total_length)
      .def_property_readonly("limits",
                             [](const KinematicChain& c) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& j : c.joints()) out.emplace_back(j.limits.lo, j.limits.hi);
                               return out;
                             })
      .def("__eq__", [](const KinematicChain& a, const KinematicChain& b) { return a == b; })
      .def("__repr__", [](const KinematicChain& c) {
        return "<Chain '" + c.name() + "' dof=" + std::to_string(c.dof()) + ">";
      });

  py::class_<JointErrorModel>(m, "ErrorModel")
      .def(py::init<double, double>(), py::arg("sigma") = 0.0045, py::arg("k") = 2.0)
      .def_property_readonly("sigma", &JointErrorModel::sigma)
      .def_property_readonly("k", &JointErrorModel::k)
      .def_property_readonly("c", &JointErrorModel::c);

  py::class_<Pose>(m, "Pose")
      .def(py::init(&make_pose), py::arg("position"), py::arg("quaternion") = std::array<double, 4>{1, 0, 0, 0})
      .def_property_readonly("position", [](const Pose& p) { return from_vec3(p.position); })
      .def_property_readonly("quaternion", [](const Pose& p) { return p.orientation.components(); });

  m.def("load_chain", &load_chain_file, py::arg("path"), "Load a robot-spec JSON file.");
  m.def("save_chain", &save_chain, py::arg("chain"), "Serialize a chain to robot-spec JSON text.");
  m.def("planar3r", &reference::planar3r);
  m.def("desk7", &reference::desk7);

  m.def("fk_pose", [](const KinematicChain& c, std::vector<double> theta) { return fk_pose(c, theta); },
        py::arg("chain"), py::arg("theta"));
  m.def("position_jacobian",
        [](const KinematicChain& c, std::vector<double> theta) { return to_numpy(position_jacobian(c, theta)); },
        py::arg("chain"), py::arg("theta"));
  m.def("rotation_jacobian",
        [](const KinematicChain& c, std::vector<double> theta) { return to_numpy(rotation_jacobian(c, theta)); },
        py::arg("chain"), py::arg("theta"));

  m.def(
      "position_bound",
      [](const KinematicChain& c, std::vector<double> theta, const JointErrorModel& model, const std::string& mode,
         std::optional<std::array<double, 3>> direction) {
        const auto set = PositionErrorSet::from_jacobian(position_jacobian(c, theta), model);
        if (mode == "full") return position_bound_r3(set);
        if (mode == "dir") return position_bound_direction(set, to_vec3(direction.value_or(std::array<double, 3>{0, 1, 0})));
        if (mode == "plane")
          return position_bound_plane(set, plane_basis_from_normal(to_vec3(direction.value_or(std::array<double, 3>{0, 0, 1}))));
        throw py::value_error("mode must be 'full', 'dir' or 'plane'");
      },
      py::arg("chain"), py::arg("theta"), py::arg("model"), py::arg("mode") = "full", py::arg("direction") = py::none());
  m.def(
      "rotation_bound",
      [](const KinematicChain& c, std::vector<double> theta, const JointErrorModel& model) {
        const Pose p = fk_pose(c, theta);
        return rotation_bound(RotationErrorSet::from_jacobian(rotation_jacobian(c, theta), p.orientation, model));
      },
      py::arg("chain"), py::arg("theta"), py::arg("model"));

  m.def(
      "solve_ik",
      [](const KinematicChain& c, const Pose& target, std::size_t count, std::uint64_t seed, bool orientation) {
        IKRequest req;
        req.target = target;
        req.count = count;
        req.seed = seed;
        req.constrain_orientation = orientation;
        return solve_ik(c, req).solutions;
      },
      py::arg("chain"), py::arg("target"), py::arg("count") = 30, py::arg("seed") = 0,
      py::arg("orientation") = true);

  m.def(
      "robust_ik",
      [](const KinematicChain& c, const Pose& target, const JointErrorModel& model, const std::string& metric,
         std::optional<std::array<double, 3>> direction, double lambda, double epsilon, std::size_t count,
         std::uint64_t seed, bool orientation) {
        IKRequest req;
        req.target = target;
        req.count = count;
        req.seed = seed;
        req.constrain_orientation = orientation;
        const auto r = robust_ik(c, model, make_metric(metric, direction, lambda, epsilon), req);
        py::list entries;
        for (const auto& e : r.report.entries) {
          py::dict d;
          d["theta"] = e.theta;
          d["P"] = e.position;
          d["O"] = e.rotation;
          d["M"] = e.combined;
          d["feasible"] = e.feasible;
          d["singular"] = e.singular;
          entries.append(d);
        }
        py::dict out;
        out["best"] = r.best ? py::cast(*r.best) : py::none();
        out["best_index"] = r.report.best_index;
        out["worst_index"] = r.report.worst_index;
        out["entries"] = entries;
        return out;
      },
      py::arg("chain"), py::arg("target"), py::arg("model"), py::arg("metric") = "full",
      py::arg("direction") = py::none(), py::arg("lambda_") = 0.0,
      py::arg("epsilon") = std::numeric_limits<double>::infinity(), py::arg("count") = 30, py::arg("seed") = 0,
      py::arg("orientation") = true);

  m.def(
      "run_trials",
      [](const KinematicChain& c, std::vector<double> theta, const JointErrorModel& model,
         std::array<double, 3> direction, double clearance, std::size_t trials, std::uint64_t seed) {
        Scenario s{DirectionalClearance{to_vec3(direction), clearance}, fk_pose(c, theta), "py"};
        s.validate();
        const auto r = run_trials(c, theta, s, model, trials, seed);
        return py::make_tuple(r.successes, r.trials);
      },
      py::arg("chain"), py::arg("theta"), py::arg("model"), py::arg("direction"), py::arg("clearance"),
      py::arg("trials") = 1000, py::arg("seed") = 0,
      "Directional-clearance Monte Carlo; returns (successes, trials).");

  m.def(
      "wilson_interval",
      [](std::size_t s, std::size_t n, double z) {
        const auto w = wilson_interval(s, n, z);
        return py::make_tuple(w.lo, w.hi);
      },
      py::arg("successes"), py::arg("trials"), py::arg("z") = 3.0);
}
