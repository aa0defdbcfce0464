#include "robustik/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "robustik/error.hpp"

namespace robustik {

namespace {

constexpr double kAxisTolerance = 1e-9;

void validate_joint(const JointSpec& j, std::size_t index) {
  const std::string where = "joints[" + std::to_string(index) + "]";
  const double n = norm(j.axis);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kAxisTolerance) {
    throw Error(ErrorKind::Validation, where + ".axis is not unit length");
  }
  if (!(j.limits.lo < j.limits.hi)) {
    throw Error(ErrorKind::Validation, where + ".limits require lo < hi");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(j.origin[i])) throw Error(ErrorKind::Validation, where + ".origin is not finite");
  }
}

}  // namespace

KinematicChain::KinematicChain(std::string name, std::vector<JointSpec> joints,
                               RigidTransform tool_offset)
    : name_(std::move(name)), joints_(std::move(joints)), tool_offset_(tool_offset) {
  if (joints_.empty()) throw Error(ErrorKind::Validation, "chain needs at least one joint");
  for (std::size_t i = 0; i < joints_.size(); ++i) validate_joint(joints_[i], i);
}

double KinematicChain::total_length() const noexcept {
  double sum = norm(tool_offset_.origin);
  for (const auto& j : joints_) sum += norm(j.origin);
  return sum;
}

bool KinematicChain::within_limits(std::span<const double> theta) const {
  if (theta.size() != joints_.size()) return false;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] < joints_[i].limits.lo || theta[i] > joints_[i].limits.hi) return false;
  }
  return true;
}

JointVector KinematicChain::clamp_to_limits(JointVector theta) const {
  if (theta.size() != joints_.size()) throw Error(ErrorKind::LengthMismatch, "clamp_to_limits");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = std::clamp(theta[i], joints_[i].limits.lo, joints_[i].limits.hi);
  }
  return theta;
}

bool operator==(const KinematicChain& a, const KinematicChain& b) {
  if (a.name_ != b.name_ || a.joints_.size() != b.joints_.size()) return false;
  for (std::size_t i = 0; i < a.joints_.size(); ++i) {
    const auto& x = a.joints_[i];
    const auto& y = b.joints_[i];
    if (!(x.axis == y.axis) || !(x.origin == y.origin) || x.limits.lo != y.limits.lo ||
        x.limits.hi != y.limits.hi) {
      return false;
    }
  }
  return a.tool_offset_.origin == b.tool_offset_.origin &&
         a.tool_offset_.rotation == b.tool_offset_.rotation;
}

// ---------------------------------------------------------------------------
// Robot-spec documents

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Best-effort line of the first occurrence of `"key"`, for messages.
std::size_t line_of_key(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 0 : line_of(text, pos);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what,
                         const std::string& key_hint = {}) const {
    throw ParseError(field, key_hint.empty() ? 0 : line_of_key(text_, key_hint), what);
  }

  void require_keys(const json& obj, const std::string& field, const std::set<std::string>& allowed,
                    const std::set<std::string>& required) const {
    if (!obj.is_object()) fail(field, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) {
        const std::string path = field.empty() ? key : field + "." + key;
        fail(path, "unknown key", key);
      }
    }
    for (const auto& key : required) {
      if (!obj.contains(key)) fail(field.empty() ? key : field + "." + key, "missing required key");
    }
  }

  double number(const json& v, const std::string& field, const std::string& key) const {
    if (!v.is_number()) fail(field, "expected a number", key);
    return v.get<double>();
  }

  Vec3 vec3(const json& v, const std::string& field, const std::string& key) const {
    if (!v.is_array() || v.size() != 3) fail(field, "expected an array of 3 numbers", key);
    return {number(v[0], field, key), number(v[1], field, key), number(v[2], field, key)};
  }

  std::string text(const json& v, const std::string& field, const std::string& key) const {
    if (!v.is_string()) fail(field, "expected a string", key);
    return v.get<std::string>();
  }

 private:
  std::string_view text_;
};

}  // namespace

KinematicChain load_chain(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  const Reader rd(text);
  rd.require_keys(doc, "", {"name", "units", "joints", "tool_offset"}, {"name", "units", "joints"});

  const std::string name = rd.text(doc["name"], "name", "name");

  const json& units = doc["units"];
  rd.require_keys(units, "units", {"length", "angle"}, {"length", "angle"});
  if (rd.text(units["length"], "units.length", "length") != "meters") {
    rd.fail("units.length", "only \"meters\" is supported", "length");
  }
  if (rd.text(units["angle"], "units.angle", "angle") != "radians") {
    rd.fail("units.angle", "only \"radians\" is supported", "angle");
  }

  const json& jl = doc["joints"];
  if (!jl.is_array()) rd.fail("joints", "expected an array", "joints");
  std::vector<JointSpec> joints;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string field = "joints[" + std::to_string(i) + "]";
    const json& j = jl[i];
    rd.require_keys(j, field, {"axis", "origin", "limits"}, {"axis", "origin", "limits"});
    JointSpec spec{};
    spec.axis = rd.vec3(j["axis"], field + ".axis", "axis");
    spec.origin = rd.vec3(j["origin"], field + ".origin", "origin");
    const json& lim = j["limits"];
    if (!lim.is_array() || lim.size() != 2) rd.fail(field + ".limits", "expected [lo, hi]", "limits");
    spec.limits = {rd.number(lim[0], field + ".limits", "limits"), rd.number(lim[1], field + ".limits", "limits")};
    joints.push_back(spec);
  }

  RigidTransform tool{};
  if (doc.contains("tool_offset")) {
    const json& t = doc["tool_offset"];
    rd.require_keys(t, "tool_offset", {"origin", "quaternion"}, {"origin", "quaternion"});
    tool.origin = rd.vec3(t["origin"], "tool_offset.origin", "origin");
    const json& q = t["quaternion"];
    if (!q.is_array() || q.size() != 4) {
      rd.fail("tool_offset.quaternion", "expected [eta, ex, ey, ez]", "quaternion");
    }
    std::array<double, 4> c{};
    for (std::size_t i = 0; i < 4; ++i) c[i] = rd.number(q[i], "tool_offset.quaternion", "quaternion");
    const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
    if (std::abs(n - 1.0) > kAxisTolerance) {
      throw Error(ErrorKind::Validation, "tool_offset.quaternion is not unit length");
    }
    tool.rotation = UnitQuaternion::normalized(c);
  }

  return KinematicChain(name, std::move(joints), tool);
}

KinematicChain load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", 0, "cannot open robot file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_chain(ss.str());
}

std::string save_chain(const KinematicChain& chain) {
  auto arr3 = [](Vec3 v) { return ordered_json::array({v.x, v.y, v.z}); };
  ordered_json doc;
  doc["name"] = chain.name();
  doc["units"] = {{"length", "meters"}, {"angle", "radians"}};
  ordered_json joints = ordered_json::array();
  for (const auto& j : chain.joints()) {
    ordered_json o;
    o["axis"] = arr3(j.axis);
    o["origin"] = arr3(j.origin);
    o["limits"] = ordered_json::array({j.limits.lo, j.limits.hi});
    joints.push_back(std::move(o));
  }
  doc["joints"] = std::move(joints);
  const auto q = chain.tool_offset().rotation.components();
  doc["tool_offset"] = {{"origin", arr3(chain.tool_offset().origin)},
                        {"quaternion", ordered_json::array({q[0], q[1], q[2], q[3]})}};
  return doc.dump(2) + "\n";
}

namespace reference {

KinematicChain planar3r() {
  const JointLimits lim{-std::numbers::pi, std::numbers::pi};
  const Vec3 z{0, 0, 1};
  return KinematicChain("planar3r",
                        {{z, {0, 0, 0}, lim}, {z, {1, 0, 0}, lim}, {z, {1, 0, 0}, lim}},
                        {{1, 0, 0}, UnitQuaternion{}});
}

KinematicChain planar1r() {
  return KinematicChain("planar1r", {{{0, 0, 1}, {0, 0, 0}, {-std::numbers::pi, std::numbers::pi}}},
                        {{1, 0, 0}, UnitQuaternion{}});
}

KinematicChain desk7() {
  const Vec3 y{0, 1, 0}, z{0, 0, 1};
  // Small lateral offsets keep the wrist from being exactly spherical.
  return KinematicChain("desk7",
                        {
                            {z, {0.0, 0.0, 0.0}, {-2.96, 2.96}},
                            {y, {0.0, 0.0, 0.30}, {-2.09, 2.09}},
                            {z, {0.0, 0.0, 0.20}, {-2.96, 2.96}},
                            {y, {0.0, 0.02, 0.25}, {-2.09, 2.09}},
                            {z, {0.0, -0.02, 0.20}, {-2.96, 2.96}},
                            {y, {0.0, 0.0, 0.25}, {-2.09, 2.09}},
                            {z, {0.0, 0.0, 0.08}, {-3.05, 3.05}},
                        },
                        {{0.0, 0.0, 0.05}, UnitQuaternion{}});
}

}  // namespace reference

}  // namespace robustik
