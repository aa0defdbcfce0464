#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "robustik/error.hpp"
#include "robustik/robot_model.hpp"

#ifndef ROBUSTIK_DATA_DIR
#error "ROBUSTIK_DATA_DIR must point at data/robots"
#endif

using namespace robustik;

namespace {

const char* kPlanar = R"({
  "name": "p2",
  "units": {"length": "meters", "angle": "radians"},
  "joints": [
    {"axis": [0, 0, 1], "origin": [0, 0, 0], "limits": [-3.141592653589793, 3.141592653589793]},
    {"axis": [0, 0, 1], "origin": [1, 0, 0], "limits": [-1, 1]}
  ],
  "tool_offset": {"origin": [1, 0, 0], "quaternion": [1, 0, 0, 0]}
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseError parse_error_of(const std::string& text) {
  try {
    load_chain(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("robot_model") {
  TEST_CASE("reference chains") {
    const auto p = reference::planar3r();
    CHECK(p.dof() == 3);
    for (const auto& j : p.joints()) CHECK(j.axis == Vec3{0, 0, 1});
    CHECK(p.total_length() == doctest::Approx(3.0));

    const auto d = reference::desk7();
    CHECK(d.dof() == 7);
    for (const auto& j : d.joints()) CHECK(std::abs(norm(j.axis) - 1.0) < 1e-12);
    CHECK(d.total_length() > 0.9);
    CHECK(d.total_length() < 1.5);
  }

  TEST_CASE("construction validates") {
    const JointSpec ok{{0, 0, 1}, {}, {-1, 1}};
    CHECK_THROWS_AS(KinematicChain("empty", {}, {}), Error);
    CHECK_THROWS_AS(KinematicChain("axis", {{{0, 0, 1 + 2e-9}, {}, {-1, 1}}}, {}), Error);
    CHECK_NOTHROW(KinematicChain("axis", {{{0, 0, 1 + 5e-10}, {}, {-1, 1}}}, {}));
    CHECK_THROWS_AS(KinematicChain("limits", {{{0, 0, 1}, {}, {1, -1}}}, {}), Error);
    CHECK_NOTHROW(KinematicChain("ok", {ok}, {}));
  }

  TEST_CASE("load, save, load reaches a fixpoint") {
    const auto a = load_chain(kPlanar);
    CHECK(a.dof() == 2);
    CHECK(a.joints()[0].limits.lo == -3.141592653589793);
    CHECK(a.joints()[0].limits.hi == 3.141592653589793);
    const std::string once = save_chain(a);
    const auto b = load_chain(once);
    CHECK(a == b);
    CHECK(save_chain(b) == once);
    CHECK(once.find("3.141592653589793") != std::string::npos);
  }

  TEST_CASE("shipped robot files match the built-in chains byte for byte") {
    const std::string dir = ROBUSTIK_DATA_DIR;
    const std::string desk = read_file(dir + "/desk7.json");
    const std::string planar = read_file(dir + "/planar3r.json");
    CHECK(desk == save_chain(reference::desk7()));
    CHECK(planar == save_chain(reference::planar3r()));
    CHECK(load_chain_file(dir + "/desk7.json") == reference::desk7());
    CHECK(save_chain(reference::desk7()) == save_chain(reference::desk7()));
  }

  TEST_CASE("round trip over 100 random chains") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
      const auto chain = oracle::random_chain(1 + t % 8, rng);
      const auto back = load_chain(save_chain(chain));
      CHECK(back == chain);
      CHECK(save_chain(back) == save_chain(chain));
    }
  }

  TEST_CASE("parse errors name the offending field") {
    auto e = parse_error_of(replace(kPlanar, "\"name\": \"p2\",", "\"name\": \"p2\", \"colour\": 1,"));
    CHECK(e.field() == "colour");
    CHECK(e.line() == 2);

    e = parse_error_of(replace(kPlanar, "\"axis\": [0, 0, 1], \"origin\": [1, 0, 0]", "\"axis\": [0, 1], \"origin\": [1, 0, 0]"));
    CHECK(e.field() == "joints[1].axis");

    e = parse_error_of(replace(kPlanar, "\"meters\"", "\"millimeters\""));
    CHECK(e.field() == "units.length");

    e = parse_error_of(replace(kPlanar, "\"limits\": [-1, 1]", "\"limit\": [-1, 1]"));
    CHECK(e.field().rfind("joints[1]", 0) == 0);

    e = parse_error_of(replace(kPlanar, "\"units\": {\"length\": \"meters\", \"angle\": \"radians\"},", ""));
    CHECK(e.field() == "units");

    e = parse_error_of("{\n  \"name\": \"x\",\n  oops\n}");
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  TEST_CASE("validation errors from the document") {
    // Axis off unit length by more than 1e-9.
    CHECK_THROWS_AS(load_chain(replace(kPlanar, "\"axis\": [0, 0, 1], \"origin\": [1, 0, 0]",
                                       "\"axis\": [0, 0, 1.00001], \"origin\": [1, 0, 0]")),
                    Error);
    CHECK_THROWS_AS(load_chain(replace(kPlanar, "\"joints\": [", "\"joints\": [], \"x\": [")), Error);
    CHECK_THROWS_AS(load_chain(replace(kPlanar, "[1, 0, 0, 0]", "[1, 0, 0, 0.1]")), Error);
    CHECK_THROWS_AS(load_chain_file("/nonexistent/robot.json"), ParseError);
  }

  TEST_CASE("limits and clamping") {
    const auto d = reference::desk7();
    JointVector t(7, 0.0);
    CHECK(d.within_limits(t));
    t[0] = 10.0;
    CHECK_FALSE(d.within_limits(t));
    const auto c = d.clamp_to_limits(t);
    CHECK(c[0] == d.joints()[0].limits.hi);
  }
}
