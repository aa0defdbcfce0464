#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustik/robot_model.hpp"
#include "robustik/uncertainty.hpp"

namespace robustik {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Self-checks of a chain against numeric oracles: file round-trip,
/// finite-difference Jacobians, and boundary sampling of the joint error ball
/// against the position and rotation bounds.
std::vector<CheckResult> run_validation(const KinematicChain& chain, const JointErrorModel& model,
                                        std::uint64_t seed);

}  // namespace robustik
