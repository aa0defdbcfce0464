"""Robust inverse kinematics under bounded joint actuation error."""

from ._core import (
    Chain,
    ErrorModel,
    Pose,
    RobustError,
    desk7,
    fk_pose,
    load_chain,
    planar3r,
    position_bound,
    position_jacobian,
    robust_ik,
    rotation_bound,
    rotation_jacobian,
    run_trials,
    save_chain,
    solve_ik,
    wilson_interval,
)

__all__ = [
    "Chain",
    "ErrorModel",
    "Pose",
    "RobustError",
    "desk7",
    "fk_pose",
    "load_chain",
    "planar3r",
    "position_bound",
    "position_jacobian",
    "robust_ik",
    "rotation_bound",
    "rotation_jacobian",
    "run_trials",
    "save_chain",
    "solve_ik",
    "wilson_interval",
]
