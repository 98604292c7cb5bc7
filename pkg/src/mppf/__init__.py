"""Potential-field path planning for buoyancy-driven underwater gliders.

Real-time planner (candidate sample surface + attractive/repulsive/
velocity/flow potentials), sawtooth pre-planning, a vertical local-minimum
escape maneuver, and a deterministic 3D scenario simulator with a CLI.
"""

from mppf.errors import NoFeasibleWaypoint, PlannerError, ScenarioError, TrappedError
from mppf.geometry import (
    Attitude,
    GliderSpec,
    GliderState,
    Vec3,
    build_sample_surface,
)
from mppf.harness import RunResult, compare_modes, emit_outputs, run_scenario
from mppf.potentials import GotoCommand, ObstaclePoint, PotentialParams, select_goto
from mppf.sawtooth import SawtoothParams, WaypointPlan, plan_sawtooth, replan_from
from mppf.scenario import Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"

__all__ = [
    "Attitude",
    "GliderSpec",
    "GliderState",
    "GotoCommand",
    "NoFeasibleWaypoint",
    "ObstaclePoint",
    "PlannerError",
    "PotentialParams",
    "RunResult",
    "SawtoothParams",
    "Scenario",
    "ScenarioError",
    "TrappedError",
    "Vec3",
    "WaypointPlan",
    "build_sample_surface",
    "compare_modes",
    "emit_outputs",
    "load_scenario",
    "plan_sawtooth",
    "replan_from",
    "run_scenario",
    "scenario_from_dict",
    "select_goto",
]
