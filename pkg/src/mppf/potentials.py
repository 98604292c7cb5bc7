"""Potential evaluation and go-to point selection.

The planner scores every candidate on the sample surface with a sum of
potentials and commands the minimum. Baseline mode uses attraction to the
active waypoint plus static repulsion from obstacle sample points; advanced
mode adds a closing-velocity penalty against each point and a flow-alignment
term that rewards riding the local current (or fighting it head-on, the two
orientations a glider can hold) and penalizes nothing in between.

The scalar functions here are the reference implementations. The batch
evaluator in ``mppf._kernels`` repeats the identical operation sequence over
the whole grid (compiled when the extension is built), so kernel results are
bit-for-bit equal to composing the scalars; tests assert exact agreement.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from mppf import _kernels
from mppf.errors import NoFeasibleWaypoint
from mppf.geometry import (
    SampleSurface,
    Vec3,
    angle_diff,
    spherical_to_cartesian,
)

MODES = ("baseline", "advanced")


@dataclass(frozen=True, slots=True)
class PotentialParams:
    """Gains and the flow-alignment window.

    Parameters
    ----------
    xi : float
        Attraction gain toward the active waypoint.
    eta : float
        Repulsion gain from obstacle sample points.
    tau : float
        Closing-velocity penalty gain (advanced mode).
    kappa : float
        Flow-alignment gain (advanced mode).
    flow_align_max : float
        Half-width of the aligned/opposed windows, radians. Candidate
        velocities within this angle of the flow count as aligned; within
        it of the reversed flow count as opposed; anything else is free.
    """

    xi: float = 0.1
    eta: float = 10.0
    tau: float = 0.1
    kappa: float = 0.1
    flow_align_max: float = math.radians(20.0)


class ObstaclePoint(NamedTuple):
    """One sonar sample on an obstacle surface."""

    position: Vec3
    velocity: Vec3
    influence: float  # repulsion cutoff distance of the parent obstacle
    source_radius: float  # parent obstacle radius, for critical-zone tests


@dataclass(frozen=True, slots=True)
class GotoCommand:
    """Selected go-to point for the next step."""

    target: Vec3
    psi_d: float
    theta_d: float
    depth_d: float
    potential: float


def attractive(position: Vec3, goal: Vec3, params: PotentialParams) -> float:
    """0.5 * xi * d_g^2 toward the active waypoint."""
    dgx = goal.x - position.x
    dgy = goal.y - position.y
    dgz = goal.z - position.z
    return 0.5 * params.xi * (dgx * dgx + dgy * dgy + dgz * dgz)


def repulsive(position: Vec3, point: Vec3, influence: float, goal: Vec3,
              params: PotentialParams) -> float:
    """Surface-point repulsion, scaled by goal distance.

    0.5 * eta * (1/d_o - 1/d_t)^2 * d_g^2 inside the influence radius,
    zero outside. The d_g^2 factor lets repulsion fade as the goal nears
    so the minimum stays at the goal itself. Caller guarantees d_o > 0;
    a coincident point is a collision, not a potential.
    """
    rx = point.x - position.x
    ry = point.y - position.y
    rz = point.z - position.z
    d_o = math.sqrt(rx * rx + ry * ry + rz * rz)
    if d_o > influence:
        return 0.0
    dgx = goal.x - position.x
    dgy = goal.y - position.y
    dgz = goal.z - position.z
    dg2 = dgx * dgx + dgy * dgy + dgz * dgz
    w = 1.0 / d_o - 1.0 / influence
    return 0.5 * params.eta * w * w * dg2


def velocity_repulsive(position: Vec3, velocity: Vec3, point: Vec3,
                       point_velocity: Vec3, influence: float,
                       params: PotentialParams) -> float:
    """Penalty on closing speed toward a sample point.

    V_UO projects the relative velocity onto the line of sight; only a
    non-negative projection (actually closing) inside the influence radius
    costs anything: 0.5 * tau * V_UO / d_o.
    """
    rx = point.x - position.x
    ry = point.y - position.y
    rz = point.z - position.z
    d_o = math.sqrt(rx * rx + ry * ry + rz * rz)
    if d_o > influence:
        return 0.0
    v_uo = ((velocity.x - point_velocity.x) * rx
            + (velocity.y - point_velocity.y) * ry
            + (velocity.z - point_velocity.z) * rz) / d_o
    if v_uo < 0.0:
        return 0.0
    return 0.5 * params.tau * v_uo / d_o


def flow_potential(velocity: Vec3, flow: Vec3, params: PotentialParams) -> float:
    """Alignment cost between a candidate velocity and the local flow.

    Within flow_align_max of the flow direction the cost is the squared
    velocity mismatch against the flow (riding it); within the same window
    of the reversed flow, the mismatch against the reversed flow (bucking
    it head-on keeps control authority). The wide middle band costs
    nothing, and still water costs nothing anywhere.
    """
    fn = math.sqrt(flow.x * flow.x + flow.y * flow.y + flow.z * flow.z)
    if fn == 0.0:
        return 0.0
    vn = math.sqrt(velocity.x * velocity.x + velocity.y * velocity.y
                   + velocity.z * velocity.z)
    if vn == 0.0:
        return 0.0
    c = (flow.x * velocity.x + flow.y * velocity.y + flow.z * velocity.z) / (fn * vn)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    gamma = math.acos(c)
    if gamma <= params.flow_align_max:
        dx = flow.x - velocity.x
        dy = flow.y - velocity.y
        dz = flow.z - velocity.z
        return 0.5 * params.kappa * (dx * dx + dy * dy + dz * dz)
    if gamma >= 0.5 * math.pi + params.flow_align_max:
        sx = flow.x + velocity.x
        sy = flow.y + velocity.y
        sz = flow.z + velocity.z
        return 0.5 * params.kappa * (sx * sx + sy * sy + sz * sz)
    return 0.0


def total_potential(position: Vec3, velocity: Vec3, goal: Vec3,
                    points: Sequence[ObstaclePoint], flow: Vec3,
                    params: PotentialParams, mode: str = "advanced") -> float:
    """Full candidate score; term order matches the batch kernels exactly."""
    if mode not in MODES:
        raise ValueError(f"unknown planner mode: {mode!r}")
    u = attractive(position, goal, params)
    for p in points:
        u += repulsive(position, p.position, p.influence, goal, params)
    if mode == "advanced":
        for p in points:
            u += velocity_repulsive(position, velocity, p.position,
                                    p.velocity, p.influence, params)
        u += flow_potential(velocity, flow, params)
    return u


def _pack_candidates(surface: SampleSurface) -> tuple[int, array, array]:
    n = len(surface.candidates)
    cpos = array("d", bytes(24 * n))
    cvel = array("d", bytes(24 * n))
    k = 0
    for c in surface.candidates:
        cpos[k] = c.position.x
        cpos[k + 1] = c.position.y
        cpos[k + 2] = c.position.z
        v = spherical_to_cartesian(c.psi, c.theta, c.speed)
        cvel[k] = v.x
        cvel[k + 1] = v.y
        cvel[k + 2] = v.z
        k += 3
    return n, cpos, cvel


def _pack_points(points: Sequence[ObstaclePoint]) -> tuple[int, array, array, array]:
    m = len(points)
    opos = array("d", bytes(24 * m))
    ovel = array("d", bytes(24 * m))
    oinf = array("d", bytes(8 * m))
    k = 0
    for j, p in enumerate(points):
        opos[k] = p.position.x
        opos[k + 1] = p.position.y
        opos[k + 2] = p.position.z
        ovel[k] = p.velocity.x
        ovel[k + 1] = p.velocity.y
        ovel[k + 2] = p.velocity.z
        oinf[j] = p.influence
        k += 3
    return m, opos, ovel, oinf


def grid_potentials(surface: SampleSurface, goal: Vec3,
                    points: Sequence[ObstaclePoint], flow: Vec3,
                    params: PotentialParams, mode: str) -> array:
    """Evaluate total_potential over the whole surface via the active kernel.

    Candidates coincident with an obstacle sample point come back +inf.
    """
    if mode not in MODES:
        raise ValueError(f"unknown planner mode: {mode!r}")
    n, cpos, cvel = _pack_candidates(surface)
    m, opos, ovel, oinf = _pack_points(points)
    out = array("d", bytes(8 * n))
    _kernels.total_potential_grid(
        n, cpos, cvel, goal.x, goal.y, goal.z,
        m, opos, ovel, oinf, flow.x, flow.y, flow.z,
        params.xi, params.eta, params.tau, params.kappa,
        params.flow_align_max, mode == "advanced", out)
    return out


def select_goto(surface: SampleSurface, goal: Vec3,
                points: Sequence[ObstaclePoint], flow: Vec3,
                params: PotentialParams, mode: str,
                max_depth: float) -> GotoCommand:
    """Pick the feasible candidate with the lowest total potential.

    Feasible means depth within [0, max_depth] and not coincident with an
    obstacle sample point. Exact potential ties go to the candidate with
    the smallest heading change, then the smallest glide-angle change,
    then grid order, so selection is fully deterministic.

    Raises
    ------
    NoFeasibleWaypoint
        If every candidate is infeasible.
    """
    grid = grid_potentials(surface, goal, points, flow, params, mode)
    att = surface.attitude
    best = None
    best_key = None
    for i, c in enumerate(surface.candidates):
        if c.position.z < 0.0 or c.position.z > max_depth:
            continue
        u = grid[i]
        if math.isinf(u):
            continue
        key = (u, abs(angle_diff(c.psi, att.psi)), abs(c.theta - att.theta), i)
        if best_key is None or key < best_key:
            best_key = key
            best = c
    if best is None:
        raise NoFeasibleWaypoint(
            f"all {len(surface.candidates)} candidates infeasible at "
            f"({surface.center.x:.2f}, {surface.center.y:.2f}, {surface.center.z:.2f})")
    return GotoCommand(best.position, best.psi, best.theta,
                       best.position.z, best_key[0])
