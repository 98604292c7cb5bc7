"""Go-to selection: scalar/grid agreement, tie-breaking, feasibility gates."""

import math
import random

import pytest

from mppf.errors import NoFeasibleWaypoint
from mppf.geometry import (
    Attitude,
    GliderSpec,
    GliderState,
    Vec3,
    angle_diff,
    build_sample_surface,
    spherical_to_cartesian,
)
from mppf.potentials import (
    ObstaclePoint,
    PotentialParams,
    grid_potentials,
    select_goto,
    total_potential,
)

SPEC = GliderSpec()
PARAMS = PotentialParams()
ZERO = Vec3(0.0, 0.0, 0.0)


def surface_at(pos, psi=0.0, theta=0.0, dt=1.0):
    g = GliderState(pos, Attitude(psi, theta), SPEC.speed_for(theta))
    return build_sample_surface(g, SPEC, dt)


def brute_force(surface, goal, points, flow, params, mode, max_depth):
    """Reference argmin: score each candidate with the scalar stack."""
    best = None
    best_key = None
    att = surface.attitude
    for i, c in enumerate(surface.candidates):
        if c.position.z < 0.0 or c.position.z > max_depth:
            continue
        if any(c.position == p.position for p in points):
            continue
        vel = spherical_to_cartesian(c.psi, c.theta, c.speed)
        u = total_potential(c.position, vel, goal, points, flow, params, mode)
        key = (u, abs(angle_diff(c.psi, att.psi)), abs(c.theta - att.theta), i)
        if best_key is None or key < best_key:
            best_key = key
            best = c
    return best, best_key


def random_points(rng, center, count):
    pts = []
    for _ in range(count):
        off = Vec3(rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0),
                   rng.uniform(-4.0, 4.0))
        r = rng.uniform(0.5, 4.0)
        vel = Vec3(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), 0.0)
        pts.append(ObstaclePoint(center + off, vel, 2.0 * (r + 0.6), r))
    return pts


# --- grid vs scalar --------------------------------------------------------

def test_grid_matches_scalar_composition_exactly():
    # the kernel repeats the scalar operation order, so == is the contract
    rng = random.Random(7)
    for _ in range(50):
        center = Vec3(rng.uniform(20, 80), rng.uniform(20, 80), rng.uniform(2, 25))
        surf = surface_at(center, rng.uniform(-math.pi, math.pi),
                          rng.uniform(-0.7, 0.7))
        goal = Vec3(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 30))
        pts = random_points(rng, center, rng.randrange(0, 6))
        flow = Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 0.0)
        mode = rng.choice(("baseline", "advanced"))
        grid = grid_potentials(surf, goal, pts, flow, PARAMS, mode)
        for i, c in enumerate(surf.candidates):
            vel = spherical_to_cartesian(c.psi, c.theta, c.speed)
            assert grid[i] == total_potential(
                c.position, vel, goal, pts, flow, PARAMS, mode)


def test_selection_agrees_with_brute_force_randomized():
    rng = random.Random(11)
    for _ in range(300):
        center = Vec3(rng.uniform(15, 85), rng.uniform(15, 85), rng.uniform(1, 28))
        surf = surface_at(center, rng.uniform(-math.pi, math.pi),
                          rng.uniform(-0.75, 0.75))
        goal = Vec3(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 30))
        pts = random_points(rng, center, rng.randrange(0, 8))
        flow = Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 0.0)
        mode = rng.choice(("baseline", "advanced"))
        cmd = select_goto(surf, goal, pts, flow, PARAMS, mode, 30.0)
        want, want_key = brute_force(surf, goal, pts, flow, PARAMS, mode, 30.0)
        assert cmd.target == want.position
        assert cmd.potential == want_key[0]


# --- tie-breaking ----------------------------------------------------------

def test_tie_breaks_toward_smallest_heading_change():
    # goal dead ahead and far: candidates mirrored about the track tie in
    # potential, and the straight-ahead column must win
    surf = surface_at(Vec3(50.0, 50.0, 10.0), psi=0.0, theta=0.0)
    goal = Vec3(1e6, 50.0, 10.0)
    cmd = select_goto(surf, goal, (), ZERO, PARAMS, "baseline", 30.0)
    assert cmd.psi_d == 0.0


def test_tie_breaks_then_glide_then_grid_order():
    surf = surface_at(Vec3(50.0, 50.0, 10.0), psi=0.0, theta=0.0)
    att = surf.attitude
    # force a full tie by scoring against the candidates' own center
    grid = grid_potentials(surf, surf.center, (), ZERO, PARAMS, "baseline")
    keyed = sorted(
        (grid[i], abs(angle_diff(c.psi, att.psi)), abs(c.theta - att.theta), i)
        for i, c in enumerate(surf.candidates)
        if 0.0 <= c.position.z <= 30.0)
    cmd = select_goto(surf, surf.center, (), ZERO, PARAMS, "baseline", 30.0)
    assert cmd.potential == keyed[0][0]
    i = keyed[0][3]
    assert cmd.target == surf.candidates[i].position


# --- feasibility -----------------------------------------------------------

def test_surface_candidates_with_negative_depth_skipped():
    surf = surface_at(Vec3(50.0, 50.0, 0.0), theta=0.0)
    assert any(c.position.z < 0.0 for c in surf.candidates)
    cmd = select_goto(surf, Vec3(90, 50, 0), (), ZERO, PARAMS, "baseline", 30.0)
    assert cmd.target.z >= 0.0


def test_depth_ceiling_is_inclusive():
    surf = surface_at(Vec3(50.0, 50.0, 10.0), theta=0.0)
    ceiling = max(c.position.z for c in surf.candidates)
    cmd = select_goto(surf, Vec3(50, 50, 40), (), ZERO, PARAMS, "baseline", ceiling)
    assert cmd.target.z == ceiling  # deepest row allowed right at the limit


def test_all_candidates_too_deep_raises():
    surf = surface_at(Vec3(50.0, 50.0, 5.0), theta=0.0)
    with pytest.raises(NoFeasibleWaypoint):
        select_goto(surf, Vec3(90, 50, 0), (), ZERO, PARAMS, "baseline", 1.0)


def test_coincident_sample_point_is_infinite_and_skipped():
    surf = surface_at(Vec3(50.0, 50.0, 10.0))
    target = select_goto(surf, Vec3(90, 50, 10), (), ZERO, PARAMS,
                         "baseline", 30.0).target
    # park an obstacle point exactly on the winner; selection must move on
    pts = (ObstaclePoint(target, ZERO, 7.2, 3.0),)
    grid = grid_potentials(surf, Vec3(90, 50, 10), pts, ZERO, PARAMS, "baseline")
    idx = [i for i, c in enumerate(surf.candidates) if c.position == target]
    assert math.isinf(grid[idx[0]])
    cmd = select_goto(surf, Vec3(90, 50, 10), pts, ZERO, PARAMS, "baseline", 30.0)
    assert cmd.target != target


# --- mode gating -----------------------------------------------------------

def test_baseline_ignores_velocity_and_flow_terms():
    pos = Vec3(50.0, 50.0, 10.0)
    vel = Vec3(0.5, 0.0, 0.0)
    goal = Vec3(90.0, 50.0, 10.0)
    pts = (ObstaclePoint(Vec3(53.0, 50.0, 10.0), Vec3(-0.2, 0.0, 0.0), 7.2, 3.0),)
    flow = Vec3(0.3, 0.0, 0.0)
    base = total_potential(pos, vel, goal, pts, flow, PARAMS, "baseline")
    calm = total_potential(pos, vel, goal, pts, ZERO, PARAMS, "baseline")
    still = total_potential(pos, vel, goal,
                            (ObstaclePoint(pts[0].position, ZERO, 7.2, 3.0),),
                            ZERO, PARAMS, "baseline")
    assert base == calm == still
    adv = total_potential(pos, vel, goal, pts, flow, PARAMS, "advanced")
    assert adv != base


def test_unknown_mode_rejected():
    pos = Vec3(50.0, 50.0, 10.0)
    with pytest.raises(ValueError):
        total_potential(pos, ZERO, pos, (), ZERO, PARAMS, "hybrid")
    surf = surface_at(pos)
    with pytest.raises(ValueError):
        grid_potentials(surf, pos, (), ZERO, PARAMS, "hybrid")
