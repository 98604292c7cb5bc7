"""Scenario files: schema, defaults, validation, and materialization.

A scenario is a YAML mapping with a ``schema_version`` and nested sections
mirroring the planner/environment configuration types. Every field except
``start`` and ``goal`` has the survey defaults built in, so a minimal file
is three lines. Angles are degrees in files, radians in memory.

Random obstacle fields are generated with ``random.Random`` (the portable
Mersenne Twister), so a (scenario, seed) pair materializes identically on
every platform; the generator name is recorded in run summaries.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from pathlib import Path

import yaml

from mppf.environment import (
    CYLINDER,
    SPHERE,
    Bounds,
    Obstacle,
    SonarModel,
    VortexFlow,
)
from mppf.errors import ScenarioError
from mppf.escape import EscapeConfig
from mppf.geometry import ZERO, GliderSpec, Vec3
from mppf.potentials import MODES, PotentialParams
from mppf.sawtooth import SawtoothParams

SCHEMA_VERSION = 1
RNG_NAME = "python-random-mt19937"


@dataclass(frozen=True)
class RandomObstacles:
    """Seeded generation block: ``count`` spheres, uniform in the ranges."""

    count: int
    radius_range: tuple[float, float]
    speed_range: tuple[float, float] = (0.0, 0.0)
    depth_range: tuple[float, float] | None = None
    keepout: float = 8.0  # clear water kept around start and goal
    seed: int | None = None  # defaults to the run seed


@dataclass(frozen=True)
class Scenario:
    name: str
    start: Vec3
    goal: Vec3
    mode: str = "advanced"
    seed: int = 0
    dt: float = 1.0
    max_steps: int = 3000
    glider: GliderSpec = GliderSpec()
    sawtooth: SawtoothParams = SawtoothParams()
    potentials: PotentialParams = PotentialParams()
    escape: EscapeConfig = EscapeConfig()
    sonar: SonarModel = SonarModel()
    bounds: Bounds = Bounds()
    flow: VortexFlow | None = None
    obstacles: tuple[Obstacle, ...] = ()
    random_obstacles: RandomObstacles | None = None


_TOP_KEYS = {"schema_version", "name", "mode", "seed", "dt", "max_steps",
             "start", "goal", "bounds", "glider", "sawtooth", "potentials",
             "escape", "sonar", "flow", "obstacles", "random_obstacles"}


class _Reader:
    """Collects problems instead of failing on the first bad field."""

    def __init__(self, data: dict):
        self.data = data
        self.problems: list[str] = []

    def section(self, key: str, allowed: set[str]) -> dict:
        raw = self.data.get(key)
        if raw is None:
            return {}
        if not isinstance(raw, dict):
            self.problems.append(f"{key}: expected a mapping")
            return {}
        for k in raw:
            if k not in allowed:
                self.problems.append(f"{key}.{k}: unknown field")
        return raw

    def num(self, sec: dict, sec_name: str, key: str, default: float,
            lo: float | None = None, hi: float | None = None,
            integer: bool = False) -> float:
        v = sec.get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.problems.append(f"{sec_name}.{key}: expected a number")
            return default
        if integer and int(v) != v:
            self.problems.append(f"{sec_name}.{key}: expected an integer")
            return default
        if lo is not None and v < lo:
            self.problems.append(f"{sec_name}.{key}: must be >= {lo}")
            return default
        if hi is not None and v > hi:
            self.problems.append(f"{sec_name}.{key}: must be <= {hi}")
            return default
        return int(v) if integer else float(v)

    def vec(self, container: dict, name: str, key: str,
            dims: int = 3) -> Vec3 | None:
        v = container.get(key)
        if v is None:
            self.problems.append(f"{name}: missing")
            return None
        if (not isinstance(v, (list, tuple)) or len(v) not in (dims, 3)
                or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)):
            self.problems.append(f"{name}: expected a list of {dims} numbers")
            return None
        vals = [float(c) for c in v] + [0.0] * (3 - len(v))
        return Vec3(*vals)


def _read_obstacle(reader: _Reader, idx: int, raw, bounds: Bounds) -> Obstacle | None:
    name = f"obstacles[{idx}]"
    if not isinstance(raw, dict):
        reader.problems.append(f"{name}: expected a mapping")
        return None
    for k in raw:
        if k not in {"shape", "radius", "center", "velocity"}:
            reader.problems.append(f"{name}.{k}: unknown field")
    shape = raw.get("shape", SPHERE)
    if shape not in (SPHERE, CYLINDER):
        reader.problems.append(f"{name}.shape: must be sphere or cylinder")
        return None
    radius = reader.num(raw, name, "radius", 0.0, lo=0.0)
    if radius <= 0.0:
        reader.problems.append(f"{name}.radius: must be positive")
        return None
    center = reader.vec(raw, f"{name}.center", "center",
                        dims=2 if shape == CYLINDER else 3)
    if center is None:
        return None
    vel = ZERO
    if "velocity" in raw:
        vel = reader.vec(raw, f"{name}.velocity", "velocity") or ZERO
    if shape == CYLINDER and vel != ZERO:
        reader.problems.append(f"{name}.velocity: cylinders are static")
        vel = ZERO
    if not (0.0 <= center.x <= bounds.x and 0.0 <= center.y <= bounds.y):
        reader.problems.append(f"{name}.center: outside the domain bounds")
    return Obstacle(shape, radius, center, vel)


def validate_scenario_dict(data, *, require_version: bool = True) -> list[str]:
    """All schema problems in one pass; empty means valid."""
    try:
        _build(data, "scenario", require_version)
        return []
    except ScenarioError as e:
        return e.problems


def scenario_from_dict(data: dict, name: str = "scenario",
                       require_version: bool = False) -> Scenario:
    return _build(data, name, require_version)


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file.

    Raises
    ------
    ScenarioError
        Listing every offending field.
    """
    p = Path(path)
    try:
        raw = yaml.safe_load(p.read_text())
    except yaml.YAMLError as e:
        raise ScenarioError([f"{p}: not parseable as YAML ({e})"]) from e
    if not isinstance(raw, dict):
        raise ScenarioError([f"{p}: expected a mapping at the top level"])
    return _build(raw, raw.get("name", p.stem), require_version=True)


def _build(data, default_name: str, require_version: bool) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(["scenario: expected a mapping"])
    r = _Reader(data)

    version = data.get("schema_version")
    if version is None:
        if require_version:
            r.problems.append("schema_version: missing (expected 1)")
    elif version != SCHEMA_VERSION:
        r.problems.append(f"schema_version: unsupported value {version!r}")

    for k in data:
        if k not in _TOP_KEYS:
            r.problems.append(f"{k}: unknown field")

    name = data.get("name", default_name)
    if not isinstance(name, str) or not name:
        r.problems.append("name: expected a non-empty string")
        name = default_name

    mode = data.get("mode", "advanced")
    if mode not in MODES:
        r.problems.append(f"mode: must be one of {'/'.join(MODES)}")
        mode = "advanced"

    seed = r.num(data, "scenario", "seed", 0, integer=True)
    dt = r.num(data, "scenario", "dt", 1.0)
    if dt <= 0.0:
        r.problems.append("dt: must be positive")
        dt = 1.0
    max_steps = r.num(data, "scenario", "max_steps", 3000, integer=True)
    if max_steps <= 0:
        r.problems.append("max_steps: must be positive")
        max_steps = 3000

    b = r.section("bounds", {"x", "y", "depth"})
    bounds = Bounds(r.num(b, "bounds", "x", 100.0, lo=1.0),
                    r.num(b, "bounds", "y", 100.0, lo=1.0),
                    r.num(b, "bounds", "depth", 50.0, lo=1.0))

    g = r.section("glider", {"max_heading_step_deg", "max_glide_deg",
                             "speed_down", "speed_up", "body_radius",
                             "max_depth"})
    glider = GliderSpec(
        max_heading_step=math.radians(r.num(g, "glider", "max_heading_step_deg",
                                            20.0, lo=1.0, hi=180.0)),
        max_glide_angle=math.radians(r.num(g, "glider", "max_glide_deg",
                                           45.0, lo=1.0, hi=89.0)),
        speed_down=r.num(g, "glider", "speed_down", 0.5, lo=1e-6),
        speed_up=r.num(g, "glider", "speed_up", 0.3, lo=1e-6),
        body_radius=r.num(g, "glider", "body_radius", 0.6, lo=1e-6),
        max_depth=r.num(g, "glider", "max_depth", 30.0, lo=1e-6))

    s = r.section("sawtooth", {"water_depth", "depth_margin", "arrival_radius",
                               "replan_cross_track", "literal_stride"})
    water_depth = r.num(s, "sawtooth", "water_depth", bounds.depth, lo=1e-6)
    depth_margin = r.num(s, "sawtooth", "depth_margin", 0.0, lo=0.0)
    if depth_margin >= water_depth:
        r.problems.append("sawtooth.depth_margin: must be below water_depth")
        depth_margin = 0.0
    literal = s.get("literal_stride", False)
    if not isinstance(literal, bool):
        r.problems.append("sawtooth.literal_stride: expected true/false")
        literal = False
    sawtooth = SawtoothParams(
        max_depth=glider.max_depth,
        water_depth=water_depth,
        depth_margin=depth_margin,
        max_glide_angle=glider.max_glide_angle,
        arrival_radius=r.num(s, "sawtooth", "arrival_radius", 1.0, lo=1e-6),
        replan_cross_track=r.num(s, "sawtooth", "replan_cross_track", 3.0, lo=1e-6),
        literal_stride=literal)

    p = r.section("potentials", {"xi", "eta", "tau", "kappa", "flow_align_deg"})
    potentials = PotentialParams(
        xi=r.num(p, "potentials", "xi", 0.1, lo=1e-12),
        eta=r.num(p, "potentials", "eta", 10.0, lo=0.0),
        tau=r.num(p, "potentials", "tau", 0.1, lo=0.0),
        kappa=r.num(p, "potentials", "kappa", 0.1, lo=0.0),
        flow_align_max=math.radians(r.num(p, "potentials", "flow_align_deg",
                                          20.0, lo=1.0, hi=89.0)))

    e = r.section("escape", {"vertical_speed", "window", "progress_epsilon",
                             "surface_margin", "decay_tau", "cz_margin",
                             "overhead_pad", "overhead_clearance"})
    escape = EscapeConfig(
        vertical_speed=r.num(e, "escape", "vertical_speed", 0.18, lo=1e-6),
        window=r.num(e, "escape", "window", 10, lo=1, integer=True),
        progress_epsilon=r.num(e, "escape", "progress_epsilon", 0.5, lo=1e-9),
        surface_margin=r.num(e, "escape", "surface_margin", 3.0, lo=0.0),
        decay_tau=r.num(e, "escape", "decay_tau", 5.0, lo=1e-6),
        cz_margin=r.num(e, "escape", "cz_margin", 5.0, lo=0.0),
        overhead_pad=r.num(e, "escape", "overhead_pad", 1.0, lo=0.0),
        overhead_clearance=r.num(e, "escape", "overhead_clearance", 2.0, lo=0.0))

    so = r.section("sonar", {"range", "horizontal_fov_deg", "vertical_fov_deg"})
    sonar = SonarModel(
        range=r.num(so, "sonar", "range", 100.0, lo=1e-6),
        horizontal_fov=math.radians(r.num(so, "sonar", "horizontal_fov_deg",
                                          120.0, lo=1.0, hi=359.0)),
        vertical_fov=math.radians(r.num(so, "sonar", "vertical_fov_deg",
                                        30.0, lo=1.0, hi=359.0)))

    flow = None
    f = r.section("flow", {"amplitude", "cell_size", "max_depth"})
    if f:
        flow = VortexFlow(
            amplitude=r.num(f, "flow", "amplitude", 0.1, lo=0.0),
            cell_size=r.num(f, "flow", "cell_size", 50.0, lo=1e-6),
            max_depth=r.num(f, "flow", "max_depth", bounds.depth, lo=1e-6))

    start = r.vec(data, "start", "start")
    goal = r.vec(data, "goal", "goal")
    for label, v in (("start", start), ("goal", goal)):
        if v is None:
            continue
        if not (0.0 <= v.x <= bounds.x and 0.0 <= v.y <= bounds.y
                and 0.0 <= v.z <= bounds.depth):
            r.problems.append(f"{label}: outside the domain bounds")
        elif v.z > glider.max_depth:
            r.problems.append(f"{label}: deeper than the vehicle can go")

    obstacles = []
    raw_obs = data.get("obstacles", [])
    if not isinstance(raw_obs, list):
        r.problems.append("obstacles: expected a list")
        raw_obs = []
    for i, raw in enumerate(raw_obs):
        ob = _read_obstacle(r, i, raw, bounds)
        if ob is not None:
            obstacles.append(ob)

    rand = None
    rb = r.section("random_obstacles", {"count", "radius", "speed", "depth",
                                        "keepout", "seed"})
    if rb:
        count = r.num(rb, "random_obstacles", "count", 0, lo=0, integer=True)
        radius = _read_range(r, rb, "random_obstacles.radius", "radius",
                             (0.5, 7.0), lo=1e-6)
        speed = _read_range(r, rb, "random_obstacles.speed", "speed",
                            (0.0, 0.0), lo=0.0)
        depth = None
        if "depth" in rb:
            depth = _read_range(r, rb, "random_obstacles.depth", "depth",
                                (0.0, bounds.depth), lo=0.0)
            if depth is not None and depth[1] > bounds.depth:
                r.problems.append("random_obstacles.depth: exceeds the domain depth")
        rsd = rb.get("seed")
        if rsd is not None and (isinstance(rsd, bool) or not isinstance(rsd, int)):
            r.problems.append("random_obstacles.seed: expected an integer")
            rsd = None
        if radius is not None and speed is not None:
            rand = RandomObstacles(count, radius, speed, depth,
                                   r.num(rb, "random_obstacles", "keepout",
                                         8.0, lo=0.0), rsd)

    if r.problems:
        raise ScenarioError(r.problems)
    return Scenario(name=name, start=start, goal=goal, mode=mode,
                    seed=int(seed), dt=dt, max_steps=int(max_steps),
                    glider=glider, sawtooth=sawtooth, potentials=potentials,
                    escape=escape, sonar=sonar, bounds=bounds, flow=flow,
                    obstacles=tuple(obstacles), random_obstacles=rand)


def _read_range(r: _Reader, sec: dict, name: str, key: str,
                default: tuple[float, float], lo: float) -> tuple[float, float] | None:
    v = sec.get(key, list(default))
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)):
        r.problems.append(f"{name}: expected [low, high]")
        return None
    a, b = float(v[0]), float(v[1])
    if a < lo or b < a:
        r.problems.append(f"{name}: expected {lo} <= low <= high")
        return None
    return a, b


def materialize_obstacles(sc: Scenario, seed: int) -> tuple[Obstacle, ...]:
    """Explicit obstacles plus the seeded random field, if any.

    Each generated obstacle draws (radius, x, y, z, heading, speed) in that
    order; a draw landing within keepout of the start or goal is rejected
    and redrawn whole, keeping the stream stable.
    """
    obs = list(sc.obstacles)
    rb = sc.random_obstacles
    if rb is None or rb.count == 0:
        return tuple(obs)
    rng = random.Random(rb.seed if rb.seed is not None else seed)
    zlo, zhi = rb.depth_range if rb.depth_range else (0.0, sc.bounds.depth)
    for i in range(rb.count):
        for _ in range(1000):
            radius = rng.uniform(*rb.radius_range)
            x = rng.uniform(0.0, sc.bounds.x)
            y = rng.uniform(0.0, sc.bounds.y)
            z = rng.uniform(zlo, zhi)
            heading = rng.uniform(0.0, math.tau)
            speed = rng.uniform(*rb.speed_range)
            center = Vec3(x, y, z)
            if (center.dist(sc.start) < radius + rb.keepout
                    or center.dist(sc.goal) < radius + rb.keepout):
                continue
            vel = (Vec3(speed * math.cos(heading), speed * math.sin(heading), 0.0)
                   if speed > 0.0 else ZERO)
            obs.append(Obstacle(SPHERE, radius, center, vel))
            break
        else:
            raise ScenarioError(
                [f"random_obstacles: no room for obstacle {i} outside the keepout zones"])
    return tuple(obs)


def scenario_to_dict(sc: Scenario) -> dict:
    """Fully resolved scenario as plain data (angles in degrees)."""
    d = {
        "schema_version": SCHEMA_VERSION,
        "name": sc.name,
        "mode": sc.mode,
        "seed": sc.seed,
        "dt": sc.dt,
        "max_steps": sc.max_steps,
        "start": [sc.start.x, sc.start.y, sc.start.z],
        "goal": [sc.goal.x, sc.goal.y, sc.goal.z],
        "bounds": {"x": sc.bounds.x, "y": sc.bounds.y, "depth": sc.bounds.depth},
        "glider": {
            "max_heading_step_deg": math.degrees(sc.glider.max_heading_step),
            "max_glide_deg": math.degrees(sc.glider.max_glide_angle),
            "speed_down": sc.glider.speed_down,
            "speed_up": sc.glider.speed_up,
            "body_radius": sc.glider.body_radius,
            "max_depth": sc.glider.max_depth,
        },
        "sawtooth": {
            "water_depth": sc.sawtooth.water_depth,
            "depth_margin": sc.sawtooth.depth_margin,
            "arrival_radius": sc.sawtooth.arrival_radius,
            "replan_cross_track": sc.sawtooth.replan_cross_track,
            "literal_stride": sc.sawtooth.literal_stride,
        },
        "potentials": {
            "xi": sc.potentials.xi,
            "eta": sc.potentials.eta,
            "tau": sc.potentials.tau,
            "kappa": sc.potentials.kappa,
            "flow_align_deg": math.degrees(sc.potentials.flow_align_max),
        },
        "escape": {
            "vertical_speed": sc.escape.vertical_speed,
            "window": sc.escape.window,
            "progress_epsilon": sc.escape.progress_epsilon,
            "surface_margin": sc.escape.surface_margin,
            "decay_tau": sc.escape.decay_tau,
            "cz_margin": sc.escape.cz_margin,
            "overhead_pad": sc.escape.overhead_pad,
            "overhead_clearance": sc.escape.overhead_clearance,
        },
        "sonar": {
            "range": sc.sonar.range,
            "horizontal_fov_deg": math.degrees(sc.sonar.horizontal_fov),
            "vertical_fov_deg": math.degrees(sc.sonar.vertical_fov),
        },
        "obstacles": [
            {"shape": ob.shape, "radius": ob.radius,
             "center": [ob.center.x, ob.center.y, ob.center.z],
             "velocity": [ob.velocity.x, ob.velocity.y, ob.velocity.z]}
            for ob in sc.obstacles
        ],
    }
    if sc.flow is not None:
        d["flow"] = {"amplitude": sc.flow.amplitude,
                     "cell_size": sc.flow.cell_size,
                     "max_depth": sc.flow.max_depth}
    if sc.random_obstacles is not None:
        rb = sc.random_obstacles
        d["random_obstacles"] = {
            "count": rb.count,
            "radius": list(rb.radius_range),
            "speed": list(rb.speed_range),
            "depth": list(rb.depth_range) if rb.depth_range else None,
            "keepout": rb.keepout,
            "seed": rb.seed,
        }
    return d


def scenario_hash(sc: Scenario) -> str:
    blob = json.dumps(scenario_to_dict(sc), sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
