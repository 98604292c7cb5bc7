"""Coordinate conventions, vectors, and the candidate sample surface.

Frame: x east, y north, z depth (positive down, z=0 at the surface).
Heading psi is measured in the horizontal plane from +x, glide angle theta
in the vertical plane, positive when climbing (depth decreasing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

GRID_N = 5  # candidate headings / glide angles per axis (5x5 surface)


def wrap_angle(a: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    w = math.remainder(a, math.tau)
    return math.pi if w == -math.pi else w


def angle_diff(a: float, b: float) -> float:
    """Signed smallest rotation from b to a."""
    return wrap_angle(a - b)


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float
    y: float
    z: float

    def __add__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x - o.x, self.y - o.y, self.z - o.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def dot(self, o: "Vec3") -> float:
        return self.x * o.x + self.y * o.y + self.z * o.z

    def cross(self, o: "Vec3") -> "Vec3":
        return Vec3(self.y * o.z - self.z * o.y,
                    self.z * o.x - self.x * o.z,
                    self.x * o.y - self.y * o.x)

    def norm2(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def dist(self, o: "Vec3") -> float:
        dx = self.x - o.x
        dy = self.y - o.y
        dz = self.z - o.z
        return math.sqrt(dx * dx + dy * dy + dz * dz)

    def hdist(self, o: "Vec3") -> float:
        """Horizontal (x-y plane) distance."""
        dx = self.x - o.x
        dy = self.y - o.y
        return math.sqrt(dx * dx + dy * dy)


ZERO = Vec3(0.0, 0.0, 0.0)


def spherical_to_cartesian(psi: float, theta: float, r: float) -> Vec3:
    """Displacement for heading psi, glide angle theta, slant range r.

    A positive theta climbs, so the depth component is -r*sin(theta).
    """
    ct = math.cos(theta)
    return Vec3(r * ct * math.cos(psi), r * ct * math.sin(psi), -r * math.sin(theta))


def cartesian_to_spherical(v: Vec3) -> tuple[float, float, float]:
    """Inverse of :func:`spherical_to_cartesian`; returns (psi, theta, r).

    psi is 0 for a purely vertical displacement (heading undefined there).
    """
    r = v.norm()
    if r == 0.0:
        return 0.0, 0.0, 0.0
    psi = math.atan2(v.y, v.x)
    s = min(1.0, max(-1.0, -v.z / r))
    return psi, math.asin(s), r


@dataclass(frozen=True, slots=True)
class Attitude:
    """Heading and glide angle, radians."""

    psi: float
    theta: float


@dataclass(frozen=True, slots=True)
class GliderSpec:
    """Vehicle envelope and speeds.

    Parameters
    ----------
    max_heading_step : float
        Half-span of the candidate heading fan per planning step, radians.
    max_glide_angle : float
        Glide-angle envelope; also the half-span of the candidate glide fan.
    speed_down, speed_up : float
        Still-water speeds while descending / ascending-or-level, m/s.
    body_radius : float
        Collision radius of the hull, meters.
    max_depth : float
        Deepest commandable depth, meters.
    """

    max_heading_step: float = math.radians(20.0)
    max_glide_angle: float = math.radians(45.0)
    speed_down: float = 0.5
    speed_up: float = 0.3
    body_radius: float = 0.6
    max_depth: float = 30.0

    def speed_for(self, theta: float) -> float:
        """Still-water speed for a glide angle: buoyancy-driven descent is
        faster than ascent; level flight uses the ascent figure."""
        return self.speed_down if theta < 0.0 else self.speed_up


@dataclass(frozen=True, slots=True)
class GliderState:
    position: Vec3
    attitude: Attitude
    speed: float
    mode: str = "follow"  # "follow" while tracking waypoints, "escape" otherwise


@dataclass(frozen=True, slots=True)
class Candidate:
    """One reachable waypoint on the sample surface."""

    position: Vec3
    psi: float
    theta: float
    speed: float
    radius: float  # slant reach this step, speed * dt


@dataclass(frozen=True, slots=True)
class SampleSurface:
    center: Vec3
    attitude: Attitude
    candidates: tuple[Candidate, ...]


def build_sample_surface(state: GliderState, spec: GliderSpec, dt: float) -> SampleSurface:
    """Candidate waypoints reachable in one step, on a 5x5 fan ahead.

    Headings span psi +/- max_heading_step, glide angles span
    theta +/- max_glide_angle clamped to the envelope. Duplicate glide
    angles produced by clamping are kept so the grid stays 5x5 and
    indexing is stable. Each candidate sits at its own slant range
    speed(theta_i) * dt from the current position.
    """
    psi0 = state.attitude.psi
    theta0 = state.attitude.theta
    half = (GRID_N - 1) // 2
    psi_step = spec.max_heading_step / half
    theta_step = spec.max_glide_angle / half

    cands = []
    for i in range(-half, half + 1):
        psi_i = wrap_angle(psi0 + i * psi_step)
        for j in range(-half, half + 1):
            theta_j = theta0 + j * theta_step
            theta_j = min(spec.max_glide_angle, max(-spec.max_glide_angle, theta_j))
            speed = spec.speed_for(theta_j)
            r = speed * dt
            pos = state.position + spherical_to_cartesian(psi_i, theta_j, r)
            cands.append(Candidate(pos, psi_i, theta_j, speed, r))
    return SampleSurface(state.position, state.attitude, tuple(cands))
