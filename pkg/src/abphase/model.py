"""Physical constants, sources, particle state and sampled paths.

All objects here are immutable after construction. Vectors are stored as
tuples so that sources compare and hash by value; use :func:`as_vec3` to get
a numpy array back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.constants as sc

from .errors import GeometryError, ProximityError

DEFAULT_EXCLUSION_RADIUS = 1e-6


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants. ``eps0`` defaults to ``1/(mu0 c^2)`` so the set is exactly consistent."""

    hbar: float = sc.hbar
    c: float = sc.c
    mu0: float = sc.mu_0
    eps0: float = 1.0 / (sc.mu_0 * sc.c**2)
    e_charge: float = sc.e

    def __post_init__(self):
        for name in ("hbar", "c", "mu0", "eps0", "e_charge"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"constant {name} must be positive and finite, got {value!r}")
        mismatch = abs(self.mu0 * self.eps0 * self.c**2 - 1.0)
        if mismatch > 1e-12:
            raise ValueError(f"mu0*eps0*c^2 deviates from 1 by {mismatch:.3e}")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        """hbar = c = eps0 = mu0 = e = 1; handy for round-number tests."""
        return cls(hbar=1.0, c=1.0, mu0=1.0, eps0=1.0, e_charge=1.0)


SI = PhysicalConstants()


def as_vec3(value, name: str = "vector") -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components: {arr}")
    return arr


def _tuple3(value, name):
    return tuple(float(x) for x in as_vec3(value, name))


def _unit_tuple(value, name="axis"):
    arr = as_vec3(value, name)
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise ValueError(f"{name} must be a nonzero vector")
    return tuple(float(x) for x in arr / norm)


def _positive(obj, *names):
    for name in names:
        value = getattr(obj, name)
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{type(obj).__name__}.{name} must be positive, got {value!r}")


def orthonormal_frame(axis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(u, v, n)`` with ``n`` along ``axis`` and ``u x v = n``.

    ``u`` is x projected onto the plane (y when the axis is near x), so the
    +z axis gives the standard (x, y, z) frame.
    """
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = helper - (helper @ n) * n
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v, n


# --------------------------------------------------------------------------
# current sources


@dataclass(frozen=True)
class CircularLoop:
    """Thin circular loop. Positive current circulates counterclockwise about +axis."""

    center: tuple
    axis: tuple
    radius: float
    current: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", _tuple3(self.center, "center"))
        object.__setattr__(self, "axis", _unit_tuple(self.axis))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "current", float(self.current))
        _positive(self, "radius")
        if not math.isfinite(self.current):
            raise ValueError("current must be finite")

    def scaled(self, factor: float) -> "CircularLoop":
        return replace(self, current=self.current * factor)


@dataclass(frozen=True)
class Solenoid:
    """Finite cylindrical winding, right-handed about ``axis`` for positive current."""

    center: tuple
    axis: tuple
    radius: float
    length: float
    turns_per_meter: float
    current: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", _tuple3(self.center, "center"))
        object.__setattr__(self, "axis", _unit_tuple(self.axis))
        for attr in ("radius", "length", "turns_per_meter", "current"):
            object.__setattr__(self, attr, float(getattr(self, attr)))
        _positive(self, "radius", "length", "turns_per_meter")
        if not math.isfinite(self.current):
            raise ValueError("current must be finite")

    @property
    def ampere_turns(self) -> float:
        return self.current * self.turns_per_meter * self.length

    def nominal_flux(self, constants: PhysicalConstants = SI) -> float:
        """Infinite-solenoid flux mu0 n I pi a^2."""
        return constants.mu0 * self.turns_per_meter * self.current * math.pi * self.radius**2

    def default_loop_count(self) -> int:
        return max(200, math.ceil(20 * self.length / self.radius))

    def scaled(self, factor: float) -> "Solenoid":
        return replace(self, current=self.current * factor)


@dataclass(frozen=True)
class SegmentChain:
    """Polyline wire carrying ``current`` from the first point to the last."""

    points: tuple
    current: float
    name: str = ""

    def __post_init__(self):
        pts = tuple(_tuple3(p, "points[i]") for p in self.points)
        if len(pts) < 2:
            raise ValueError("SegmentChain needs at least two points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "current", float(self.current))
        if not math.isfinite(self.current):
            raise ValueError("current must be finite")

    @property
    def closed(self) -> bool:
        return np.allclose(self.points[0], self.points[-1], atol=1e-12, rtol=0)

    def scaled(self, factor: float) -> "SegmentChain":
        return replace(self, current=self.current * factor)


CurrentSource = CircularLoop | Solenoid | SegmentChain


def solenoid_to_loops(solenoid: Solenoid, n_loops: int | None = None) -> list[CircularLoop]:
    """Replace a solenoid by ``n_loops`` evenly spaced loops with the same ampere-turns.

    Loops sit at the centres of ``n_loops`` equal axial cells, so a single loop
    lands at the solenoid centre.
    """
    if n_loops is None:
        n_loops = solenoid.default_loop_count()
    if int(n_loops) != n_loops or n_loops < 1:
        raise ValueError(f"n_loops must be a positive integer, got {n_loops!r}")
    n_loops = int(n_loops)
    center = np.asarray(solenoid.center)
    axis = np.asarray(solenoid.axis)
    current = solenoid.ampere_turns / n_loops
    offsets = (np.arange(n_loops) + 0.5) / n_loops * solenoid.length - 0.5 * solenoid.length
    return [
        CircularLoop(center + z * axis, solenoid.axis, solenoid.radius, current, name=solenoid.name)
        for z in offsets
    ]


# --------------------------------------------------------------------------
# charge sources


@dataclass(frozen=True)
class ChargeWaveform:
    """Sampled Q(t) table, linearly interpolated and zero outside its range."""

    times: tuple
    charges: tuple

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        q = np.asarray(self.charges, dtype=float)
        if t.ndim != 1 or t.shape != q.shape or t.size < 1:
            raise ValueError("waveform times and charges must be 1-D of equal nonzero length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(q))):
            raise ValueError("waveform table has non-finite entries")
        if np.any(np.diff(t) <= 0):
            raise ValueError("waveform times must be strictly increasing")
        object.__setattr__(self, "times", tuple(t.tolist()))
        object.__setattr__(self, "charges", tuple(q.tolist()))

    def __call__(self, t):
        return np.interp(t, self.times, self.charges, left=0.0, right=0.0)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.asarray(self.times)

    def support(self) -> tuple[float, float] | None:
        """Smallest closed interval outside of which Q(t) vanishes, or None if Q == 0."""
        q = np.asarray(self.charges)
        t = np.asarray(self.times)
        nz = np.flatnonzero(q != 0.0)
        if nz.size == 0:
            return None
        lo = t[nz[0] - 1] if nz[0] > 0 else t[0]
        hi = t[nz[-1] + 1] if nz[-1] < t.size - 1 else t[-1]
        return float(lo), float(hi)

    def area(self) -> float:
        return float(np.trapezoid(self.charges, self.times))

    def scaled(self, factor: float) -> "ChargeWaveform":
        return ChargeWaveform(self.times, tuple(factor * q for q in self.charges))

    @classmethod
    def zero(cls) -> "ChargeWaveform":
        return cls((0.0,), (0.0,))

    @classmethod
    def rectangular(cls, start, duration, charge, rise=None) -> "ChargeWaveform":
        """Flat-top pulse with linear edges; area equals ``charge * duration``."""
        if rise is None:
            rise = 1e-3 * duration
        t = [start - rise / 2, start + rise / 2, start + duration - rise / 2, start + duration + rise / 2]
        return cls(tuple(t), (0.0, charge, charge, 0.0))

    @classmethod
    def triangular(cls, start, duration, peak) -> "ChargeWaveform":
        return cls((start, start + duration / 2, start + duration), (0.0, peak, 0.0))

    @classmethod
    def raised_cosine(cls, start, duration, peak, samples=401) -> "ChargeWaveform":
        t = np.linspace(start, start + duration, samples)
        q = 0.5 * peak * (1.0 - np.cos(2 * np.pi * (t - start) / duration))
        q[0] = q[-1] = 0.0
        return cls(tuple(t), tuple(q))


@dataclass(frozen=True)
class SphericalShell:
    center: tuple
    radius: float
    waveform: ChargeWaveform
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", _tuple3(self.center, "center"))
        object.__setattr__(self, "radius", float(self.radius))
        _positive(self, "radius")

    def charge(self, t):
        return self.waveform(t)


@dataclass(frozen=True)
class CylindricalShell:
    """Open tube with charge spread uniformly over its lateral surface."""

    center: tuple
    axis: tuple
    radius: float
    length: float
    waveform: ChargeWaveform
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", _tuple3(self.center, "center"))
        object.__setattr__(self, "axis", _unit_tuple(self.axis))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "length", float(self.length))
        _positive(self, "radius", "length")

    def charge(self, t):
        return self.waveform(t)

    def contains(self, points) -> np.ndarray:
        z, rho = _axial_coords(points, self.center, self.axis)
        return (rho < self.radius) & (np.abs(z) < 0.5 * self.length)


ChargeSource = SphericalShell | CylindricalShell


# --------------------------------------------------------------------------
# proximity


def _axial_coords(points, center, axis):
    pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(center)
    n = np.asarray(axis)
    z = pts @ n
    rho = np.linalg.norm(pts - z[:, None] * n, axis=1)
    return z, rho


def _segment_distance(points, a, b):
    ab = b - a
    t = np.clip(((points - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(points - (a + t[:, None] * ab), axis=1)


def source_distance(source, points) -> np.ndarray:
    """Distance from each point to the material of ``source``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if isinstance(source, CircularLoop):
        z, rho = _axial_coords(pts, source.center, source.axis)
        return np.hypot(rho - source.radius, z)
    if isinstance(source, (Solenoid, CylindricalShell)):
        z, rho = _axial_coords(pts, source.center, source.axis)
        overhang = np.maximum(np.abs(z) - 0.5 * source.length, 0.0)
        return np.hypot(rho - source.radius, overhang)
    if isinstance(source, SegmentChain):
        chain = np.asarray(source.points)
        return np.min([_segment_distance(pts, chain[i], chain[i + 1]) for i in range(len(chain) - 1)], axis=0)
    if isinstance(source, SphericalShell):
        return np.abs(np.linalg.norm(pts - np.asarray(source.center), axis=1) - source.radius)
    raise TypeError(f"unknown source type {type(source).__name__}")


def check_exclusion(sources, points, exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS):
    """Raise :class:`ProximityError` if any point is closer than ``exclusion_radius`` to a source."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    for index, source in enumerate(sources):
        d = source_distance(source, pts)
        k = int(np.argmin(d))
        if d[k] < exclusion_radius:
            label = source.name or f"#{index}"
            raise ProximityError(
                f"point {pts[k].tolist()} is {d[k]:.3e} m from {type(source).__name__} {label} "
                f"(exclusion radius {exclusion_radius:.3e} m)",
                source=source,
                distance=float(d[k]),
            )


def min_source_distance(sources, points) -> float:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return float(min(np.min(source_distance(s, pts)) for s in sources))


# --------------------------------------------------------------------------
# particle and paths


@dataclass(frozen=True)
class ParticleState:
    q: float
    m: float
    r: np.ndarray = field(compare=False)
    p: np.ndarray = field(compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise ValueError(f"mass must be positive, got {self.m!r}")
        object.__setattr__(self, "r", as_vec3(self.r, "r"))
        object.__setattr__(self, "p", as_vec3(self.p, "p"))


class SampledPath:
    """Time-stamped polyline. Arrays are read-only."""

    def __init__(self, times, points, closed: bool = False):
        t = np.array(times, dtype=float)
        pts = np.array(points, dtype=float)
        if t.ndim != 1 or pts.shape != (t.size, 3):
            raise ValueError(f"need N times and N x 3 points, got {t.shape} and {pts.shape}")
        if t.size < 2:
            raise ValueError("a path needs at least two samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(pts))):
            raise ValueError("path contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise ValueError("path timestamps must be strictly increasing")
        if closed and np.linalg.norm(pts[0] - pts[-1]) > 1e-9:
            raise GeometryError("closed path must start and end at the same point (1e-9 m)")
        t.setflags(write=False)
        pts.setflags(write=False)
        self.times = t
        self.points = pts
        self.closed = bool(closed)

    def __len__(self):
        return self.times.size

    def __repr__(self):
        return f"SampledPath(n={len(self)}, closed={self.closed}, t=[{self.times[0]:g}, {self.times[-1]:g}])"

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.points[1:] + self.points[:-1])

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.times)

    def length(self) -> float:
        return float(np.linalg.norm(self.steps, axis=1).sum())

    def velocities(self) -> np.ndarray:
        """Centered differences in the interior, one-sided at the ends."""
        return np.gradient(self.points, self.times, axis=0, edge_order=1)

    def momenta(self, mass: float) -> np.ndarray:
        return mass * self.velocities()

    def particle_states(self, q: float, m: float) -> list[ParticleState]:
        return [ParticleState(q, m, r, p) for r, p in zip(self.points, self.momenta(m))]

    def position_at(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([np.interp(t, self.times, self.points[:, i]) for i in range(3)], axis=1)

    def reversed(self) -> "SampledPath":
        """Same geometry traversed backwards over the same time span."""
        t = self.times[0] + self.times[-1] - self.times[::-1]
        return SampledPath(t, self.points[::-1], self.closed)

    def shifted_in_time(self, offset: float) -> "SampledPath":
        return SampledPath(self.times + offset, self.points, self.closed)

    def line_integral(self, field_fn: Callable[[np.ndarray], np.ndarray]) -> float:
        """Midpoint-rule line integral of a vector field given as ``f(points) -> (N, 3)``."""
        return float(np.einsum("ij,ij->", field_fn(self.midpoints), self.steps))

    # constructors ---------------------------------------------------------

    @classmethod
    def from_points(cls, points, t0=0.0, speed=1.0, closed=False) -> "SampledPath":
        """Timestamps from arc length at constant ``speed``."""
        pts = np.asarray(points, dtype=float)
        s = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
        return cls(t0 + s / speed, pts, closed)

    @classmethod
    def polygon(cls, vertices, t0=0.0, speed=1.0) -> "SampledPath":
        verts = np.asarray(vertices, dtype=float)
        if verts.shape[1] == 2:
            verts = np.column_stack([verts, np.zeros(len(verts))])
        return cls.from_points(np.vstack([verts, verts[:1]]), t0, speed, closed=True)

    @classmethod
    def arc(cls, center, radius, start_angle, end_angle, n=64, t0=0.0, speed=1.0,
            axis=(0.0, 0.0, 1.0)) -> "SampledPath":
        """Polygonal arc of ``n`` segments about ``axis``; closes if it spans 2 pi."""
        u, v, _ = orthonormal_frame(axis)
        ang = np.linspace(start_angle, end_angle, int(n) + 1)
        pts = np.asarray(center, float) + radius * (np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v))
        closed = math.isclose(abs(end_angle - start_angle), 2 * math.pi, rel_tol=0, abs_tol=1e-12)
        if closed:
            pts[-1] = pts[0]
        return cls.from_points(pts, t0, speed, closed)

    @classmethod
    def spiral(cls, center, r0, r1, angle0, angle1, n=64, t0=0.0, speed=1.0,
               axis=(0.0, 0.0, 1.0)) -> "SampledPath":
        """Radius and polar angle both linear in the sample index."""
        u, v, _ = orthonormal_frame(axis)
        s = np.linspace(0.0, 1.0, int(n) + 1)
        rad = r0 + (r1 - r0) * s
        ang = angle0 + (angle1 - angle0) * s
        pts = np.asarray(center, float) + rad[:, None] * (np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v))
        return cls.from_points(pts, t0, speed)


def join_paths(first: SampledPath, second: SampledPath) -> SampledPath:
    """Concatenate two paths that meet end-to-start; the result is closed if it returns home."""
    if np.linalg.norm(first.end - second.start) > 1e-9:
        raise GeometryError("paths do not meet")
    offset = first.times[-1] - second.times[0]
    t = np.concatenate([first.times, second.times[1:] + offset])
    pts = np.vstack([first.points, second.points[1:]])
    closed = np.linalg.norm(pts[0] - pts[-1]) <= 1e-9
    if closed:
        pts[-1] = pts[0]
    return SampledPath(t, pts, closed)


def resample_path(path: SampledPath, max_segment_length: float) -> SampledPath:
    """Subdivide every segment longer than ``max_segment_length`` into equal pieces."""
    if not (max_segment_length > 0):
        raise ValueError("max_segment_length must be positive")
    steps = np.linalg.norm(path.steps, axis=1)
    pieces = np.maximum(1, np.ceil(steps / max_segment_length * (1 - 1e-12)).astype(int))
    times = [path.times[:1]]
    points = [path.points[:1]]
    for k, m in enumerate(pieces):
        frac = np.arange(1, m + 1) / m
        times.append(path.times[k] + frac * (path.times[k + 1] - path.times[k]))
        pts = path.points[k] + np.outer(frac, path.points[k + 1] - path.points[k])
        pts[-1] = path.points[k + 1]
        points.append(pts)
    t = np.concatenate(times)
    t[-1] = path.times[-1]
    return SampledPath(t, np.vstack(points), path.closed)


def validate_path_clearance(path: SampledPath, sources: Sequence, exclusion_radius=DEFAULT_EXCLUSION_RADIUS):
    check_exclusion(sources, np.vstack([path.points, path.midpoints]), exclusion_radius)
