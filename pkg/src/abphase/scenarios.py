"""The paper's three interferometer scenarios and the geometry builders they use.

* magnetic (Fig. 1): two arms forming a closed circuit around a solenoid;
  the phase is checked against an independent Biot-Savart flux.
* intermediate (Fig. 2): source-to-trap legs that do not enclose the
  solenoid; expected phase (theta / 2 pi) q Phi0 / hbar.
* electric (Fig. 3): arms through two charged tubes pulsed while the
  particle is inside both.

Sign convention throughout: phase_diff = arm b minus arm a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ScenarioValidityError
from .fields import flux_through_loop, unit_scalar_potentials
from .kernels import Polarization
from .model import (
    SI,
    ChargeWaveform,
    CylindricalShell,
    PhysicalConstants,
    SampledPath,
    Solenoid,
    join_paths,
    orthonormal_frame,
    resample_path,
)
from .vacuum import PhaseResult, accumulate_phase

ENDPOINT_TOL = 1e-9
# solenoid loop count for the flux oracle when none is given; the Biot-Savart
# surface integral costs ~n_loops**2 and moves by ~3e-5 between 400 and 2000
FLUX_LOOPS = 400


# --------------------------------------------------------------------------
# geometry builders


def split_circuit(vertices, split_index=None, *, t0=0.0, speed=1.0):
    """Cut a closed polygon (counterclockwise, no repeated end vertex) into two arms.

    Arm b follows the polygon from vertex 0 to ``split_index``; arm a runs the
    other way round, so b minus a is the counterclockwise circulation.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or len(verts) < 3:
        raise GeometryError("a circuit needs at least three vertices")
    if verts.shape[1] == 2:
        verts = np.column_stack([verts, np.zeros(len(verts))])
    k = len(verts) // 2 if split_index is None else int(split_index)
    if not 0 < k < len(verts):
        raise GeometryError("split index must fall strictly inside the polygon")
    arm_b = SampledPath.from_points(verts[:k + 1], t0, speed)
    arm_a = SampledPath.from_points(np.vstack([verts[:1], verts[k:][::-1]]), t0, speed)
    return arm_a, arm_b


def circle_vertices(center, radius, n=256, axis=(0.0, 0.0, 1.0), phase=0.0):
    u, v, _ = orthonormal_frame(axis)
    ang = phase + 2 * np.pi * np.arange(n) / n
    return np.asarray(center, float) + radius * (np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v))


def circle_arms(center, radius, n=256, axis=(0.0, 0.0, 1.0), *, speed=1.0):
    """Two semicircles from angle 0 to pi: arm b counterclockwise, arm a clockwise."""
    return split_circuit(circle_vertices(center, radius, n, axis), n // 2, speed=speed)


def trap_legs(solenoid: Solenoid, theta, source_radius, trap_radius=None, *, source_angle=math.pi / 2,
              n=256, speed=1.0):
    """Source-to-trap legs of Fig. 2 in the solenoid mid-plane.

    The source sits at ``source_angle``; trap A at source_angle - theta/2 and
    trap B at source_angle + theta/2, so the legs subtend theta about the axis
    and arm b minus arm a gains +theta/(2 pi) of the enclosed-flux phase.
    The trap radius defaults to 3/4 of the source radius so that the legs
    keep a radial drop even at theta = 0.
    """
    trap_radius = 0.75 * source_radius if trap_radius is None else trap_radius
    if trap_radius == source_radius and theta == 0:
        raise GeometryError("source and traps coincide: the legs have zero length")
    leg_a = SampledPath.spiral(solenoid.center, source_radius, trap_radius, source_angle,
                               source_angle - theta / 2, n, speed=speed, axis=solenoid.axis)
    leg_b = SampledPath.spiral(solenoid.center, source_radius, trap_radius, source_angle,
                               source_angle + theta / 2, n, speed=speed, axis=solenoid.axis)
    return leg_a, leg_b


def tube_arms(tube_a: CylindricalShell, tube_b: CylindricalShell, split_point, merge_point, *,
              margin=None, speed=1.0):
    """Arms from a common split point, along each tube axis, to a common merge point."""
    arms = []
    for tube in (tube_a, tube_b):
        c, n = np.asarray(tube.center), np.asarray(tube.axis)
        m = 0.1 * tube.length if margin is None else margin
        entry = c - (0.5 * tube.length + m) * n
        exit_ = c + (0.5 * tube.length + m) * n
        arms.append(SampledPath.from_points([split_point, entry, c, exit_, merge_point], speed=speed))
    return arms[0], arms[1]


def pulse(shape: str, start, duration, area):
    """Waveform of the given shape whose time integral equals ``area``."""
    if shape == "rectangular":
        return ChargeWaveform.rectangular(start, duration, area / duration)
    if shape == "triangular":
        return ChargeWaveform.triangular(start, duration, 2 * area / duration)
    if shape == "raised_cosine":
        unit = ChargeWaveform.raised_cosine(start, duration, 1.0)
        return unit.scaled(area / unit.area())
    if shape == "zero":
        return ChargeWaveform.zero()
    raise ValueError(f"unknown pulse shape {shape!r}; expected rectangular, triangular, raised_cosine or zero")


def charge_for_potential(tube_a, tube_b, delta_u, constants: PhysicalConstants = SI):
    """Charge on tube a that makes U(center a) - U(center b) = delta_u with tube b neutral."""
    centers = np.array([tube_a.center, tube_b.center])
    unit = unit_scalar_potentials([tube_a], centers, constants=constants)[:, 0]
    return delta_u / (unit[0] - unit[1])


# --------------------------------------------------------------------------
# reports


@dataclass
class MagneticReport:
    result: PhaseResult
    flux: float
    q_flux_over_hbar: float
    ratio: float
    nominal_phase: float | None

    @property
    def phase_diff(self) -> float:
        return self.result.phase_diff


@dataclass
class IntermediateReport:
    result: PhaseResult
    theta: float
    prediction: float
    ab_phase: float
    trap_radii: tuple
    swept_angle: float
    screen_phase: float

    @property
    def phase_diff(self) -> float:
        return self.result.phase_diff


@dataclass
class ElectricReport:
    result: PhaseResult
    prediction: float
    pulse_area: float
    window: tuple

    @property
    def phase_diff(self) -> float:
        return self.result.phase_diff


# --------------------------------------------------------------------------
# runners


def _check_shared_endpoints(arm_a, arm_b):
    if (np.linalg.norm(arm_a.start - arm_b.start) > ENDPOINT_TOL
            or np.linalg.norm(arm_a.end - arm_b.end) > ENDPOINT_TOL):
        raise GeometryError("arms must share their start and end points (1e-9 m)")


def _charge(q, constants):
    return constants.e_charge if q is None else float(q)


def run_magnetic_scenario(sources, arm_a: SampledPath, arm_b: SampledPath, *, q=None,
                          constants: PhysicalConstants = SI, route="real", pol=Polarization.FULL,
                          n_loops=None, gauge=None, numerics=None, flux_n_loops=None,
                          flux_options=None) -> MagneticReport:
    """Phase difference of two arms around current sources, checked against the enclosed flux.

    The flux oracle discretizes solenoids with ``flux_n_loops`` loops: by
    default the same count as the phase when ``n_loops`` is given, else
    ``FLUX_LOOPS``.
    """
    _check_shared_endpoints(arm_a, arm_b)
    q = _charge(q, constants)
    numerics = dict(numerics or {})
    numerics.setdefault("n_loops", n_loops)
    result = accumulate_phase(arm_a, arm_b, sources, route, pol=pol, q=q, constants=constants,
                              gauge=gauge, numerics=numerics)
    circuit = join_paths(arm_b, arm_a.reversed())
    if flux_n_loops is None:
        flux_n_loops = numerics["n_loops"] if numerics["n_loops"] is not None else FLUX_LOOPS
    flux = flux_through_loop(sources, circuit, n_loops=flux_n_loops, constants=constants,
                             **dict(flux_options or {}))
    qfh = q * flux / constants.hbar
    ratio = result.phase_diff / qfh if qfh != 0.0 else math.nan
    solenoids = [s for s in sources if isinstance(s, Solenoid)]
    nominal = q * sum(s.nominal_flux(constants) for s in solenoids) / constants.hbar if solenoids else None
    return MagneticReport(result, flux, qfh, ratio, nominal)


def _unwrapped_angle(path, center, axis):
    u, v, _ = orthonormal_frame(axis)
    rel = path.points - np.asarray(center)
    return float(np.sum(np.diff(np.unwrap(np.arctan2(rel @ v, rel @ u)))))


def _axis_radius(point, center, axis):
    rel = np.asarray(point) - np.asarray(center)
    n = np.asarray(axis)
    return float(np.linalg.norm(rel - (rel @ n) * n))


def run_intermediate_scenario(solenoid: Solenoid, theta: float, *, source_radius=None, trap_radius=None,
                              legs=None, screen_point=None, samples=256, q=None,
                              constants: PhysicalConstants = SI, route="real", pol=Polarization.FULL,
                              n_loops=None, numerics=None) -> IntermediateReport:
    """Intermediate AB phase for legs from a common source to two traps.

    Either pass ``legs = (leg_a, leg_b)`` or let :func:`trap_legs` build them
    from ``source_radius`` / ``trap_radius``. The solenoid is on during the
    legs; if ``screen_point`` is given, the straight trap-to-screen legs are
    accumulated with the current off.
    """
    q = _charge(q, constants)
    if legs is None:
        if source_radius is None:
            source_radius = 4.0 * solenoid.radius
        legs = trap_legs(solenoid, theta, source_radius, trap_radius, n=samples)
    leg_a, leg_b = legs
    if np.linalg.norm(leg_a.start - leg_b.start) > ENDPOINT_TOL:
        raise GeometryError("trap legs must leave from the same source point")
    radii = (_axis_radius(leg_a.end, solenoid.center, solenoid.axis),
             _axis_radius(leg_b.end, solenoid.center, solenoid.axis))
    if abs(radii[0] - radii[1]) > ENDPOINT_TOL * max(1.0, max(radii)):
        raise GeometryError(f"traps must sit at equal distance from the solenoid axis, got "
                            f"{radii[0]:.9g} m and {radii[1]:.9g} m")
    numerics = dict(numerics or {})
    numerics.setdefault("n_loops", n_loops)
    result = accumulate_phase(leg_a, leg_b, [solenoid], route, pol=pol, q=q, constants=constants,
                              numerics=numerics)
    screen_phase = 0.0
    if screen_point is not None:
        off = [solenoid.scaled(0.0)]
        screen_a = SampledPath.from_points([leg_a.end, screen_point], leg_a.times[-1])
        screen_b = SampledPath.from_points([leg_b.end, screen_point], leg_b.times[-1])
        screen_phase = accumulate_phase(screen_a, screen_b, off, route, pol=pol, q=q, constants=constants,
                                        numerics=numerics).phase_diff
    ab = q * solenoid.nominal_flux(constants) / constants.hbar
    swept = (_unwrapped_angle(leg_b, solenoid.center, solenoid.axis)
             - _unwrapped_angle(leg_a, solenoid.center, solenoid.axis))
    return IntermediateReport(result, float(theta), theta / (2 * math.pi) * ab, ab, radii, swept, screen_phase)


def inside_interval(path: SampledPath, tube: CylindricalShell, resolution=None):
    """(first, last) time the path is inside the tube, sampled at ``resolution`` metres; None if never."""
    resolution = min(tube.radius, tube.length) / 100 if resolution is None else resolution
    fine = resample_path(path, resolution)
    inside = tube.contains(fine.points)
    if not np.any(inside):
        return None
    idx = np.flatnonzero(inside)
    return float(fine.times[idx[0]]), float(fine.times[idx[-1]])


def run_electric_scenario(tube_a: CylindricalShell, tube_b: CylindricalShell, arm_a: SampledPath,
                          arm_b: SampledPath, *, q=None, constants: PhysicalConstants = SI,
                          numerics=None) -> ElectricReport:
    """Electric AB phase; tube charges must vary only while both arms are inside their tubes."""
    q = _charge(q, constants)
    spans = [inside_interval(arm_a, tube_a), inside_interval(arm_b, tube_b)]
    if None in spans:
        raise ScenarioValidityError("each arm must pass through the inside of its tube")
    window = (max(s[0] for s in spans), min(s[1] for s in spans))
    if window[0] >= window[1]:
        raise ScenarioValidityError("the arms are never inside their tubes at the same time")
    for tube in (tube_a, tube_b):
        sup = tube.waveform.support()
        if sup is not None and not (window[0] < sup[0] and sup[1] < window[1]):
            raise ScenarioValidityError(
                f"charge on tube {tube.name or '?'} varies over [{sup[0]:.6g}, {sup[1]:.6g}] s, outside the "
                f"window [{window[0]:.6g}, {window[1]:.6g}] s when both arms are inside their tubes")
    tubes = [tube_a, tube_b]
    result = accumulate_phase(arm_a, arm_b, tubes, "electric", q=q, constants=constants, numerics=numerics)
    unit = unit_scalar_potentials(tubes, np.array([tube_a.center, tube_b.center]), constants=constants)
    areas = np.array([t.waveform.area() for t in tubes])
    pulse_area = float((unit[0] - unit[1]) @ areas)
    return ElectricReport(result, q * pulse_area / constants.hbar, pulse_area, window)
