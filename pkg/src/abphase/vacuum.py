"""Vacuum-energy shifts of a charged particle near sources, and the phases they imprint.

Magnetic case::

    dE = -(q/m) p . A(r)                                   (real space)
    dE = -(q / (m c^2 eps0)) \\int d^3r' J_i(r') K_ij(r - r') p_j   (mode space)

where ``K`` is the photon propagator kernel restricted to a polarization set
(see :mod:`abphase.kernels`). With the full set the two agree because
mu0 = 1 / (c^2 eps0).

Electric case::

    dE = q U(r, t)

Phases follow ``phi = -\\int (dE_b - dE_a) dt / hbar``. On the magnetic
routes p/m is the path velocity, so each segment contributes
``(q/hbar) A(midpoint) . dl`` and the time step cancels exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .fields import expand_current_sources, loop_quadrature, unit_scalar_potentials, vector_potential
from .errors import SingularSeparationError
from .kernels import Polarization
from .model import (
    DEFAULT_EXCLUSION_RADIUS,
    SI,
    CircularLoop,
    CylindricalShell,
    ParticleState,
    PhysicalConstants,
    SampledPath,
    SegmentChain,
    Solenoid,
    SphericalShell,
    check_exclusion,
    min_source_distance,
    resample_path,
)

ROUTES = ("real", "modespace", "electric")
_CURRENT_TYPES = (CircularLoop, Solenoid, SegmentChain)
_CHARGE_TYPES = (SphericalShell, CylindricalShell)
_CHUNK = 2_000_000


@dataclass(frozen=True)
class EnergyShift:
    value: float
    route: str
    at: np.ndarray = field(compare=False)
    t: float = 0.0
    pol: Polarization | None = None


# --------------------------------------------------------------------------
# mode-space source quadrature


def source_elements(sources, *, n_loops=None, loop_nodes=64, segment_nodes=16):
    """Discretize current sources into point elements: positions (M, 3) and I dl (M, 3).

    Loops use the trapezoid rule in the azimuth (the Gaussian rule for
    periodic integrands); straight segments use Gauss-Legendre nodes.
    """
    loops, chains = expand_current_sources(sources, n_loops)
    pos, idl = [np.zeros((0, 3))], [np.zeros((0, 3))]
    for lp in loops:
        p, d = loop_quadrature(lp, loop_nodes)
        pos.append(p)
        idl.append(d)
    if chains:
        g, w = np.polynomial.legendre.leggauss(segment_nodes)
        for ch in chains:
            pts = np.asarray(ch.points)
            for r1, r2 in zip(pts[:-1], pts[1:]):
                pos.append(0.5 * (r1 + r2) + 0.5 * np.outer(g, r2 - r1))
                idl.append(ch.current * 0.5 * np.outer(w, r2 - r1))
    return np.vstack(pos), np.vstack(idl)


def modespace_potential(sources, r, pol=Polarization.FULL, *, method="quadrature", n_loops=None,
                        loop_nodes=64, segment_nodes=16, constants: PhysicalConstants = SI,
                        exclusion_radius=DEFAULT_EXCLUSION_RADIUS, ladder=kernels.DEFAULT_LADDER,
                        kernel_tol=kernels.QUADRATURE_TOL):
    """Vector ``V`` with dE = -(q/m) p . V from the polarization-restricted mode integral.

    ``V_j(r) = (1/(c^2 eps0)) \\int d^3r' J_i(r') K_ij(r - r')``.
    """
    pts = np.atleast_2d(np.asarray(r, dtype=float))
    single = np.asarray(r).ndim == 1
    check_exclusion(sources, pts, exclusion_radius)
    alpha, beta = kernels.kernel_coefficients(pol, method, ladder, kernel_tol)
    pos, idl = source_elements(sources, n_loops=n_loops, loop_nodes=loop_nodes, segment_nodes=segment_nodes)
    out = kernel_sum(pts, pos, idl, alpha, beta)
    out /= constants.c**2 * constants.eps0
    return out[0] if single else out


def kernel_sum(pts, pos, idl, alpha, beta, block=256):
    """``sum_m J_m . K(p - x_m)`` for all field points p, as dense matrix products.

    With w = 1/d^3 and s_m = J_m . (p - x_m) the R^R^ term is
    ``p (sum w s) - sum w s x_m``; expanding s leaves only products of
    the weight matrices with per-source columns.
    """
    pts = np.asarray(pts, dtype=float)
    out = np.zeros_like(pts)
    if len(pos) == 0:
        return out
    step = max(1, min(block, _CHUNK // len(pos)))
    for lo in range(0, len(pts), step):
        p = pts[lo:lo + step]
        origin = p.mean(axis=0)
        p = p - origin
        x = pos - origin
        diff = p[:, None, :] - x[None, :, :]
        d = np.sqrt(np.einsum("pmi,pmi->pm", diff, diff))
        if np.any(d < kernels.MIN_SEPARATION):
            raise SingularSeparationError("source element coincides with the field point")
        inv = 1.0 / d
        res = alpha * (inv @ idl)
        if beta != 0.0:
            jx = np.einsum("mi,mi->m", idl, x)
            cols = np.column_stack([idl, jx, (idl[:, :, None] * x[:, None, :]).reshape(-1, 9), jx[:, None] * x])
            wm = (inv**3) @ cols
            wj, wjx, wjxx, wjxx2 = wm[:, :3], wm[:, 3], wm[:, 4:13].reshape(-1, 3, 3), wm[:, 13:]
            sum_ws = np.einsum("pi,pi->p", wj, p) - wjx
            sum_wsx = np.einsum("pk,pki->pi", p, wjxx) - wjxx2
            res = res + beta * (p * sum_ws[:, None] - sum_wsx)
        out[lo:lo + step] = res
    return out


# --------------------------------------------------------------------------
# energy shifts


def energy_shift_magnetic(particle: ParticleState, sources, **kw) -> EnergyShift:
    a = vector_potential(sources, particle.r, **kw)
    return EnergyShift(-(particle.q / particle.m) * float(particle.p @ a), "real", particle.r)


def energy_shift_modespace(particle: ParticleState, sources, pol=Polarization.FULL, **kw) -> EnergyShift:
    pol = Polarization.parse(pol)
    v = modespace_potential(sources, particle.r, pol, **kw)
    return EnergyShift(-(particle.q / particle.m) * float(particle.p @ v), "modespace", particle.r, pol=pol)


def energy_shift_electric(particle: ParticleState, sources, t: float, *, constants=SI,
                          exclusion_radius=DEFAULT_EXCLUSION_RADIUS) -> EnergyShift:
    unit = unit_scalar_potentials(sources, particle.r, constants=constants, exclusion_radius=exclusion_radius)[0]
    charges = np.array([s.charge(t) for s in sources], dtype=float)
    return EnergyShift(particle.q * float(unit @ charges), "electric", particle.r, float(t))


# --------------------------------------------------------------------------
# phase accumulation


@dataclass
class PhaseResult:
    phase_a: float
    phase_b: float
    phase_diff: float
    per_segment_a: np.ndarray
    per_segment_b: np.ndarray
    route: str
    pol: Polarization | None = None

    @property
    def per_segment(self) -> list[tuple[str, int, float]]:
        return ([("a", i, float(x)) for i, x in enumerate(self.per_segment_a)]
                + [("b", i, float(x)) for i, x in enumerate(self.per_segment_b)])

    @property
    def abs_phase_diff(self) -> float:
        return abs(self.phase_diff)


def _split_sources(sources):
    current = [s for s in sources if isinstance(s, _CURRENT_TYPES)]
    charge = [s for s in sources if isinstance(s, _CHARGE_TYPES)]
    if len(current) + len(charge) != len(sources):
        raise TypeError("unknown source type in source list")
    return current, charge


def auto_segment_length(paths, sources, fraction=1 / 200):
    return fraction * min(min_source_distance(sources, p.points) for p in paths)


def _magnetic_segments(path, sources, q, route, pol, constants, gauge, numerics):
    mids = path.midpoints
    n_loops = numerics.get("n_loops")
    excl = numerics.get("exclusion_radius", DEFAULT_EXCLUSION_RADIUS)
    check_exclusion(sources, path.points, excl)
    if route == "real":
        a = vector_potential(sources, mids, n_loops=n_loops, constants=constants, exclusion_radius=excl)
    else:
        a = modespace_potential(sources, mids, pol, n_loops=n_loops, constants=constants, exclusion_radius=excl,
                                method=numerics.get("kernel_method", "quadrature"),
                                loop_nodes=numerics.get("loop_nodes", 64))
    seg = (q / constants.hbar) * np.einsum("ij,ij->i", a, path.steps)
    if gauge is not None:
        chi = np.asarray(gauge(path.points), dtype=float)
        seg = seg + (q / constants.hbar) * np.diff(chi)
    return seg


def _electric_segments(path, sources, q, constants, numerics):
    excl = numerics.get("exclusion_radius", DEFAULT_EXCLUSION_RADIUS)
    check_exclusion(sources, path.points, excl)
    t0, t1 = path.times[0], path.times[-1]
    grid = [path.times]
    for s in sources:
        bp = s.waveform.breakpoints
        grid.append(bp[(bp > t0) & (bp < t1)])
    times = np.unique(np.concatenate(grid))
    charges = np.column_stack([s.charge(times) for s in sources])
    # U vanishes wherever every charge does; skip the Coulomb quadrature there
    live = np.any(charges != 0.0, axis=1)
    u = np.zeros(times.size)
    if np.any(live):
        unit = unit_scalar_potentials(sources, path.position_at(times[live]), constants=constants,
                                      exclusion_radius=excl)
        u[live] = np.sum(unit * charges[live], axis=1)
    return -(q / constants.hbar) * 0.5 * (u[1:] + u[:-1]) * np.diff(times)


def accumulate_phase(path_a: SampledPath, path_b: SampledPath, sources, route="real", *,
                     pol=Polarization.FULL, q=None, constants: PhysicalConstants = SI, gauge=None,
                     max_segment_length="auto", numerics=None) -> PhaseResult:
    """Phase imprinted on each arm and the difference arm b minus arm a.

    ``gauge`` is an optional scalar function chi(points) -> (N,); its gradient
    is added to the vector potential and integrated exactly per segment.
    ``max_segment_length='auto'`` refines both arms of a magnetic route to
    1/200 of the smallest source distance (the electric route integrates in
    time and keeps the paths as given); pass None to never refine.
    """
    numerics = dict(numerics or {})
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    q = constants.e_charge if q is None else q
    current, charge = _split_sources(list(sources))
    if route == "electric":
        if current or not charge:
            raise ValueError("electric route needs charge sources only")
        if gauge is not None:
            raise ValueError("gauge shifts apply to the magnetic routes only")
    elif charge or not current:
        raise ValueError(f"{route} route needs current sources only")
    pol = Polarization.parse(pol) if route == "modespace" else None

    excl = numerics.get("exclusion_radius", DEFAULT_EXCLUSION_RADIUS)
    for path in (path_a, path_b):
        check_exclusion(sources, path.points, excl)
    if max_segment_length == "auto":
        max_segment_length = None if route == "electric" else auto_segment_length([path_a, path_b], sources)
    if max_segment_length is not None:
        path_a = resample_path(path_a, max_segment_length)
        path_b = resample_path(path_b, max_segment_length)

    if route == "electric":
        seg_a = _electric_segments(path_a, charge, q, constants, numerics)
        seg_b = _electric_segments(path_b, charge, q, constants, numerics)
    else:
        seg_a = _magnetic_segments(path_a, current, q, route, pol, constants, gauge, numerics)
        seg_b = _magnetic_segments(path_b, current, q, route, pol, constants, gauge, numerics)
    phase_a = math.fsum(seg_a)
    phase_b = math.fsum(seg_b)
    return PhaseResult(phase_a, phase_b, phase_b - phase_a, seg_a, seg_b, route, pol)


def segment_energy_shifts(path: SampledPath, sources, route="real", *, pol=Polarization.FULL, q=1.0, m=1.0,
                          constants: PhysicalConstants = SI, numerics=None) -> np.ndarray:
    """dE at each segment midpoint with p = m dl/dt (magnetic routes)."""
    numerics = dict(numerics or {})
    mids = path.midpoints
    p = m * path.steps / path.dt[:, None]
    if route == "real":
        a = vector_potential(sources, mids, n_loops=numerics.get("n_loops"), constants=constants)
    elif route == "modespace":
        a = modespace_potential(sources, mids, pol, n_loops=numerics.get("n_loops"), constants=constants,
                                method=numerics.get("kernel_method", "quadrature"),
                                loop_nodes=numerics.get("loop_nodes", 64))
    else:
        raise ValueError("segment_energy_shifts covers the magnetic routes")
    return -(q / m) * np.einsum("ij,ij->i", p, a)
