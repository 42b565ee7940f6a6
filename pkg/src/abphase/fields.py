"""Real-space potentials and fields of current and charge sources.

* :func:`vector_potential` -- (mu0/4pi) \\int J / |r - r'|, loops by the
  elliptic-integral closed form, segments analytically, solenoids as loop stacks.
* :func:`magnetic_field` -- Biot-Savart by direct quadrature over the discretized
  wire; kept independent of the vector potential so it can serve as a flux oracle.
* :func:`flux_through_loop` -- surface integral of B over a fan-triangulated disc.
* :func:`scalar_potential` -- quasi-static Coulomb integral of charged shells.

Orientation: positive loop/solenoid current circulates counterclockwise about
``+axis`` and produces flux along ``+axis``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import elliptic
from .errors import GeometryError
from .model import (
    DEFAULT_EXCLUSION_RADIUS,
    SI,
    CircularLoop,
    CylindricalShell,
    PhysicalConstants,
    SampledPath,
    SegmentChain,
    Solenoid,
    SphericalShell,
    check_exclusion,
    orthonormal_frame,
    solenoid_to_loops,
    source_distance,
)

_CHUNK = 2_000_000  # array elements per vectorized block


@dataclass(frozen=True)
class FieldPoint:
    at: np.ndarray
    a_vec: np.ndarray
    b_vec: np.ndarray
    u_scalar: float


def _as_points(r):
    pts = np.asarray(r, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != 3 or not np.all(np.isfinite(pts)):
        raise ValueError("field points must be finite 3-vectors")
    return pts, single


def expand_current_sources(sources, n_loops=None):
    """Flatten solenoids into loop stacks; drop sources carrying no current."""
    loops, chains = [], []
    for s in sources:
        if isinstance(s, Solenoid):
            if s.current != 0.0:
                loops.extend(solenoid_to_loops(s, n_loops))
        elif isinstance(s, CircularLoop):
            if s.current != 0.0:
                loops.append(s)
        elif isinstance(s, SegmentChain):
            if s.current != 0.0:
                chains.append(s)
        else:
            raise TypeError(f"{type(s).__name__} is not a current source")
    return loops, chains


def _loop_arrays(loops):
    centers = np.array([lp.center for lp in loops])
    axes = np.array([lp.axis for lp in loops])
    radii = np.array([lp.radius for lp in loops])
    currents = np.array([lp.current for lp in loops])
    return centers, axes, radii, currents


# --------------------------------------------------------------------------
# vector potential


def loop_vector_potential(loops, pts, mu0):
    """Sum of closed-form loop potentials at ``pts`` (N, 3)."""
    out = np.zeros_like(pts)
    if not loops:
        return out
    centers, axes, radii, currents = _loop_arrays(loops)
    step = max(1, _CHUNK // len(loops))
    for lo in range(0, len(pts), step):
        p = pts[lo:lo + step]
        rel = p[None, :, :] - centers[:, None, :]                 # (L, n, 3)
        z = np.einsum("lnk,lk->ln", rel, axes)
        rho_vec = rel - z[..., None] * axes[:, None, :]
        rho = np.linalg.norm(rho_vec, axis=-1)
        a = radii[:, None]
        d2 = (a + rho) ** 2 + z**2
        m = 4.0 * a * rho / d2
        a_phi_over_rho = np.zeros_like(rho)
        ok = rho > 1e-14 * a
        g = elliptic.loop_g_over_m(np.where(ok, m, 0.0))
        a_phi = mu0 * currents[:, None] * a / (math.pi * np.sqrt(d2)) * g
        a_phi_over_rho[ok] = a_phi[ok] / rho[ok]
        phi_dir = np.cross(axes[:, None, :], rho_vec)            # rho * phi_hat
        out[lo:lo + step] = np.einsum("ln,lnk->nk", a_phi_over_rho, phi_dir)
    return out


def _chain_arrays(chains):
    starts, ends, currents = [], [], []
    for ch in chains:
        pts = np.asarray(ch.points)
        starts.append(pts[:-1])
        ends.append(pts[1:])
        currents.append(np.full(len(pts) - 1, ch.current))
    return np.vstack(starts), np.vstack(ends), np.concatenate(currents)


def segment_vector_potential(chains, pts, mu0):
    out = np.zeros_like(pts)
    if not chains:
        return out
    r1, r2, cur = _chain_arrays(chains)
    seg = r2 - r1
    length = np.linalg.norm(seg, axis=1)
    unit = seg / length[:, None]
    for i in range(len(r1)):
        d1 = np.linalg.norm(pts - r1[i], axis=1)
        d2 = np.linalg.norm(pts - r2[i], axis=1)
        s = d1 + d2
        out += (mu0 * cur[i] / (4 * math.pi)) * np.log((s + length[i]) / (s - length[i]))[:, None] * unit[i]
    return out


def vector_potential(sources, r, *, n_loops=None, constants: PhysicalConstants = SI,
                     exclusion_radius=DEFAULT_EXCLUSION_RADIUS):
    """Lorenz-gauge vector potential in T m at one point (3,) or many (N, 3)."""
    pts, single = _as_points(r)
    check_exclusion(sources, pts, exclusion_radius)
    loops, chains = expand_current_sources(sources, n_loops)
    out = loop_vector_potential(loops, pts, constants.mu0) + segment_vector_potential(chains, pts, constants.mu0)
    return out[0] if single else out


# --------------------------------------------------------------------------
# Biot-Savart


def loop_node_count(strip, digits=40.0, minimum=8, maximum=1 << 17):
    """Trapezoid nodes for a loop whose integrand is analytic in a strip of half-width ``strip``.

    The periodic trapezoid error decays like exp(-N strip); ``digits`` is the
    target exponent.
    """
    n = np.ceil(digits / np.maximum(strip, 1e-300))
    return np.clip(n, minimum, maximum).astype(int)


def loop_quadrature(loop: CircularLoop, n: int):
    """Trapezoid nodes on a loop: positions (n, 3) and current elements I dl (n, 3)."""
    u, v, _ = orthonormal_frame(loop.axis)
    phi = 2 * math.pi * np.arange(n) / n
    cos, sin = np.cos(phi)[:, None], np.sin(phi)[:, None]
    pos = np.asarray(loop.center) + loop.radius * (cos * u + sin * v)
    dl = (loop.current * loop.radius * 2 * math.pi / n) * (-sin * u + cos * v)
    return pos, dl


def _biot_savart_nodes(pos, idl, pts, mu0):
    """Sum of I dl x (p - q) / |p - q|^3 over nodes q, as two matrix products.

    Coordinates are shifted to the centroid of ``pts`` to limit cancellation
    between the two products.
    """
    origin = pts.mean(axis=0)
    p = pts - origin
    q = pos - origin
    idl_x_q = np.cross(idl, q)
    out = np.empty_like(pts)
    step = max(1, _CHUNK // len(q))
    for lo in range(0, len(p), step):
        pc = p[lo:lo + step]
        d2 = ((pc[:, None, 0] - q[None, :, 0]) ** 2 + (pc[:, None, 1] - q[None, :, 1]) ** 2
              + (pc[:, None, 2] - q[None, :, 2]) ** 2)
        w = d2 ** -1.5
        out[lo:lo + step] = np.cross(w @ idl, pc) - w @ idl_x_q
    return out * (mu0 / (4 * math.pi))


def segment_magnetic_field(chains, pts, mu0):
    out = np.zeros_like(pts)
    if not chains:
        return out
    r1, r2, cur = _chain_arrays(chains)
    for i in range(len(r1)):
        seg = r2[i] - r1[i]
        length = np.linalg.norm(seg)
        rel1 = pts - r1[i]
        d1 = np.linalg.norm(rel1, axis=1)
        d2 = np.linalg.norm(pts - r2[i], axis=1)
        s = d1 + d2
        factor = 2 * length * s / (d1 * d2 * (s * s - length * length))
        out += (mu0 * cur[i] / (4 * math.pi)) * factor[:, None] * np.cross(seg / length, rel1)
    return out


class _LoopSet:
    """Loop geometry as arrays, with in-plane frames, for vectorized quadrature."""

    def __init__(self, loops):
        self.centers, self.axes, self.radii, self.currents = _loop_arrays(loops)
        frames = {}
        self.u = np.empty_like(self.axes)
        self.v = np.empty_like(self.axes)
        for i, lp in enumerate(loops):
            if lp.axis not in frames:
                frames[lp.axis] = orthonormal_frame(lp.axis)
            self.u[i], self.v[i], _ = frames[lp.axis]

    def __len__(self):
        return len(self.radii)

    def min_strip(self, pts):
        """Per loop, the smallest analyticity half-width of the Biot-Savart integrand over ``pts``.

        In the azimuth the integrand is singular where cos(phi) = x with
        x = (a^2 + rho^2 + z^2) / (2 a rho), so the half-width is acosh(x);
        x - 1 = d^2 / (2 a rho) with d the distance to the wire keeps it
        accurate next to the wire.
        """
        out = np.empty(len(self))
        step = max(1, _CHUNK // max(len(pts), 1))
        for lo in range(0, len(self), step):
            sl = slice(lo, lo + step)
            rel = pts[None, :, :] - self.centers[sl, None, :]
            z = np.einsum("lnk,lk->ln", rel, self.axes[sl])
            rho = np.sqrt(np.maximum(np.einsum("lnk,lnk->ln", rel, rel) - z * z, 0.0))
            a = self.radii[sl, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                xm1 = ((rho - a) ** 2 + z * z) / (2 * a * rho)
                strip = np.log1p(xm1 + np.sqrt(xm1 * (xm1 + 2)))
            out[sl] = np.min(np.where(rho > 0, strip, np.inf), axis=1)
        return out

    def nodes(self, counts):
        pos, idl = [], []
        for n in np.unique(counts):
            idx = np.flatnonzero(counts == n)
            phi = 2 * math.pi * np.arange(n) / n
            cos, sin = np.cos(phi)[None, :, None], np.sin(phi)[None, :, None]
            u, v = self.u[idx, None, :], self.v[idx, None, :]
            r = self.radii[idx, None, None]
            pos.append((self.centers[idx, None, :] + r * (cos * u + sin * v)).reshape(-1, 3))
            scale = (self.currents[idx] * self.radii[idx] * 2 * math.pi / n)[:, None, None]
            idl.append((scale * (-sin * u + cos * v)).reshape(-1, 3))
        return np.vstack(pos), np.vstack(idl)


def _loop_field_block(loopset, pts, mu0, digits, min_nodes):
    counts = loop_node_count(loopset.min_strip(pts), digits, min_nodes)
    pos, idl = loopset.nodes(counts)
    return _biot_savart_nodes(pos, idl, pts, mu0)


def magnetic_field(sources, r, *, n_loops=None, constants: PhysicalConstants = SI,
                   exclusion_radius=DEFAULT_EXCLUSION_RADIUS, digits=40.0, min_nodes=8,
                   block=512):
    """Magnetic field in T by Biot-Savart quadrature over the discretized wires.

    Each loop is integrated with the trapezoid rule, which converges
    geometrically for this periodic integrand. Points are processed in blocks
    sorted by distance to the wires, and within a block a loop's node count
    follows its worst point, so near-wire points stay accurate without making
    distant points pay for it.
    """
    pts, single = _as_points(r)
    check_exclusion(sources, pts, exclusion_radius)
    loops, chains = expand_current_sources(sources, n_loops)
    out = _wire_field(loops, chains, pts, constants.mu0, digits, min_nodes, block)
    return out[0] if single else out


def _wire_field(loops, chains, pts, mu0, digits=40.0, min_nodes=8, block=512):
    out = segment_magnetic_field(chains, pts, mu0)
    if loops:
        loopset = _LoopSet(loops)
        if len(pts) > block:
            order = np.argsort(_wire_distance(loops, [], pts), kind="stable")
        else:
            order = np.arange(len(pts))
        for lo in range(0, len(pts), block):
            idx = order[lo:lo + block]
            out[idx] += _loop_field_block(loopset, pts[idx], mu0, digits, min_nodes)
    return out


# --------------------------------------------------------------------------
# flux oracle


def _plane_frame(vertices):
    centroid = vertices.mean(axis=0)
    _, svals, vt = np.linalg.svd(vertices - centroid)
    u, v, normal = vt[0], vt[1], vt[2]
    size = np.max(np.linalg.norm(vertices - centroid, axis=1))
    if svals[2] > 1e-9 * max(size, 1.0) * math.sqrt(len(vertices)):
        raise GeometryError("flux oracle needs a planar loop")
    return centroid, u, v, normal


def _inside_polygon(xy, poly):
    """Even-odd rule for points (N, 2) against polygon vertices (M, 2)."""
    x, y = xy[:, 0][:, None], xy[:, 1][:, None]
    x0, y0 = poly[:, 0][None, :], poly[:, 1][None, :]
    x1, y1 = np.roll(poly[:, 0], -1)[None, :], np.roll(poly[:, 1], -1)[None, :]
    crosses = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return np.sum(crosses & (x < xint), axis=1) % 2 == 1


def _surface_hits(loops, chains, centroid, u, v, normal, exclusion_radius):
    """Points where wires pierce the loop's plane, as plane coordinates (N, 2)."""
    hits = []
    for lp in loops:
        lu, lv, _ = orthonormal_frame(lp.axis)
        d0 = (np.asarray(lp.center) - centroid) @ normal
        cu, cv = lp.radius * (lu @ normal), lp.radius * (lv @ normal)
        amp = math.hypot(cu, cv)
        if abs(d0) > amp + exclusion_radius:
            continue
        if amp < exclusion_radius:
            phi = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        else:
            base = math.atan2(cv, cu)
            delta = math.acos(max(-1.0, min(1.0, -d0 / amp)))
            phi = np.array([base + delta, base - delta])
        pts = np.asarray(lp.center) + lp.radius * (np.outer(np.cos(phi), lu) + np.outer(np.sin(phi), lv))
        hits.append(pts)
    for ch in chains:
        p = np.asarray(ch.points)
        f = (p - centroid) @ normal
        for i in range(len(p) - 1):
            if f[i] * f[i + 1] <= 0 and f[i] != f[i + 1]:
                t = f[i] / (f[i] - f[i + 1])
                hits.append((p[i] + t * (p[i + 1] - p[i]))[None, :])
    if not hits:
        return np.zeros((0, 2))
    pts = np.vstack(hits) - centroid
    return np.column_stack([pts @ u, pts @ v])


def _banded(c, p, q):
    """Split the fan triangle (c, p, q) into radial bands of roughly unit aspect ratio."""
    bands = max(1, int(math.ceil(np.linalg.norm(p - c) / max(np.linalg.norm(q - p), 1e-300))))
    s = np.linspace(0.0, 1.0, bands + 1)
    P = c + s[:, None] * (p - c)
    Q = c + s[:, None] * (q - c)
    tris = [(c, P[1], Q[1])]
    for j in range(1, bands):
        tris.append((P[j], P[j + 1], Q[j + 1]))
        tris.append((P[j], Q[j + 1], Q[j]))
    return tris


def fan_triangles(loop: SampledPath, n_angular=64):
    """Oriented triangles (T, 3, 3) whose union spans ``loop``.

    ``n_angular`` spokes run from the centroid to evenly spaced vertices and
    the fan between them is cut into radial bands; the polyline between
    consecutive spokes is closed off by a sub-fan anchored at the first
    spoke, so the boundary is reproduced exactly.
    """
    verts = loop.points[:-1]
    centroid, *_ = _plane_frame(verts)
    nv = len(verts)
    spokes = np.unique(np.linspace(0, nv, min(n_angular, nv) + 1)[:-1].round().astype(int))
    tris = []
    for k, i0 in enumerate(spokes):
        i1 = spokes[(k + 1) % len(spokes)]
        stop = i1 if i1 > i0 else i1 + nv
        tris.extend(_banded(centroid, verts[i0], verts[i1]))
        for i in range(i0 + 1, stop - 1):
            tris.append((verts[i0], verts[i % nv], verts[(i + 1) % nv]))
    return np.array(tris)


def _wire_distance(loops, chains, pts):
    d = np.full(len(pts), np.inf)
    if loops:
        centers, axes, radii, _ = _loop_arrays(loops)
        step = max(1, _CHUNK // len(loops))
        for lo in range(0, len(pts), step):
            rel = pts[None, lo:lo + step, :] - centers[:, None, :]
            z = np.einsum("lnk,lk->ln", rel, axes)
            rho = np.sqrt(np.maximum(np.einsum("lnk,lnk->ln", rel, rel) - z * z, 0.0))
            d[lo:lo + step] = np.min(np.hypot(rho - radii[:, None], z), axis=0)
    for ch in chains:
        d = np.minimum(d, source_distance(ch, pts))
    return d


def _dunavant5():
    a1, b1 = 0.059715871789770, 0.470142064105115
    a2, b2 = 0.797426985353087, 0.101286507323456
    bary = [(1 / 3, 1 / 3, 1 / 3),
            (a1, b1, b1), (b1, a1, b1), (b1, b1, a1),
            (a2, b2, b2), (b2, a2, b2), (b2, b2, a2)]
    w = [0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3
    return np.array(bary), np.array(w)


_DUNAVANT5 = _dunavant5()


def refine_triangles(tris, distance_fn, ratio=1.0, max_depth=10):
    """Split triangles in four until each is smaller than ``ratio`` times its distance to the wires."""
    done = []
    for _ in range(max_depth):
        if len(tris) == 0:
            break
        diam = np.max(np.linalg.norm(tris - np.roll(tris, 1, axis=1), axis=2), axis=1)
        split = diam > ratio * distance_fn(tris.mean(axis=1))
        done.append(tris[~split])
        t = tris[split]
        a, b, c = t[:, 0], t[:, 1], t[:, 2]
        ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
        tris = np.concatenate([
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ])
    done.append(tris)
    return np.concatenate(done)


def spanning_surface(sources, loop: SampledPath, *, n_loops=None, n_angular=64, ratio=1.0, max_depth=10):
    """Quadrature points (3T, 3) and oriented area weights (3T, 3) on a disc spanning ``loop``.

    Seven-point degree-5 rule on each triangle of an adaptively refined fan.
    """
    loops, chains = expand_current_sources(sources, n_loops)
    tris = fan_triangles(loop, n_angular)
    if loops or chains:
        tris = refine_triangles(tris, lambda p: _wire_distance(loops, chains, p), ratio, max_depth)
    area = 0.5 * np.cross(tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0])
    bary, w = _DUNAVANT5
    pts = np.einsum("qk,tkd->tqd", bary, tris).reshape(-1, 3)
    weights = (area[:, None, :] * w[None, :, None]).reshape(-1, 3)
    return pts, weights


def flux_through_loop(sources, loop: SampledPath, *, n_loops=None, constants: PhysicalConstants = SI,
                      exclusion_radius=DEFAULT_EXCLUSION_RADIUS, n_angular=64, ratio=1.0,
                      max_depth=10) -> float:
    """Flux of the Biot-Savart field through a planar surface spanning ``loop`` (Wb).

    The surface orientation follows the loop's circulation (right-hand rule).
    """
    if not loop.closed:
        raise ValueError("flux_through_loop needs a closed path")
    verts = loop.points[:-1]
    centroid, u, v, normal = _plane_frame(verts)
    loops, chains = expand_current_sources(sources, n_loops)
    if not loops and not chains:
        return 0.0
    hits = _surface_hits(loops, chains, centroid, u, v, normal, exclusion_radius)
    if len(hits):
        rel = verts - centroid
        inside = _inside_polygon(hits, np.column_stack([rel @ u, rel @ v]))
        if np.any(inside):
            raise GeometryError(f"source material crosses the spanning surface at {int(inside.sum())} point(s)")
    pts, weights = spanning_surface(sources, loop, n_loops=n_loops, n_angular=n_angular,
                                    ratio=ratio, max_depth=max_depth)
    # the surface may pass between turns of a winding, so clearance is measured to the wires
    clearance = _wire_distance(loops, chains, pts)
    if np.min(clearance) < exclusion_radius:
        raise GeometryError(f"spanning surface passes {np.min(clearance):.3e} m from a wire")
    b = _wire_field(loops, chains, pts, constants.mu0)
    return float(np.einsum("ij,ij->", b, weights))


# --------------------------------------------------------------------------
# electrostatics


def _sphere_unit_potential(shell: SphericalShell, p, eps0):
    d = float(np.linalg.norm(p - np.asarray(shell.center)))
    radius = shell.radius
    val, _ = integrate.quad(lambda c: 1.0 / math.sqrt(radius * radius + d * d - 2 * radius * d * c),
                            -1.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return 0.5 * val / (4 * math.pi * eps0)


def _tube_unit_potential(tube: CylindricalShell, p, eps0):
    rel = p - np.asarray(tube.center)
    axis = np.asarray(tube.axis)
    z = float(rel @ axis)
    rho = float(np.linalg.norm(rel - z * axis))
    a, half = tube.radius, 0.5 * tube.length

    def ring(h):
        d2 = (rho + a) ** 2 + (z - h) ** 2
        return 2.0 / math.pi * float(elliptic.ellipk(4 * a * rho / d2)) / math.sqrt(d2)

    brk = [z] if -half < z < half else None
    val, _ = integrate.quad(ring, -half, half, points=brk, epsabs=0.0, epsrel=1e-13, limit=400)
    return val / tube.length / (4 * math.pi * eps0)


def unit_scalar_potentials(sources, r, *, constants: PhysicalConstants = SI,
                           exclusion_radius=DEFAULT_EXCLUSION_RADIUS) -> np.ndarray:
    """Potential per coulomb of each source at each point: array (N, S)."""
    pts, _ = _as_points(r)
    check_exclusion(sources, pts, exclusion_radius)
    out = np.zeros((len(pts), len(sources)))
    for j, s in enumerate(sources):
        if isinstance(s, SphericalShell):
            fn = _sphere_unit_potential
        elif isinstance(s, CylindricalShell):
            fn = _tube_unit_potential
        else:
            raise TypeError(f"{type(s).__name__} is not a charge source")
        out[:, j] = [fn(s, p, constants.eps0) for p in pts]
    return out


def scalar_potential(sources, r, t, *, constants: PhysicalConstants = SI,
                     exclusion_radius=DEFAULT_EXCLUSION_RADIUS):
    """Quasi-static Coulomb potential in V at the instantaneous charges Q(t)."""
    pts, single = _as_points(r)
    unit = unit_scalar_potentials(sources, pts, constants=constants, exclusion_radius=exclusion_radius)
    t = np.broadcast_to(np.asarray(t, dtype=float), (len(pts),))
    charges = np.column_stack([s.charge(t) for s in sources]) if sources else np.zeros((len(pts), 0))
    out = np.sum(unit * charges, axis=1)
    return float(out[0]) if single else out


def field_point(current_sources, charge_sources, r, t=0.0, **kw) -> FieldPoint:
    r = np.asarray(r, dtype=float)
    a = vector_potential(current_sources, r, **kw) if current_sources else np.zeros(3)
    b = magnetic_field(current_sources, r, **kw) if current_sources else np.zeros(3)
    kw.pop("n_loops", None)
    u = scalar_potential(charge_sources, r, t, **kw) if charge_sources else 0.0
    return FieldPoint(r, a, b, u)
