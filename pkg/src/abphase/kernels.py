"""Photon-mode-space propagator kernels resolved by polarization class.

The k-space integral

    K_ij(R) = \\int d^3k  P_ij(k^) exp(i k.R) / ((2 pi)^3 k^2)

is reduced over angles to radial integrals of spherical Bessel functions::

    (1/4pi) \\int dOmega           exp(i x k^.R^) = j0(x)
    (1/4pi) \\int dOmega k^_i k^_j exp(i x k^.R^) = j1(x)/x delta_ij - j2(x) R^_i R^_j

with x = k|R|. The radial integrals are only conditionally convergent, so
they are evaluated with a damping factor exp(-eta k) on a geometric ladder of
eta values and extrapolated to eta -> 0 (Richardson). Every kernel takes the
form ``(alpha * delta + beta * R^R^) / |R|``; the quadrature route fixes
``alpha`` and ``beta`` numerically, the closed-form route uses the exact values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import spherical_jn

from .errors import ConvergenceError, SingularSeparationError

MIN_SEPARATION = 1e-12
CLOSED_FORM_TOL = 1e-10
QUADRATURE_TOL = 1e-6


class Polarization(enum.Enum):
    FULL = "full"
    TRANSVERSE = "transverse"
    LONGITUDINAL = "longitudinal"

    @classmethod
    def parse(cls, value) -> "Polarization":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown polarization {value!r}; expected one of "
                             f"{[p.value for p in cls]}") from None


@dataclass(frozen=True)
class DampingLadder:
    """Damping rungs eta_n = eta0 * |R| / ratio**n, n = 0..rungs-1."""

    eta0: float = 0.01
    rungs: int = 4
    ratio: float = 2.0
    panel_nodes: int = 16
    tail_decades: float = 40.0

    def __post_init__(self):
        if not (self.eta0 > 0 and self.ratio > 1 and self.rungs >= 2 and self.panel_nodes >= 2):
            raise ValueError(f"invalid damping ladder {self}")

    @property
    def etas(self) -> np.ndarray:
        return self.eta0 / self.ratio ** np.arange(self.rungs)


DEFAULT_LADDER = DampingLadder()


@dataclass(frozen=True)
class RadialResult:
    value: float
    residual: float
    rungs: tuple


def _panel_grid(ladder: DampingLadder):
    """Gauss-Legendre nodes over half-periods [n pi, (n+1) pi] until the smallest damping kills the tail."""
    x_max = ladder.tail_decades / ladder.etas[-1]
    n_panels = int(math.ceil(x_max / math.pi))
    g, w = np.polynomial.legendre.leggauss(ladder.panel_nodes)
    left = np.arange(n_panels) * math.pi
    x = (left[:, None] + 0.5 * math.pi * (g + 1.0)).ravel()
    wx = np.tile(0.5 * math.pi * w, n_panels)
    return x, wx


def richardson(values, ratio: float) -> tuple[float, float]:
    """Eliminate error terms eps, eps^2, ... from values at eps, eps/ratio, ...

    Returns the extrapolated value and the difference to the extrapolation
    that used one rung fewer.
    """
    table = [np.asarray(values, dtype=float)]
    for order in range(1, len(values)):
        prev = table[-1]
        f = ratio**order
        table.append((f * prev[1:] - prev[:-1]) / (f - 1.0))
    best = float(table[-1][-1])
    lower = float(table[-2][-1])
    return best, abs(best - lower)


def damped_radial_integral(integrand, ladder: DampingLadder = DEFAULT_LADDER) -> RadialResult:
    """Extrapolated value of \\int_0^inf f(x) exp(-eps x) dx as eps -> 0.

    ``integrand`` maps an array of x (dimensionless k|R|) to f(x).
    """
    x, w = _panel_grid(ladder)
    fx = integrand(x) * w
    rungs = tuple(float(np.sum(fx * np.exp(-eta * x))) for eta in ladder.etas)
    value, residual = richardson(rungs, ladder.ratio)
    return RadialResult(value, residual, rungs)


def _j1_over_x(x):
    return spherical_jn(1, x) / x


RADIAL_INTEGRANDS = {
    "j0": lambda x: spherical_jn(0, x),
    "j1/x": _j1_over_x,
    "j2": lambda x: spherical_jn(2, x),
}

# exact values of \int_0^inf of each integrand
RADIAL_EXACT = {"j0": math.pi / 2, "j1/x": math.pi / 4, "j2": math.pi / 4}


@lru_cache(maxsize=32)
def radial_integrals(ladder: DampingLadder = DEFAULT_LADDER) -> dict:
    return {name: damped_radial_integral(f, ladder) for name, f in RADIAL_INTEGRANDS.items()}


def _check_residual(results, tol):
    worst = max(r.residual / abs(r.value) for r in results)
    if worst > tol:
        raise ConvergenceError(f"eta-extrapolation residual {worst:.3e} exceeds {tol:.1e}", residual=worst)


def kernel_coefficients(pol, method: str = "closed_form", ladder: DampingLadder = DEFAULT_LADDER,
                        tol: float = QUADRATURE_TOL) -> tuple[float, float]:
    """``(alpha, beta)`` with K_ij = (alpha delta_ij + beta R^_i R^_j) / |R|."""
    pol = Polarization.parse(pol)
    if method == "closed_form":
        return {
            Polarization.FULL: (1 / (4 * math.pi), 0.0),
            Polarization.LONGITUDINAL: (1 / (8 * math.pi), -1 / (8 * math.pi)),
            Polarization.TRANSVERSE: (1 / (8 * math.pi), 1 / (8 * math.pi)),
        }[pol]
    if method != "quadrature":
        raise ValueError(f"unknown kernel method {method!r}")
    ints = radial_integrals(ladder)
    _check_residual(ints.values(), tol)
    pref = 1.0 / (2 * math.pi**2)  # 4 pi / (2 pi)^3
    i0, i1, i2 = ints["j0"].value, ints["j1/x"].value, ints["j2"].value
    if pol is Polarization.FULL:
        return pref * i0, 0.0
    if pol is Polarization.LONGITUDINAL:
        return pref * i1, -pref * i2
    return pref * (i0 - i1), pref * i2


def _separation(R) -> tuple[np.ndarray, float]:
    R = np.asarray(R, dtype=float)
    if R.shape != (3,) or not np.all(np.isfinite(R)):
        raise ValueError(f"separation must be a finite 3-vector, got {R!r}")
    dist = float(np.linalg.norm(R))
    if dist < MIN_SEPARATION:
        raise SingularSeparationError(f"|R| = {dist:.3e} m is below {MIN_SEPARATION:g} m")
    return R, dist


def scalar_kernel(R, method: str = "closed_form", ladder: DampingLadder = DEFAULT_LADDER,
                  tol: float = QUADRATURE_TOL) -> float:
    """\\int d^3k exp(i k.R) / ((2 pi)^3 k^2); equals 1/(4 pi |R|)."""
    R, dist = _separation(R)
    if method == "closed_form":
        return 1.0 / (4 * math.pi * dist)
    if method != "quadrature":
        raise ValueError(f"unknown kernel method {method!r}")
    res = damped_radial_integral(RADIAL_INTEGRANDS["j0"], ladder)
    _check_residual([res], tol)
    return res.value / (2 * math.pi**2 * dist)


@dataclass(frozen=True)
class KernelTensor:
    t: np.ndarray
    r_sep: np.ndarray
    pol: Polarization

    @property
    def trace(self) -> float:
        return float(np.trace(self.t))


def tensor_kernel(R, pol=Polarization.FULL, method: str = "closed_form",
                  ladder: DampingLadder = DEFAULT_LADDER, tol: float = QUADRATURE_TOL) -> KernelTensor:
    R, dist = _separation(R)
    alpha, beta = kernel_coefficients(pol, method, ladder, tol)
    rhat = R / dist
    t = (alpha * np.eye(3) + beta * np.outer(rhat, rhat)) / dist
    t = 0.5 * (t + t.T)
    t.setflags(write=False)
    return KernelTensor(t, R.copy(), Polarization.parse(pol))


def contract_kernel(J, R, alpha: float, beta: float) -> np.ndarray:
    """Sum over the source index: (J_i K_ij) for arrays of J (..., 3) and R (..., 3)."""
    dist = np.linalg.norm(R, axis=-1)
    if np.any(dist < MIN_SEPARATION):
        raise SingularSeparationError("source element coincides with the field point")
    out = alpha * J
    if beta != 0.0:
        rhat = R / dist[..., None]
        out = out + beta * np.sum(J * rhat, axis=-1)[..., None] * rhat
    return out / dist[..., None]


def angular_average(x, pol=Polarization.FULL, n_nodes: int = 96) -> np.ndarray:
    """(1/4pi) \\int dOmega P_ij(k^) exp(i x k^.z^) by direct Gauss-Legendre quadrature over cos(theta).

    Complex 3x3 result. Used to check the analytic angular reduction and that
    the imaginary part vanishes.
    """
    pol = Polarization.parse(pol)
    u, w = np.polynomial.legendre.leggauss(n_nodes)
    phase = np.exp(1j * x * u)
    # azimuthal average of k^_i k^_j with k^ = (s cos phi, s sin phi, u)
    s2 = 1.0 - u**2
    kk = np.zeros((n_nodes, 3, 3))
    kk[:, 0, 0] = kk[:, 1, 1] = 0.5 * s2
    kk[:, 2, 2] = u**2
    if pol is Polarization.FULL:
        proj = np.broadcast_to(np.eye(3), kk.shape)
    elif pol is Polarization.LONGITUDINAL:
        proj = kk
    else:
        proj = np.eye(3) - kk
    return 0.5 * np.einsum("n,n,nij->ij", w, phase, proj)


@dataclass(frozen=True)
class FourierReport:
    separations: np.ndarray
    directions: np.ndarray
    quadrature: np.ndarray
    closed_form: np.ndarray
    rel_errors: np.ndarray
    tol: float

    @property
    def max_rel_error(self) -> float:
        return float(np.max(self.rel_errors))

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tol


def verify_fourier_identity(sample_count: int = 20, r_min: float = 0.01, r_max: float = 10.0,
                            tol: float = QUADRATURE_TOL, rng=None,
                            ladder: DampingLadder = DEFAULT_LADDER,
                            convergence_tol: float = QUADRATURE_TOL) -> FourierReport:
    """Compare quadrature ``scalar_kernel`` with 1/(4 pi |R|) at log-spaced separations."""
    if sample_count < 1 or not (0 < r_min <= r_max):
        raise ValueError("need sample_count >= 1 and 0 < r_min <= r_max")
    rng = np.random.default_rng(rng)
    seps = np.geomspace(r_min, r_max, sample_count)
    dirs = rng.normal(size=(sample_count, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    quad = np.array([scalar_kernel(r * d, "quadrature", ladder, convergence_tol) for r, d in zip(seps, dirs)])
    closed = 1.0 / (4 * math.pi * seps)
    rel = np.abs(quad - closed) / closed
    return FourierReport(seps, dirs, quad, closed, rel, tol)
