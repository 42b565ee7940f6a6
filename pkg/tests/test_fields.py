import math

import numpy as np
import pytest
from scipy import integrate, special

from abphase.errors import GeometryError, ProximityError
from abphase.fields import (
    field_point,
    flux_through_loop,
    magnetic_field,
    scalar_potential,
    segment_magnetic_field,
    vector_potential,
)
from abphase.model import (
    SI,
    ChargeWaveform,
    CircularLoop,
    CylindricalShell,
    SampledPath,
    SegmentChain,
    Solenoid,
    SphericalShell,
)

MU0 = SI.mu0


def polygon_loop(loop: CircularLoop, n=10_000):
    ang = 2 * np.pi * np.arange(n + 1) / n
    pts = np.column_stack([loop.radius * np.cos(ang), loop.radius * np.sin(ang), np.zeros(n + 1)])
    pts[-1] = pts[0]
    return SegmentChain(pts + np.asarray(loop.center), loop.current)


def continuum_a_phi(sol: Solenoid, rho, z=0.0):
    """Azimuthal A of a current sheet by adaptive quadrature of the loop formula (scipy elliptic integrals)."""
    a, k_surface = sol.radius, sol.turns_per_meter * sol.current

    def ring(zp):
        d2 = (a + rho) ** 2 + (z - zp) ** 2
        m = 4 * a * rho / d2
        return MU0 * k_surface * a / (math.pi * math.sqrt(d2)) * ((2 - m) * special.ellipk(m) - 2 * special.ellipe(m)) / m

    h = sol.length / 2
    val, _ = integrate.quad(ring, -h, h, epsabs=0, epsrel=1e-12, limit=500)
    return val


def finite_solenoid_fraction(sol, r):
    """2 pi r A_phi / Phi0 to leading order in (r/L)^2 for a long solenoid at its mid-plane."""
    return 1.0 - (r**2 - sol.radius**2) / (2 * (sol.length / 2) ** 2)


class TestVectorPotential:
    def test_on_axis_zero(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0)
        a = vector_potential([loop], [(0, 0, 0.3), (0, 0, -2.0), (0, 0, 0)])
        assert np.all(a == 0.0)

    def test_loop_against_polygon_brute_force(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0)
        p = np.array([0.05, 0.0, 0.02])
        a = vector_potential([loop], p)
        ref = vector_potential([polygon_loop(loop)], p)
        assert a[1] == pytest.approx(ref[1], rel=1e-6)
        assert abs(a[0]) < 1e-20 and abs(a[2]) < 1e-20

    def test_loop_orientation_right_handed(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0)
        # counterclockwise current about +z: A along +phi, B along +z at the centre
        assert vector_potential([loop], (0.05, 0, 0))[1] > 0
        assert magnetic_field([loop], (0, 0, 0))[2] > 0

    def test_tilted_loop_matches_brute_force(self, rng):
        axis = np.array([0.3, -0.5, 0.8])
        loop = CircularLoop((0.1, 0.2, -0.1), axis, 0.07, 2.5)
        from abphase.fields import loop_quadrature

        pos, idl = loop_quadrature(loop, 8)  # use the exact frame of the loop for the polygon
        n = 20_000
        ang = 2 * np.pi * np.arange(n + 1) / n
        c = np.asarray(loop.center)
        u = (pos[0] - c) / loop.radius
        v = np.cross(np.asarray(loop.axis), u)
        pts = c + loop.radius * (np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v))
        pts[-1] = pts[0]
        chain = SegmentChain(pts, loop.current)
        for p in rng.normal(scale=0.1, size=(5, 3)) + c:
            assert np.allclose(vector_potential([loop], p), vector_potential([chain], p), rtol=1e-6,
                               atol=1e-6 * np.linalg.norm(vector_potential([loop], p)))

    def test_segment_against_quadrature(self):
        chain = SegmentChain([(0, 0, 0), (0.3, 0.1, 0)], 2.0)
        p = np.array([0.1, 0.2, 0.05])
        r1, r2 = np.array(chain.points)
        length = np.linalg.norm(r2 - r1)
        val, _ = integrate.quad(lambda s: 1 / np.linalg.norm(p - (r1 + s * (r2 - r1) / length)), 0, length,
                                epsrel=1e-13)
        want = MU0 * 2.0 / (4 * math.pi) * val * (r2 - r1) / length
        assert np.allclose(vector_potential([chain], p), want, rtol=1e-12)

    def test_long_solenoid_finite_length_oracle(self, unit_solenoid):
        r = 0.1
        a = vector_potential([unit_solenoid], (r, 0, 0))
        frac = 2 * math.pi * r * a[1]
        assert frac == pytest.approx(2 * math.pi * r * continuum_a_phi(unit_solenoid, r), rel=1e-5)
        # leading-order asymptotic; next order is O((r/L)^4) times large coefficients
        assert frac == pytest.approx(finite_solenoid_fraction(unit_solenoid, r), rel=1e-3)

    @pytest.mark.xfail(strict=True, reason="length/radius = 100 leaves a 1.9% finite-length deficit at r = 10 a; "
                                            "see the decisions ledger")
    def test_spec_example_long_solenoid_literal(self, unit_solenoid):
        a = vector_potential([unit_solenoid], (0.1, 0, 0))
        assert np.linalg.norm(a) == pytest.approx(1 / (2 * math.pi * 0.1), rel=0.01)

    def test_long_solenoid_limit(self):
        # length/radius = 1000: Phi0 / (2 pi r) within 1% at r = 0.1 m
        cur = 1.0 / (MU0 * 1000 * math.pi * 0.01**2)
        sol = Solenoid((0, 0, 0), (0, 0, 1), 0.01, 10.0, 1000.0, cur)
        a = vector_potential([sol], (0.1, 0, 0))
        assert np.linalg.norm(a) == pytest.approx(1.59155, rel=0.01)
        assert a[1] > 0

    def test_loop_stack_convergence(self, unit_solenoid):
        p = np.array([[0.02, 0, 0], [0.0, 0.05, 0.1], [0.03, 0.03, 0.45]])
        default = unit_solenoid.default_loop_count()
        vals = {n: vector_potential([unit_solenoid], p, n_loops=n) for n in (250, 500, 1000, default, 2 * default)}
        ref = vals[2 * default]
        errs = [np.max(np.abs(vals[n] - ref) / np.linalg.norm(ref, axis=1)[:, None]) for n in (250, 500, 1000)]
        assert errs[0] > errs[1] > errs[2]
        change = np.max(np.abs(vals[default] - ref) / np.linalg.norm(ref, axis=1)[:, None])
        assert change < 1e-4

    def test_proximity_names_source(self):
        sol = Solenoid((0, 0, 0), (0, 0, 1), 0.01, 1.0, 1.0, 1.0, name="coil")
        with pytest.raises(ProximityError, match="coil"):
            vector_potential([sol], (0.0100000001, 0, 0))
        vector_potential([sol], (0.0100000001, 0, 0), exclusion_radius=1e-12)

    def test_superposition_and_linearity(self, rng):
        srcs = [CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0), SegmentChain([(0.3, 0, -1), (0.3, 0, 1)], 2.0),
                Solenoid((0, 0.4, 0), (1, 0, 0), 0.05, 0.2, 100.0, 0.3)]
        pts = rng.uniform(-0.6, 0.6, size=(10, 3)) + [0, 0, 0.7]
        total = vector_potential(srcs, pts)
        parts = sum(vector_potential([s], pts) for s in srcs)
        assert np.allclose(total, parts, rtol=1e-14, atol=1e-25)
        scaled = vector_potential([s.scaled(-3.5) for s in srcs], pts)
        assert np.allclose(scaled, -3.5 * total, rtol=1e-13, atol=1e-25)
        b = magnetic_field(srcs, pts)
        assert np.allclose(magnetic_field([s.scaled(2.0) for s in srcs], pts), 2 * b, rtol=1e-13, atol=1e-25)


def _fd_jacobian(fn, p, h=1e-5):
    jac = np.zeros((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        jac[:, k] = (fn(p + e) - fn(p - e)) / (2 * h)
    return jac


class TestGaugeAndCurl:
    @pytest.mark.parametrize("point", [(0.03, 0.01, 0.05), (-0.02, 0.04, -0.3), (0.2, -0.1, 0.6)])
    def test_divergence_free(self, unit_solenoid, point):
        sources = [unit_solenoid, CircularLoop((0.1, 0, 0.2), (1, 1, 0), 0.04, 3e4)]
        jac = _fd_jacobian(lambda q: vector_potential(sources, q, n_loops=300), np.array(point))
        assert abs(np.trace(jac)) <= 1e-6 * np.max(np.abs(jac))

    @pytest.mark.parametrize("point", [(0.03, 0.01, 0.05), (0.005, 0.0, 0.1), (0.2, -0.1, 0.6)])
    def test_curl_equals_b(self, unit_solenoid, point):
        sources = [unit_solenoid]
        p = np.array(point)
        jac = _fd_jacobian(lambda q: vector_potential(sources, q, n_loops=300), p)
        curl = np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])
        b = magnetic_field(sources, p, n_loops=300)
        assert np.linalg.norm(curl - b) <= 1e-4 * np.linalg.norm(b)


class TestMagneticField:
    def test_loop_center(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0)
        b = magnetic_field([loop], (0, 0, 0))
        assert b[2] == pytest.approx(6.2832e-6, rel=1e-4)
        assert b[2] == pytest.approx(MU0 / 0.2, rel=1e-12)
        brute = segment_magnetic_field([polygon_loop(loop)], np.zeros((1, 3)), MU0)[0]
        assert b[2] == pytest.approx(brute[2], rel=1e-6)

    def test_loop_on_axis_and_off_axis(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 1.0)
        z = 0.07
        bz = MU0 * 0.1**2 / (2 * (0.1**2 + z**2) ** 1.5)
        assert magnetic_field([loop], (0, 0, z))[2] == pytest.approx(bz, rel=1e-12)
        p = np.array([[0.09, 0.01, 0.004]])  # close to the wire
        brute = segment_magnetic_field([polygon_loop(loop, 100_000)], p, MU0)[0]
        assert np.allclose(magnetic_field([loop], p)[0], brute, rtol=1e-6)

    def test_solenoid_interior_and_exterior(self, unit_solenoid):
        b0 = MU0 * unit_solenoid.turns_per_meter * unit_solenoid.current
        inside = magnetic_field([unit_solenoid], [(0, 0, 0), (0.005, 0.002, 0.01)])
        assert np.allclose(inside[:, 2], b0, rtol=0.01)
        outside = magnetic_field([unit_solenoid], [(0.03, 0, 0), (0, 0.1, 0)])
        assert np.all(np.linalg.norm(outside, axis=1) <= 1e-3 * b0)

    def test_interior_convergence_with_aspect_ratio(self):
        errs = []
        for ratio in (10, 30, 100):
            sol = Solenoid((0, 0, 0), (0, 0, 1), 0.01, 0.01 * ratio, 1000.0, 1.0)
            b = magnetic_field([sol], (0, 0, 0))[2]
            errs.append(abs(b / (MU0 * 1000.0) - 1))
        assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-3

    def test_field_point(self, unit_solenoid):
        fp = field_point([unit_solenoid], [], (0.05, 0, 0), n_loops=200)
        assert np.all(np.isfinite(fp.a_vec)) and np.all(np.isfinite(fp.b_vec)) and fp.u_scalar == 0.0


class TestFlux:
    def test_concentric_circle_matches_line_integral(self, unit_solenoid):
        loop = SampledPath.arc((0, 0, 0), 0.1, 0, 2 * math.pi, 256)
        flux = flux_through_loop([unit_solenoid], loop, n_loops=400)
        line = loop.line_integral(lambda p: vector_potential([unit_solenoid], p, n_loops=400))
        assert flux == pytest.approx(line, rel=1e-4)
        assert flux == pytest.approx(finite_solenoid_fraction(unit_solenoid, 0.1), rel=2e-3)

    def test_concentric_circle_long_solenoid(self):
        # length/radius = 300 brings the r = 10 a return-flux deficit to 0.2%
        cur = 1.0 / (MU0 * 1000 * math.pi * 0.01**2)
        sol = Solenoid((0, 0, 0), (0, 0, 1), 0.01, 3.0, 1000.0, cur)
        loop = SampledPath.arc((0, 0, 0), 0.1, 0, 2 * math.pi, 256)
        assert flux_through_loop([sol], loop, n_loops=300) == pytest.approx(1.0, rel=0.01)

    def test_not_enclosing(self, unit_solenoid):
        loop = SampledPath.arc((0.05, 0, 0), 0.015, 0, 2 * math.pi, 128)
        flux = flux_through_loop([unit_solenoid], loop, n_loops=400)
        assert abs(flux) <= 1e-3
        # the residue is the finite-length return field, about -Phi0 / (2 pi (L/2)^2) near the mid-plane
        h = unit_solenoid.length / 2
        assert flux == pytest.approx(-math.pi * 0.015**2 / (2 * math.pi * h**2), rel=0.05)

    def test_zero_current(self, unit_solenoid):
        loop = SampledPath.arc((0, 0, 0), 0.1, 0, 2 * math.pi, 64)
        assert flux_through_loop([unit_solenoid.scaled(0.0)], loop) == 0.0

    def test_loop_flux_square(self):
        # a single loop and a square around it in its plane: flux = \oint A.dl
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.05, 1.0)
        z = 0.02
        sq = SampledPath.from_points([(-0.1, -0.1, z), (0.1, -0.1, z), (0.1, 0.1, z), (-0.1, 0.1, z), (-0.1, -0.1, z)],
                                     closed=True)
        from abphase.model import resample_path

        flux = flux_through_loop([loop], sq)
        line = resample_path(sq, 1e-4).line_integral(lambda p: vector_potential([loop], p))
        assert flux == pytest.approx(line, rel=1e-4)

    def test_open_path(self, unit_solenoid):
        with pytest.raises(ValueError):
            flux_through_loop([unit_solenoid], SampledPath.from_points([(0.1, 0, 0), (0, 0.1, 0)]))

    def test_surface_containing_loop(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.05, 1.0)
        with pytest.raises(GeometryError):
            flux_through_loop([loop], SampledPath.arc((0, 0, 0), 0.1, 0, 2 * math.pi, 64))

    def test_surface_pierced_by_wire(self):
        wire = SegmentChain([(0, 0, -1), (0, 0, 1)], 1.0)
        loop = SampledPath.arc((0, 0, 0), 0.1, 0, 2 * math.pi, 64)
        with pytest.raises(GeometryError):
            flux_through_loop([wire], loop)

    def test_non_planar_rejected(self, unit_solenoid):
        pts = [(0.1, 0, 0), (0, 0.1, 0.05), (-0.1, 0, 0), (0, -0.1, 0.05), (0.1, 0, 0)]
        with pytest.raises(GeometryError):
            flux_through_loop([unit_solenoid], SampledPath.from_points(pts, closed=True))


class TestScalarPotential:
    def shell(self, q=1e-9, radius=0.2):
        return SphericalShell((0.1, -0.2, 0.3), radius, ChargeWaveform((0.0, 1.0), (q, q)))

    def test_interior_constant(self, rng):
        shell = self.shell()
        pts = np.asarray(shell.center) + rng.uniform(-0.1, 0.1, size=(6, 3))
        u = scalar_potential([shell], pts, 0.5)
        want = 1e-9 / (4 * math.pi * SI.eps0 * 0.2)
        assert np.allclose(u, want, rtol=1e-6)

    def test_exterior_point_charge(self):
        shell = self.shell()
        d = 0.7
        p = np.asarray(shell.center) + d * np.array([0.6, 0.0, 0.8])
        assert scalar_potential([shell], p, 0.5) == pytest.approx(1e-9 / (4 * math.pi * SI.eps0 * d), rel=1e-9)

    def test_zero_charge_and_outside_support(self):
        shell = self.shell()
        assert scalar_potential([shell], (0.1, -0.2, 0.3), 5.0) == 0.0
        zero = SphericalShell((0, 0, 0), 1.0, ChargeWaveform.zero())
        assert scalar_potential([zero], (0.3, 0, 0), 0.0) == 0.0

    def test_tube_axis_closed_form(self):
        q, a, length = 2e-9, 0.01, 0.3
        tube = CylindricalShell((0, 0, 0), (1, 0, 0), a, length, ChargeWaveform((0.0, 1.0), (q, q)))
        for x in (0.0, 0.07, 0.14, 0.25):
            lam = q / length
            want = lam / (4 * math.pi * SI.eps0) * (math.asinh((length / 2 - x) / a) + math.asinh((length / 2 + x) / a))
            assert scalar_potential([tube], (x, 0, 0), 0.5) == pytest.approx(want, rel=1e-9)

    def test_tube_far_field(self):
        tube = CylindricalShell((0, 0, 0), (0, 1, 0), 0.01, 0.05, ChargeWaveform((0.0,), (1e-9,)))
        assert scalar_potential([tube], (30.0, 0, 0), 0.0) == pytest.approx(1e-9 / (4 * math.pi * SI.eps0 * 30), rel=1e-6)

    def test_superposition_and_linearity(self):
        a = self.shell()
        b = CylindricalShell((0.5, 0, 0), (0, 0, 1), 0.05, 0.3, ChargeWaveform((0.0, 1.0), (-3e-9, 1e-9)))
        pts = np.array([[0.0, 0.4, 0.1], [0.9, 0.3, -0.2]])
        both = scalar_potential([a, b], pts, 0.25)
        assert np.allclose(both, scalar_potential([a], pts, 0.25) + scalar_potential([b], pts, 0.25), rtol=1e-14)
        a2 = SphericalShell(a.center, a.radius, a.waveform.scaled(4.0))
        assert np.allclose(scalar_potential([a2], pts, 0.25), 4 * scalar_potential([a], pts, 0.25), rtol=1e-14)

    def test_proximity(self):
        shell = self.shell()
        with pytest.raises(ProximityError):
            scalar_potential([shell], np.asarray(shell.center) + (0.2, 0, 0), 0.5)
