import math

import numpy as np
import pytest

from abphase.errors import ProximityError
from abphase.fields import vector_potential
from abphase.kernels import Polarization
from abphase.model import (
    SI,
    ChargeWaveform,
    CircularLoop,
    ParticleState,
    SampledPath,
    SegmentChain,
    SphericalShell,
)
from abphase.scenarios import circle_arms
from abphase.vacuum import (
    accumulate_phase,
    energy_shift_electric,
    energy_shift_magnetic,
    energy_shift_modespace,
    kernel_sum,
    modespace_potential,
    segment_energy_shifts,
    source_elements,
)

from conftest import RADIUS

FULL, TRANS, LONG = Polarization.FULL, Polarization.TRANSVERSE, Polarization.LONGITUDINAL
K = 1 / (4 * math.pi * SI.eps0)
# gauge functions are scaled to the flux quantum so per-arm shifts are O(1) rad
PHI0 = 2 * math.pi * SI.hbar / SI.e_charge


def azimuthal_particle(r, q=1.0, m=1.0, speed=1.0):
    r = np.asarray(r, dtype=float)
    phi_hat = np.array([-r[1], r[0], 0.0]) / math.hypot(r[0], r[1])
    return ParticleState(q, m, r, m * speed * phi_hat)


class TestMagneticShift:
    def test_orthogonal_momentum(self, unit_solenoid):
        part = ParticleState(1.0, 1.0, (0.1, 0, 0), (1.0, 0, 0.3))
        assert energy_shift_magnetic(part, [unit_solenoid]).value == pytest.approx(0.0, abs=1e-12)

    def test_charge_sign(self, unit_solenoid):
        p = azimuthal_particle((0.03, 0.04, 0.1))
        m = azimuthal_particle((0.03, 0.04, 0.1), q=-1.0)
        assert energy_shift_magnetic(m, [unit_solenoid]).value == -energy_shift_magnetic(p, [unit_solenoid]).value

    def test_long_solenoid_value(self, unit_solenoid):
        shift = energy_shift_magnetic(azimuthal_particle((0.1, 0, 0)), [unit_solenoid])
        assert shift.route == "real"
        # finite length/radius = 100: the exterior potential carries the 1.9% return-flux deficit
        assert shift.value == pytest.approx(-1.59155 * 0.980586, rel=1e-4)

    @pytest.mark.xfail(strict=True, reason="length/radius = 100 is 1.9% short of the long-solenoid limit at "
                                            "r = 10 a; see the decisions ledger")
    def test_spec_example_literal(self, unit_solenoid):
        shift = energy_shift_magnetic(azimuthal_particle((0.1, 0, 0)), [unit_solenoid])
        assert shift.value == pytest.approx(-1.59155, rel=0.01)

    def test_proximity(self, unit_solenoid):
        with pytest.raises(ProximityError):
            energy_shift_magnetic(azimuthal_particle((RADIUS, 0, 0)), [unit_solenoid])


class TestModeSpace:
    def test_kernel_sum_matches_direct(self, rng):
        pts = rng.uniform(-1, 1, size=(7, 3))
        pos = rng.uniform(-0.3, 0.3, size=(50, 3)) + [0, 0, 3]
        idl = rng.normal(size=(50, 3))
        alpha, beta = 0.3, -0.7
        diff = pts[:, None, :] - pos[None, :, :]
        d = np.linalg.norm(diff, axis=2)
        rhat = diff / d[..., None]
        direct = np.einsum("pm,mi->pi", alpha / d, idl) + np.einsum(
            "pm,pmi,pmj,mj->pi", beta / d, rhat, rhat, idl)
        assert np.allclose(kernel_sum(pts, pos, idl, alpha, beta, block=3), direct, rtol=1e-12, atol=1e-14)

    def test_source_elements(self):
        loop = CircularLoop((0, 0, 0), (0, 0, 1), 0.1, 2.0)
        chain = SegmentChain([(0, 0, 0), (1, 0, 0), (1, 1, 0)], 3.0)
        pos, idl = source_elements([loop, chain], loop_nodes=32, segment_nodes=4)
        assert pos.shape == (32 + 8, 3)
        # net I dl: zero for a closed loop, I (r_end - r_start) for the chain
        assert np.allclose(idl.sum(axis=0), [3.0, 3.0, 0.0], atol=1e-14)

    def test_full_equals_real_space(self, unit_solenoid, rng):
        pts = []
        while len(pts) < 8:
            p = rng.uniform([-0.1, -0.1, -0.6], [0.1, 0.1, 0.6])
            if math.hypot(p[0], p[1]) > 1.5 * RADIUS:
                pts.append(p)
        pts = np.array(pts)
        real = vector_potential([unit_solenoid], pts)
        mode = modespace_potential([unit_solenoid], pts, FULL)
        assert np.allclose(mode, real, rtol=1e-5, atol=1e-5 * np.abs(real).max())

    def test_energy_shift_routes_agree(self, unit_solenoid):
        part = ParticleState(-2.0, 3.0, (0.04, 0.02, 0.1), (0.2, 1.1, -0.3))
        real = energy_shift_magnetic(part, [unit_solenoid]).value
        mode = energy_shift_modespace(part, [unit_solenoid], "full")
        assert mode.route == "modespace" and mode.pol is FULL
        assert mode.value == pytest.approx(real, rel=1e-5)

    def test_polarization_additivity(self, unit_solenoid):
        part = azimuthal_particle((0.05, -0.03, 0.2))
        kw = dict(n_loops=300)
        full = energy_shift_modespace(part, [unit_solenoid], FULL, **kw).value
        t = energy_shift_modespace(part, [unit_solenoid], TRANS, **kw).value
        lo = energy_shift_modespace(part, [unit_solenoid], LONG, **kw).value
        assert t + lo == pytest.approx(full, rel=1e-9)

    def test_longitudinal_vanishes_for_closed_currents(self, unit_solenoid):
        # a divergence-free current has no longitudinal part: the L kernel sum integrates to ~0
        v = modespace_potential([unit_solenoid], (0.05, 0.01, 0.0), LONG, method="closed_form", n_loops=300)
        ref = modespace_potential([unit_solenoid], (0.05, 0.01, 0.0), FULL, method="closed_form", n_loops=300)
        assert np.linalg.norm(v) <= 1e-9 * np.linalg.norm(ref)

    @pytest.mark.parametrize("pol", list(Polarization))
    def test_zero_current(self, unit_solenoid, pol):
        part = azimuthal_particle((0.05, 0, 0))
        assert energy_shift_modespace(part, [unit_solenoid.scaled(0.0)], pol, n_loops=50).value == 0.0


class TestElectricShift:
    def test_zero_charge(self):
        shell = SphericalShell((0, 0, 0), 0.1, ChargeWaveform((0.0, 1.0), (0.0, 1e-9)))
        part = ParticleState(SI.e_charge, 1.0, (0.02, 0, 0), (0, 0, 0))
        assert energy_shift_electric(part, [shell], 0.0).value == 0.0

    def test_shell_interior(self, rng):
        q_src = 3e-9
        shell = SphericalShell((0, 0, 0), 0.1, ChargeWaveform((0.0,), (q_src,)))
        want = SI.e_charge * q_src * K / 0.1
        for r in rng.uniform(-0.05, 0.05, size=(4, 3)):
            shift = energy_shift_electric(ParticleState(SI.e_charge, 1.0, r, (0, 0, 0)), [shell], 0.0)
            assert shift.value == pytest.approx(want, rel=1e-6)
            assert shift.route == "electric"

    def test_concentric_shells(self):
        q_src, r_in, r_out, d = 1e-9, 0.05, 0.2, 0.11
        inner = SphericalShell((0, 0, 0), r_in, ChargeWaveform((0.0,), (q_src,)))
        outer = SphericalShell((0, 0, 0), r_out, ChargeWaveform((0.0,), (-q_src,)))
        part = ParticleState(2.0, 1.0, (0.0, d * 0.6, d * 0.8), (0, 0, 0))
        want = 2.0 * (q_src * K / d - q_src * K / r_out)
        assert energy_shift_electric(part, [inner, outer], 0.0).value == pytest.approx(want, rel=1e-6)


class TestAccumulatePhase:
    def test_identical_paths(self, solenoid):
        arm = SampledPath.arc((0, 0, 0), 0.03, 0, math.pi, 64)
        res = accumulate_phase(arm, arm, [solenoid])
        assert res.phase_diff == 0.0
        assert res.phase_a == res.phase_b != 0.0

    def test_two_pi_enclosing(self, solenoid):
        arm_a, arm_b = circle_arms((0, 0, 0), 2 * RADIUS, 256)
        res = accumulate_phase(arm_a, arm_b, [solenoid])
        assert abs(res.phase_diff) == pytest.approx(2 * math.pi, rel=0.01)
        assert res.abs_phase_diff == abs(res.phase_diff)

    def test_composition_from_segments(self, solenoid):
        arm_a, arm_b = circle_arms((0, 0, 0), 0.05, 64)
        res = accumulate_phase(arm_a, arm_b, [solenoid], max_segment_length=None)
        assert res.phase_diff == math.fsum(res.per_segment_b) - math.fsum(res.per_segment_a)
        assert len(res.per_segment) == len(res.per_segment_a) + len(res.per_segment_b) == 64
        assert res.per_segment[0][:2] == ("a", 0)

    def test_reversal_negates(self, solenoid):
        arm_a, arm_b = circle_arms((0.01, 0.02, 0), 0.05, 64)
        fwd = accumulate_phase(arm_a, arm_b, [solenoid])
        rev = accumulate_phase(arm_a.reversed(), arm_b.reversed(), [solenoid])
        assert rev.phase_a == pytest.approx(-fwd.phase_a, rel=1e-12)
        assert rev.phase_diff == pytest.approx(-fwd.phase_diff, rel=1e-12)

    @pytest.mark.parametrize("chi", [
        lambda p: 20 * PHI0 * (300 * p[:, 0] ** 2 * p[:, 1] - 50 * p[:, 2] ** 3 + 0.2),
        lambda p: 20 * PHI0 * np.sin(40 * p[:, 0]) * np.cos(25 * p[:, 1] + 0.3),
    ])
    def test_gauge_invariance(self, solenoid, chi):
        arm_a, arm_b = circle_arms((0.01, 0.007, 0), 0.04, 128)
        base = accumulate_phase(arm_a, arm_b, [solenoid])
        shifted = accumulate_phase(arm_a, arm_b, [solenoid], gauge=chi)
        assert abs(shifted.phase_a - base.phase_a) > 0.1
        assert shifted.phase_diff == pytest.approx(base.phase_diff, rel=1e-10)

    def test_modespace_route(self, solenoid):
        arm_a, arm_b = circle_arms((0, 0, 0), 0.03, 64)
        num = {"n_loops": 300}
        real = accumulate_phase(arm_a, arm_b, [solenoid], numerics=num)
        full = accumulate_phase(arm_a, arm_b, [solenoid], "modespace", pol=FULL, numerics=num)
        trans = accumulate_phase(arm_a, arm_b, [solenoid], "modespace", pol=TRANS, numerics=num)
        longi = accumulate_phase(arm_a, arm_b, [solenoid], "modespace", pol=LONG, numerics=num)
        assert full.phase_diff == pytest.approx(real.phase_diff, rel=1e-5)
        assert trans.phase_diff + longi.phase_diff == pytest.approx(full.phase_diff, rel=1e-9)
        assert trans.pol is TRANS and real.pol is None

    def test_route_mismatch(self, solenoid):
        arm_a, arm_b = circle_arms((0, 0, 0), 0.05, 16)
        shell = SphericalShell((1, 0, 0), 0.1, ChargeWaveform.zero())
        with pytest.raises(ValueError):
            accumulate_phase(arm_a, arm_b, [solenoid], "electric")
        with pytest.raises(ValueError):
            accumulate_phase(arm_a, arm_b, [shell], "real")
        with pytest.raises(ValueError):
            accumulate_phase(arm_a, arm_b, [solenoid, shell], "real")
        with pytest.raises(ValueError):
            accumulate_phase(arm_a, arm_b, [solenoid], "retarded")

    def test_electric_shell_pulse(self):
        # arm a sits inside a pulsed shell, arm b far away: phase = -(q/hbar) U tau
        q_src, tau = 1e-18, 1e-9
        wf = ChargeWaveform.rectangular(2e-9, tau, q_src)
        shell = SphericalShell((0, 0, 0), 0.1, wf)
        arm_a = SampledPath([0.0, 5e-9], [(0, 0, 0), (0.01, 0, 0)])
        arm_b = SampledPath([0.0, 5e-9], [(5.0, 0, 0), (5.01, 0, 0)])
        res = accumulate_phase(arm_a, arm_b, [shell], "electric")
        u_in = q_src * K / 0.1
        assert res.phase_a == pytest.approx(-SI.e_charge * u_in * tau / SI.hbar, rel=1e-6)
        u_far = q_src * K / 5.005
        assert res.phase_diff == pytest.approx(SI.e_charge * (u_in - u_far) * tau / SI.hbar, rel=1e-3)


class TestSegmentShifts:
    def test_matches_real_shift(self, unit_solenoid):
        path = SampledPath.arc((0, 0, 0), 0.05, 0, math.pi / 2, 8, speed=2.0)
        shifts = segment_energy_shifts(path, [unit_solenoid], q=1.0, m=1.0, numerics={"n_loops": 300})
        mid = path.midpoints[3]
        p = path.steps[3] / path.dt[3]
        ref = energy_shift_magnetic(ParticleState(1.0, 1.0, mid, p), [unit_solenoid], n_loops=300).value
        assert shifts[3] == pytest.approx(ref, rel=1e-12)

    def test_transverse_equals_full_pointwise_for_solenoid(self, unit_solenoid):
        path = SampledPath.polygon([(0.02, -0.03), (0.06, -0.03), (0.06, 0.04), (0.02, 0.04)])
        num = {"n_loops": 300}
        full = segment_energy_shifts(path, [unit_solenoid], "modespace", pol=FULL, numerics=num)
        trans = segment_energy_shifts(path, [unit_solenoid], "modespace", pol=TRANS, numerics=num)
        assert np.allclose(trans, full, rtol=1e-6)

    def test_electric_route_rejected(self, unit_solenoid):
        path = SampledPath.arc((0, 0, 0), 0.05, 0, 1.0, 4)
        with pytest.raises(ValueError):
            segment_energy_shifts(path, [unit_solenoid], "electric")
