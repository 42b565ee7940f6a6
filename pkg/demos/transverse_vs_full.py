"""Transverse-only versus full photon sums for the magnetic energy shift.

The paper argues that keeping only transverse photons works "only in specific
configurations". This script measures the difference at two levels:

* per segment, the energy shift dE along an off-centre square circuit;
* per closed loop, the accumulated phase.

For a solenoid the current is divergence-free, so its longitudinal part
vanishes identically and the two sums agree pointwise to rounding. An open
wire segment, whose current piles up at the ends, does not have that
property and shows a large transverse/full split.

Run with ``python3 demos/transverse_vs_full.py``.
"""

import math

import numpy as np

from abphase import SI, Solenoid
from abphase.kernels import Polarization
from abphase.model import SampledPath, SegmentChain, resample_path
from abphase.scenarios import circle_arms
from abphase.vacuum import accumulate_phase, modespace_potential, segment_energy_shifts

FULL, TRANS, LONG = Polarization.FULL, Polarization.TRANSVERSE, Polarization.LONGITUDINAL
RADIUS = 0.01
CURRENT = 2 * math.pi * SI.hbar / (SI.e_charge * SI.mu0 * 1000.0 * math.pi * RADIUS**2)


def main():
    sol = Solenoid((0, 0, 0), (0, 0, 1), RADIUS, 1.0, 1000.0, CURRENT)
    num = {"n_loops": 400}

    arm_a, arm_b = circle_arms((0, 0, 0), 3 * RADIUS, 256)
    phases = {p: accumulate_phase(arm_a, arm_b, [sol], "modespace", pol=p, numerics=num).phase_diff
              for p in (FULL, TRANS, LONG)}
    print("concentric circle, closed-loop phase (rad)")
    for p, v in phases.items():
        print(f"  {p.value:<13}{v: .12f}")

    square = SampledPath.polygon([(0.015, -0.02), (0.065, -0.02), (0.065, 0.03), (0.015, 0.03)], speed=1e5)
    square = resample_path(square, 1e-3)
    kw = dict(q=SI.e_charge, m=9.109e-31, numerics=num)
    d_full = segment_energy_shifts(square, [sol], "modespace", pol=FULL, **kw)
    d_trans = segment_energy_shifts(square, [sol], "modespace", pol=TRANS, **kw)
    big = np.abs(d_full) > 1e-3 * np.abs(d_full).max()
    dev = np.abs(d_trans - d_full)[big] / np.abs(d_full[big])
    print(f"\noff-centre square, {len(d_full)} segments")
    print(f"  max |dE_T - dE_full| / |dE_full| = {dev.max():.2e}")
    print(f"  closed loop: T {math.fsum(d_trans):.6e} J, full {math.fsum(d_full):.6e} J")

    wire = SegmentChain([(0.0, -0.05, 0.0), (0.0, 0.05, 0.0)], 1.0)
    probes = np.array([[0.03, 0.0, 0.0], [0.03, 0.05, 0.0], [0.0, 0.08, 0.0]])
    vf = modespace_potential([wire], probes, FULL)
    vt = modespace_potential([wire], probes, TRANS)
    print("\nopen wire along y from -5 cm to 5 cm (div J != 0 at its ends)")
    for p, f, t in zip(probes, vf, vt):
        print(f"  at {p}: |V_T - V_full| / |V_full| = {np.linalg.norm(t - f) / np.linalg.norm(f):.2%}")


if __name__ == "__main__":
    main()
