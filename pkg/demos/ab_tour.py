"""A walk through the three scenarios with the library API.

1. Fig. 1: two arms around a finite solenoid pick up q Phi / hbar, where Phi
   comes from an independent Biot-Savart flux integral.
2. Fig. 2: legs that never enclose the solenoid pick up (theta / 2 pi) of it.
3. Fig. 3: a potential pulse on one tube shifts the phase by q area / hbar.

Run with ``python3 demos/ab_tour.py``; takes about half a minute.
"""

import math

import numpy as np

from abphase import SI, Solenoid
from abphase.model import ChargeWaveform, CylindricalShell
from abphase.scenarios import (
    charge_for_potential,
    circle_arms,
    pulse,
    run_electric_scenario,
    run_intermediate_scenario,
    run_magnetic_scenario,
    split_circuit,
    tube_arms,
)

RADIUS, LENGTH, TURNS = 0.01, 1.0, 1000.0
# current for q Phi0 / hbar = 2 pi with q = e
CURRENT = 2 * math.pi * SI.hbar / (SI.e_charge * SI.mu0 * TURNS * math.pi * RADIUS**2)


def magnetic():
    sol = Solenoid((0, 0, 0), (0, 0, 1), RADIUS, LENGTH, TURNS, CURRENT)
    print("Fig. 1  magnetic AB phase, length/radius = 100")
    print(f"  {'circuit':<18}{'phase (rad)':>14}{'q flux/hbar':>14}{'ratio':>12}")
    circuits = {
        "circle r=3a": circle_arms((0, 0, 0), 3 * RADIUS),
        "square": split_circuit([(0.03, -0.03), (0.03, 0.03), (-0.03, 0.03), (-0.03, -0.03)]),
        "not enclosing": circle_arms((0.06, 0, 0), 0.02),
    }
    for name, (arm_a, arm_b) in circuits.items():
        rep = run_magnetic_scenario([sol], arm_a, arm_b, n_loops=400)
        print(f"  {name:<18}{rep.phase_diff:14.6f}{rep.q_flux_over_hbar:14.6f}{rep.ratio:12.6f}")
    print(f"  nominal q Phi0 / hbar = {2 * math.pi:.6f}\n")


def intermediate():
    sol = Solenoid((0, 0, 0), (0, 0, 1), RADIUS, LENGTH, TURNS, CURRENT)
    print("Fig. 2  intermediate phase, traps at 3a, source at 4a")
    print(f"  {'theta/pi':>9}{'phase (rad)':>14}{'theta/2pi * 2pi':>17}")
    for k in range(0, 9, 2):
        th = k * math.pi / 4
        rep = run_intermediate_scenario(sol, th, n_loops=400)
        print(f"  {th / math.pi:9.2f}{rep.phase_diff:14.6f}{rep.prediction:17.6f}")
    print()


def electric():
    print("Fig. 3  electric AB phase, 1 uV for 1 ns on tube a")
    tube = dict(axis=(1, 0, 0), radius=0.005, length=0.2)
    probe_a = CylindricalShell((0, 0.025, 0), waveform=ChargeWaveform.zero(), **tube)
    probe_b = CylindricalShell((0, -0.025, 0), waveform=ChargeWaveform.zero(), **tube)
    per_volt = charge_for_potential(probe_a, probe_b, 1.0)
    want = SI.e_charge * 1e-6 * 1e-9 / SI.hbar
    for shape in ("rectangular", "triangular", "raised_cosine"):
        wf = pulse(shape, 3.0e-7, 1e-9, 1e-15 * per_volt)
        ta = CylindricalShell((0, 0.025, 0), waveform=wf, **tube)
        tb = probe_b
        arm_a, arm_b = tube_arms(ta, tb, (-0.3, 0, 0), (0.3, 0, 0), speed=1e6)
        rep = run_electric_scenario(ta, tb, arm_a, arm_b)
        print(f"  {shape:<14} phase {rep.phase_diff:.6f} rad   (e dU tau / hbar = {want:.6f})")
    print()


if __name__ == "__main__":
    np.set_printoptions(precision=6)
    magnetic()
    intermediate()
    electric()
