import math

import numpy as np
import pytest
from hypothesis import settings

from abphase.model import SI, Solenoid

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

RADIUS = 0.01
LENGTH = 1.0
TURNS = 1000.0


def two_pi_current(constants=SI, radius=RADIUS, turns=TURNS):
    """Solenoid current giving q Phi0 / hbar = 2 pi for q = e."""
    return 2 * math.pi * constants.hbar / (constants.e_charge * constants.mu0 * turns * math.pi * radius**2)


@pytest.fixture
def solenoid():
    """length / radius = 100 with q Phi0 / hbar = 2 pi."""
    return Solenoid((0, 0, 0), (0, 0, 1), RADIUS, LENGTH, TURNS, two_pi_current())


@pytest.fixture
def unit_solenoid():
    """length / radius = 100 with nominal flux Phi0 = 1 Wb."""
    current = 1.0 / (SI.mu0 * TURNS * math.pi * RADIUS**2)
    return Solenoid((0, 0, 0), (0, 0, 1), RADIUS, LENGTH, TURNS, current)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Fig. 3 geometry: tubes along x at y = +-2.5 cm, particle at 1e6 m/s reaches
# the tube centres at about 3.017e-7 s and is inside both from 2.02e-7 to 4.02e-7 s.
TUBE_SPEED = 1.0e6
PULSE_START = 3.0e-7


def electric_setup(waveform_a, waveform_b=None, constants=SI):
    from abphase.model import ChargeWaveform, CylindricalShell
    from abphase.scenarios import tube_arms

    tube_a = CylindricalShell((0, 0.025, 0), (1, 0, 0), 0.005, 0.2, waveform_a, name="ta")
    tube_b = CylindricalShell((0, -0.025, 0), (1, 0, 0), 0.005, 0.2,
                              waveform_b if waveform_b is not None else ChargeWaveform.zero(), name="tb")
    arm_a, arm_b = tube_arms(tube_a, tube_b, (-0.3, 0, 0), (0.3, 0, 0), speed=TUBE_SPEED)
    return tube_a, tube_b, arm_a, arm_b


def potential_pulse(shape, potential_area, start=PULSE_START, duration=1e-9, constants=SI):
    """Charge waveform on tube a giving integral of (U_a - U_b) dt = potential_area (V s)."""
    from abphase.model import ChargeWaveform
    from abphase.scenarios import charge_for_potential, pulse

    probe = electric_setup(ChargeWaveform.zero(), constants=constants)
    per_volt = charge_for_potential(probe[0], probe[1], 1.0, constants)
    return pulse(shape, start, duration, potential_area * per_volt)


# acceptance criteria report: test_acceptance records one line per criterion
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
