"""Aharonov-Bohm phases from vacuum-energy shifts of a charged particle near sources."""

from .errors import (
    ABPhaseError,
    ConfigError,
    ConvergenceError,
    GeometryError,
    ProximityError,
    ScenarioValidityError,
    SingularSeparationError,
)
from .fields import flux_through_loop, magnetic_field, scalar_potential, vector_potential
from .kernels import Polarization, scalar_kernel, tensor_kernel, verify_fourier_identity
from .model import (
    SI,
    ChargeWaveform,
    CircularLoop,
    CylindricalShell,
    ParticleState,
    PhysicalConstants,
    SampledPath,
    SegmentChain,
    Solenoid,
    SphericalShell,
    resample_path,
    solenoid_to_loops,
)
from .scenarios import run_electric_scenario, run_intermediate_scenario, run_magnetic_scenario
from .vacuum import (
    EnergyShift,
    PhaseResult,
    accumulate_phase,
    energy_shift_electric,
    energy_shift_magnetic,
    energy_shift_modespace,
)

__version__ = "0.1.0"
