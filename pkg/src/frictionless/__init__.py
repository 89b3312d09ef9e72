"""Fast frictionless expansion of a harmonic trap by inverse engineering.

Design a scaling law b(t), read the trap frequency off the Ermakov
equation, and check the result with an independent grid propagator.
"""

from .ansatz import (
    boundary_residuals,
    design_exp_polynomial,
    design_phase_constrained,
    design_polynomial,
    phase_integral,
)
from .bangbang import (
    BangBangLaw,
    BangBangPlan,
    BangBangProfile,
    bangbang_profile,
    segment1_b,
    segment2_b,
    solve_matching,
    t_min,
)
from .dynamics import (
    ExpandingMode,
    GridState,
    eigenstate_grid,
    expanding_mode_wavefunction,
    fidelity,
    grid_energy,
    instantaneous_eigenstate,
    mode_energy,
    mode_width,
    populations,
    propagate,
    propagate_many,
)
from .ermakov import adiabaticity_margin, ermakov_forward, inverse_frequency
from .errors import FrictionlessError
from .model import (
    ConstantProfile,
    OscillatorSpec,
    hz_to_angular,
    linear_ramp,
    make_spec,
    uniform_ramp,
)

__version__ = "0.1.0"
