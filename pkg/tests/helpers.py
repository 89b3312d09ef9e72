"""Shared fixtures data and cached grid propagations.

Propagations are expensive (tens of seconds), so every (tf, n, ansatz)
combination is run at most once per test session and shared between the
property tests and the acceptance report.
"""

import time
from functools import lru_cache

import numpy as np

from frictionless.ansatz import design_exp_polynomial, design_polynomial
from frictionless.dynamics import (
    ExpandingMode,
    eigenstate_grid,
    mode_grid,
    propagate_many,
)
from frictionless.ermakov import inverse_frequency
from frictionless.model import hz_to_angular, make_spec

OMEGA0 = hz_to_angular(250.0)
OMEGAF = hz_to_angular(2.5)
TF_VALUES = (2e-3, 6e-3, 10e-3, 15e-3, 25e-3)
N_SNAPSHOTS = 50

DESIGNS = {"poly": design_polynomial, "exppoly": design_exp_polynomial}


def spec_for(tf):
    return make_spec(OMEGA0, OMEGAF, tf)


class Run:
    """Outcome of one grid propagation of u_n(0) along a designed profile."""

    def __init__(self, tf, n, ansatz):
        self.spec = spec_for(tf)
        self.law = DESIGNS[ansatz](self.spec)
        self.profile = inverse_frequency(self.law, self.spec.omega0)
        self.mode = ExpandingMode(n, self.law, self.spec)
        self.psi0 = eigenstate_grid(n, self.spec.omega0, self.spec, law=self.law)
        # snapshots strictly inside (0, tf) for energy comparisons along the way
        self.times = np.linspace(0.0, tf, N_SNAPSHOTS + 2)[1:-1]
        start = time.perf_counter()
        self.snapshots, self.final = propagate_many(
            self.profile, self.psi0, self.spec, times=self.times
        )
        self.elapsed = time.perf_counter() - start
        self.exact = mode_grid(self.mode, tf, self.final)

    @property
    def max_error(self):
        return float(np.max(np.abs(self.final.amplitudes - self.exact.amplitudes)))


@lru_cache(maxsize=None)
def run(tf, n, ansatz="poly"):
    return Run(tf, n, ansatz)


#: criterion number -> (passed, one-line description); filled by test_acceptance
ACCEPTANCE = {}


def record(number, passed, text):
    ACCEPTANCE[number] = (bool(passed), text)
    return passed


@lru_cache(maxsize=None)
def constant_trap_run():
    """u_1 held in the initial trap for 1e5 steps: (psi0, psi, elapsed seconds)."""
    from frictionless.model import ConstantProfile

    spec = make_spec(OMEGA0, OMEGA0, 0.1)
    psi0 = eigenstate_grid(1, OMEGA0, spec, halfwidth=15 * spec.length_scale, n_points=4096)
    start = time.perf_counter()
    psi = propagate_many(ConstantProfile(OMEGA0**2, spec.tf), psi0, spec, dt=spec.tf / 1e5)[1]
    return psi0, psi, time.perf_counter() - start
