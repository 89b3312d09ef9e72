"""Shared domain types: oscillator parameters, scaling laws b(t) and
frequency profiles omega^2(t).

Units follow the convention hbar = m = 1 unless set explicitly; angular
frequencies are in rad/s and times in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicHermiteSpline

from .errors import NonPositiveParameter, PositivityViolated

#: Number of uniform intervals used when checking b(t) > 0.
VALIDATION_POINTS = 10_000


def hz_to_angular(f):
    """Convert an ordinary frequency in Hz to an angular frequency in rad/s."""
    return 2.0 * math.pi * f


@dataclass(frozen=True)
class OscillatorSpec:
    """Physical parameters of a trap expansion (or compression).

    Parameters
    ----------
    omega0, omegaf : float
        Initial and final trap angular frequencies (rad/s).
    tf : float
        Duration of the process (s).
    mass, hbar : float
        Particle mass and Planck constant, both 1 by default.
    """

    omega0: float
    omegaf: float
    tf: float
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("omega0", "omegaf", "tf", "mass", "hbar"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise NonPositiveParameter(f"{name} must be finite and > 0, got {value!r}")

    @property
    def gamma(self):
        """Final width ratio sqrt(omega0/omegaf)."""
        return math.sqrt(self.omega0 / self.omegaf)

    @property
    def length_scale(self):
        """Oscillator length sqrt(hbar / (m omega0)) of the initial trap."""
        return math.sqrt(self.hbar / (self.mass * self.omega0))

    def with_tf(self, tf):
        return OscillatorSpec(self.omega0, self.omegaf, tf, self.mass, self.hbar)


def make_spec(omega0, omegaf, tf, mass=1.0, hbar=1.0):
    """Build a validated :class:`OscillatorSpec`."""
    return OscillatorSpec(float(omega0), float(omegaf), float(tf), float(mass), float(hbar))


# --------------------------------------------------------------------------
# Scaling laws
# --------------------------------------------------------------------------


class ScalingLaw:
    """Dimensionless scaling function b(t) on [0, tf] with two derivatives.

    Subclasses implement :meth:`b`, :meth:`bdot` and :meth:`bddot`; all accept
    scalars or arrays.
    """

    tf: float

    def b(self, t):
        raise NotImplementedError

    def bdot(self, t):
        raise NotImplementedError

    def bddot(self, t):
        raise NotImplementedError

    def validate(self):
        """Raise :class:`PositivityViolated` unless b > 0 on a dense grid."""
        t = np.linspace(0.0, self.tf, VALIDATION_POINTS + 1)
        b = np.asarray(self.b(t))
        bmin = float(np.min(b))
        if not np.all(np.isfinite(b)) or bmin <= 0.0:
            i = int(np.argmin(b))
            raise PositivityViolated(f"b(t) = {bmin:.6g} <= 0 at t = {t[i]:.6g} s")
        return self


class _TwoSided:
    """Polynomial in s stored twice: in powers of s and in powers of u = s - 1.

    The first form is used for s <= 1/2 and the second beyond, so values and
    derivatives at both ends come straight from the lowest coefficients.
    Boundary conditions imposed on those coefficients then hold exactly in
    floating point instead of up to cancellation among rounded terms.
    """

    def __init__(self, coeffs, end_coeffs=None):
        head = Polynomial(coeffs)
        tail = head if end_coeffs is None else Polynomial(end_coeffs)
        self._parts = [(head.deriv(k) if k else head, tail.deriv(k) if k else tail) for k in range(3)]
        self._shift = end_coeffs is not None

    def __call__(self, s, k=0):
        head, tail = self._parts[k]
        if not self._shift:
            return head(s)
        s = np.asarray(s, dtype=float)
        return np.where(s <= 0.5, head(s), tail(s - 1.0))


@dataclass(frozen=True, eq=False)
class PolynomialLaw(ScalingLaw):
    """b(t) = sum_j coeffs[j] * s**j with s = t/tf.

    ``end_coeffs``, if given, is the same polynomial in powers of s - 1; it
    is used for s > 1/2.
    """

    coeffs: np.ndarray
    tf: float
    end_coeffs: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if self.end_coeffs is not None:
            object.__setattr__(self, "end_coeffs", np.asarray(self.end_coeffs, dtype=float))
        object.__setattr__(self, "_p", _TwoSided(self.coeffs, self.end_coeffs))
        self.validate()

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def b(self, t):
        return self._p(np.asarray(t) / self.tf)

    def bdot(self, t):
        return self._p(np.asarray(t) / self.tf, 1) / self.tf

    def bddot(self, t):
        return self._p(np.asarray(t) / self.tf, 2) / self.tf**2


@dataclass(frozen=True, eq=False)
class ExpPolynomialLaw(ScalingLaw):
    """b(t) = exp(p(s)) with p(s) = sum_j coeffs[j] * s**j and s = t/tf.

    ``end_coeffs`` plays the same role as for :class:`PolynomialLaw`.
    """

    coeffs: np.ndarray
    tf: float
    end_coeffs: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if self.end_coeffs is not None:
            object.__setattr__(self, "end_coeffs", np.asarray(self.end_coeffs, dtype=float))
        object.__setattr__(self, "_p", _TwoSided(self.coeffs, self.end_coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def b(self, t):
        return np.exp(self._p(np.asarray(t) / self.tf))

    def bdot(self, t):
        s = np.asarray(t) / self.tf
        return self._p(s, 1) / self.tf * np.exp(self._p(s))

    def bddot(self, t):
        s = np.asarray(t) / self.tf
        dp = self._p(s, 1) / self.tf
        ddp = self._p(s, 2) / self.tf**2
        return (ddp + dp * dp) * np.exp(self._p(s))


@dataclass(frozen=True, eq=False)
class NumericLaw(ScalingLaw):
    """Tabulated b(t), interpolated by piecewise cubic Hermite splines.

    ``bddot`` samples, when given, make the derivative interpolant Hermite
    as well; otherwise it is built from finite differences of ``bdot``.
    """

    t: np.ndarray
    b_samples: np.ndarray
    bdot_samples: np.ndarray
    bddot_samples: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be one-dimensional and strictly increasing")
        b = np.asarray(self.b_samples, dtype=float)
        db = np.asarray(self.bdot_samples, dtype=float)
        if np.any(b <= 0):
            raise PositivityViolated("tabulated b(t) has non-positive samples")
        ddb = self.bddot_samples
        ddb = np.gradient(db, t) if ddb is None else np.asarray(ddb, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "b_samples", b)
        object.__setattr__(self, "bdot_samples", db)
        object.__setattr__(self, "bddot_samples", ddb)
        object.__setattr__(self, "_b", CubicHermiteSpline(t, b, db))
        object.__setattr__(self, "_db", CubicHermiteSpline(t, db, ddb))

    @property
    def tf(self):
        return float(self.t[-1])

    @property
    def t0(self):
        return float(self.t[0])

    def b(self, t):
        return self._b(t)

    def bdot(self, t):
        return self._db(t)

    def bddot(self, t):
        return self._db(t, 1)


# --------------------------------------------------------------------------
# Frequency profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """A time interval on which a profile's omega^2(t) is smooth."""

    start: float
    stop: float
    omega_sq: object  # callable t -> omega^2


class FrequencyProfile:
    """Signed squared trap frequency omega^2(t) on [0, tf].

    :meth:`pieces` splits [0, tf] into intervals on which omega^2 is smooth;
    integrators step across each piece separately.
    """

    tf: float
    omega0: float

    def omega_sq(self, t):
        raise NotImplementedError

    def omega_dot(self, t):
        """Closed-form d(omega)/dt, or None when the variant has none."""
        return None

    def pieces(self):
        return [Piece(0.0, self.tf, self.omega_sq)]

    @property
    def breakpoints(self):
        return [p.start for p in self.pieces()[1:]]


@dataclass(frozen=True)
class ConstantProfile(FrequencyProfile):
    """Time-independent omega^2 (negative values give an expulsive barrier)."""

    omega_sq_value: float
    tf: float
    omega0: float | None = None

    def __post_init__(self):
        if self.omega0 is None:
            if self.omega_sq_value <= 0:
                raise ValueError("omega0 must be given for a non-confining constant profile")
            object.__setattr__(self, "omega0", math.sqrt(self.omega_sq_value))

    def omega_sq(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.omega_sq_value)

    def omega_dot(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True, eq=False)
class InverseEngineeredProfile(FrequencyProfile):
    """omega^2(t) = omega0^2/b^4 - bddot/b, read off the Ermakov equation."""

    law: ScalingLaw
    omega0: float
    endpoint_rtol: float = 1e-9

    def __post_init__(self):
        tf = self.law.tf
        w0sq = self.omega0**2
        start = float(self.omega_sq(0.0))
        stop = float(self.omega_sq(tf))
        target = w0sq / float(self.law.b(tf)) ** 4
        if abs(start - w0sq) > self.endpoint_rtol * w0sq:
            raise AssertionError(f"omega^2(0) = {start!r} differs from omega0^2 = {w0sq!r}")
        if abs(stop - target) > self.endpoint_rtol * target:
            raise AssertionError(f"omega^2(tf) = {stop!r} differs from omegaf^2 = {target!r}")

    @property
    def tf(self):
        return self.law.tf

    @property
    def omegaf(self):
        return self.omega0 / float(self.law.b(self.tf)) ** 2

    def omega_sq(self, t):
        b = self.law.b(t)
        return self.omega0**2 / b**4 - self.law.bddot(t) / b


@dataclass(frozen=True)
class LinearRamp(FrequencyProfile):
    """omega(t) = omega0 + (omegaf - omega0) t/tf."""

    omega0: float
    omegaf: float
    tf: float

    def omega(self, t):
        return self.omega0 + (self.omegaf - self.omega0) * np.asarray(t) / self.tf

    def omega_sq(self, t):
        return self.omega(t) ** 2

    def omega_dot(self, t):
        return np.full_like(np.asarray(t, dtype=float), (self.omegaf - self.omega0) / self.tf)


@dataclass(frozen=True)
class UniformRamp(FrequencyProfile):
    """omega(t) = omega0 / (1 - (omegaf - omega0) t / (tf omegaf)).

    The ratio omega_dot/omega^2 is constant along the ramp.
    """

    omega0: float
    omegaf: float
    tf: float

    @property
    def _rate(self):
        return (self.omegaf - self.omega0) / (self.tf * self.omegaf)

    def omega(self, t):
        return self.omega0 / (1.0 - self._rate * np.asarray(t))

    def omega_sq(self, t):
        return self.omega(t) ** 2

    def omega_dot(self, t):
        return self._rate * self.omega(t) ** 2 / self.omega0


def linear_ramp(spec):
    return LinearRamp(spec.omega0, spec.omegaf, spec.tf)


def uniform_ramp(spec):
    # the denominator runs linearly from 1 to omega0/omegaf, so it stays positive
    return UniformRamp(spec.omega0, spec.omegaf, spec.tf)


__all__ = [
    "VALIDATION_POINTS",
    "hz_to_angular",
    "OscillatorSpec",
    "make_spec",
    "ScalingLaw",
    "PolynomialLaw",
    "ExpPolynomialLaw",
    "NumericLaw",
    "Piece",
    "FrequencyProfile",
    "ConstantProfile",
    "InverseEngineeredProfile",
    "LinearRamp",
    "UniformRamp",
    "linear_ramp",
    "uniform_ramp",
]
