"""Quantum states on a line: analytic expanding modes and a grid propagator.

The expanding modes are exact solutions of the time-dependent Schroedinger
equation for any frequency profile that satisfies the Ermakov equation with
the given scaling law. The grid propagator makes no use of that structure,
so it serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import GridMismatch, GridTooSmall, InvalidMode, NormDrift
from .model import OscillatorSpec, ScalingLaw

BOUNDARY_DENSITY = 1e-10
NORM_DRIFT_LIMIT = 1e-6
DEFAULT_POINTS = 4096
STENCIL_ORDER = 8
MAX_K_DX = 1.0
MAX_POINTS = 1 << 16


# --------------------------------------------------------------------------
# Hermite functions
# --------------------------------------------------------------------------


def hermite_poly(n, y):
    """Physicists' Hermite polynomial H_n(y) by upward recursion."""
    y = np.asarray(y, dtype=float)
    h_prev = np.zeros_like(y)
    h = np.ones_like(y)
    for k in range(n):
        h_prev, h = h, 2.0 * y * h - 2.0 * k * h_prev
    return h


def hermite_function(n, y):
    """Normalised Hermite function pi^(-1/4) (2^n n!)^(-1/2) H_n(y) exp(-y^2/2).

    The normalisation is folded into the recursion, so no factorials appear
    and high orders do not overflow.
    """
    y = np.asarray(y, dtype=float)
    h_prev = np.zeros_like(y)
    h = np.pi**-0.25 * np.exp(-0.5 * y * y)
    for k in range(n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * y * h - math.sqrt(k / (k + 1)) * h_prev
    return h


def instantaneous_eigenstate(n, omega, spec, x):
    """Eigenfunction u_n of the trap with angular frequency ``omega``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    k = math.sqrt(spec.mass * omega / spec.hbar)
    return math.sqrt(k) * hermite_function(n, k * np.asarray(x, dtype=float))


# --------------------------------------------------------------------------
# Expanding modes
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExpandingMode:
    """Exact solution built on the n-th eigenstate of the dynamical invariant."""

    n: int
    law: ScalingLaw
    spec: OscillatorSpec

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("n must be a non-negative integer")
        if not self.spec.omega0 > 0:
            raise InvalidMode("expanding modes need omega0^2 > 0")
        object.__setattr__(self, "_tau_cache", lru_cache(maxsize=4096)(self._tau))

    def _tau(self, t):
        value, _ = integrate.quad(
            lambda s: 1.0 / self.law.b(s) ** 2, 0.0, t, epsabs=0.0, epsrel=1e-10, limit=500
        )
        return value

    def phase_integral(self, t):
        """Integral of 1/b^2 from 0 to t (cached)."""
        return self._tau_cache(float(t))

    def alpha(self, t):
        """Global phase -(n + 1/2) omega0 times the integral of 1/b^2."""
        return -(self.n + 0.5) * self.spec.omega0 * self.phase_integral(t)


def expanding_mode_wavefunction(mode, t, x):
    """Complex amplitude Psi_n(t, x) of an expanding mode."""
    spec = mode.spec
    b = float(mode.law.b(t))
    bdot = float(mode.law.bdot(t))
    if not b > 0:
        raise InvalidMode(f"b(t) = {b} is not positive")
    x = np.asarray(x, dtype=float)
    k = math.sqrt(spec.mass * spec.omega0 / spec.hbar)
    # hermite_function carries exp(-y^2/2) = exp(-m omega0 x^2 / (2 hbar b^2))
    envelope = math.sqrt(k / b) * hermite_function(mode.n, k * x / b)
    chirp = np.exp(1j * (spec.mass / (2.0 * spec.hbar)) * (bdot / b) * x * x)
    return envelope * chirp * np.exp(1j * mode.alpha(t))


def mode_energy(mode, profile, t):
    """Energy expectation of an expanding mode in the trap omega^2(t).

    Returned in absolute units (hbar * rad/s); divide by hbar*omega0 for the
    dimensionless value.
    """
    spec = mode.spec
    w0 = spec.omega0
    b = np.asarray(mode.law.b(t))
    bdot = np.asarray(mode.law.bdot(t))
    wsq = np.asarray(profile.omega_sq(t))
    return (2 * mode.n + 1) * spec.hbar / (4.0 * w0) * (bdot**2 + wsq * b**2 + w0**2 / b**2)


def mode_width(mode, t):
    """Position standard deviation, proportional to b(t)."""
    spec = mode.spec
    return np.asarray(mode.law.b(t)) * math.sqrt(
        (mode.n + 0.5) * spec.hbar / (spec.mass * spec.omega0)
    )


# --------------------------------------------------------------------------
# Grid states
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridState:
    """Wavefunction samples on a uniform grid including both end points."""

    x_min: float
    x_max: float
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 3:
            raise ValueError("amplitudes must be a 1-D array of at least three samples")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        object.__setattr__(self, "amplitudes", a)

    @property
    def n_points(self):
        return self.amplitudes.size

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def norm(self):
        return float(np.trapezoid(np.abs(self.amplitudes) ** 2, dx=self.dx))

    def normalized(self):
        return self.with_amplitudes(self.amplitudes / math.sqrt(self.norm()))

    def with_amplitudes(self, amplitudes, time=None):
        return GridState(self.x_min, self.x_max, amplitudes, self.time if time is None else time)

    def same_grid(self, other):
        return (
            self.n_points == other.n_points
            and math.isclose(self.x_min, other.x_min, rel_tol=1e-12, abs_tol=1e-300)
            and math.isclose(self.x_max, other.x_max, rel_tol=1e-12, abs_tol=1e-300)
        )


def make_grid(halfwidth, n_points=DEFAULT_POINTS):
    return np.linspace(-halfwidth, halfwidth, n_points)


def default_halfwidth(spec, n=0, law=None):
    """Half-width covering level ``n`` with six length scales to spare.

    The extent of the largest cloud along ``law`` (or the final one if no
    law is given) is max(b) * l * sqrt(2n + 1); six more oscillator lengths
    push the tail density far below the boundary check.
    """
    bmax = max(spec.gamma, 1.0)
    if law is not None:
        bmax = max(bmax, float(np.max(law.b(np.linspace(0.0, law.tf, 2001)))))
    return bmax * spec.length_scale * (math.sqrt(2 * n + 1) + 6.0)


def _momentum_extent(spec, n, law):
    # largest wavenumber carried by the expanding mode: chirp b'/b * x plus spread 1/(b l)
    r = math.sqrt(2 * n + 1) + 4.0
    ell = spec.length_scale
    if law is None:
        b = np.array([1.0, spec.gamma])
        bdot = np.zeros(2)
    else:
        t = np.linspace(0.0, law.tf, 2001)
        b = np.asarray(law.b(t), dtype=float)
        bdot = np.asarray(law.bdot(t), dtype=float)
    # m bdot x / (hbar b) at x = b l r, using m l / hbar = 1 / (omega0 l)
    k = np.abs(bdot) * r / (spec.omega0 * ell) + r / (b * ell)
    return float(np.max(k))


def default_grid(spec, n=0, law=None, min_points=DEFAULT_POINTS):
    """(halfwidth, n_points) resolving level ``n`` along ``law``.

    The point count is the smallest power of two, at least ``min_points``,
    for which the largest expected wavenumber times dx stays below
    ``MAX_K_DX``.
    """
    halfwidth = default_halfwidth(spec, n, law)
    kmax = _momentum_extent(spec, n, law)
    n_points = int(min_points)
    while kmax * 2.0 * halfwidth / (n_points - 1) > MAX_K_DX and n_points < MAX_POINTS:
        n_points *= 2
    return halfwidth, n_points


def default_dt(spec):
    return min(spec.tf / 1e5, 0.002 / spec.omega0)


def eigenstate_grid(n, omega, spec, halfwidth=None, n_points=None, time=0.0, law=None):
    """GridState holding u_n at frequency ``omega`` on a symmetric grid.

    Missing ``halfwidth``/``n_points`` come from :func:`default_grid`.
    """
    hw, npts = default_grid(spec, n, law)
    halfwidth = hw if halfwidth is None else halfwidth
    n_points = npts if n_points is None else n_points
    x = make_grid(halfwidth, n_points)
    return GridState(-halfwidth, halfwidth, instantaneous_eigenstate(n, omega, spec, x), time)


def mode_grid(mode, t, like):
    """Expanding mode sampled on the grid of the GridState ``like``."""
    return GridState(like.x_min, like.x_max, expanding_mode_wavefunction(mode, t, like.x), t)


def overlap(a, b):
    """Inner product <a|b> by the trapezoid rule."""
    if not a.same_grid(b):
        raise GridMismatch("states live on different grids")
    return complex(np.trapezoid(np.conj(a.amplitudes) * b.amplitudes, dx=a.dx))


def fidelity(a, b):
    """|<a|b>|^2 for normalised states on the same grid."""
    return abs(overlap(a, b)) ** 2


def populations(psi, omega, n_max, spec):
    """Populations |<u_n(omega)|psi>|^2 for n = 0 .. n_max."""
    x = psi.x
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        u = GridState(psi.x_min, psi.x_max, instantaneous_eigenstate(n, omega, spec, x))
        out[n] = fidelity(u, psi)
    return out


def grid_energy(psi, omega_sq, spec):
    """<psi|H|psi>/<psi|psi> with a spectral kinetic term.

    The kinetic energy uses the exact Fourier derivative on the grid rather
    than the propagator's finite-difference Laplacian.
    """
    a = psi.amplitudes
    dx = psi.dx
    k = 2.0 * np.pi * np.fft.fftfreq(a.size, d=dx)
    ak = np.fft.fft(a)
    norm = np.sum(np.abs(a) ** 2) * dx
    kinetic = spec.hbar**2 / (2.0 * spec.mass) * np.sum(k * k * np.abs(ak) ** 2) * dx / a.size
    potential = 0.5 * spec.mass * omega_sq * np.sum(psi.x**2 * np.abs(a) ** 2) * dx
    return float((kinetic + potential) / norm)


def position_variance(psi):
    rho = np.abs(psi.amplitudes) ** 2
    x = psi.x
    norm = np.trapezoid(rho, dx=psi.dx)
    mean = np.trapezoid(x * rho, dx=psi.dx) / norm
    return float(np.trapezoid((x - mean) ** 2 * rho, dx=psi.dx) / norm)


# --------------------------------------------------------------------------
# Grid propagation
# --------------------------------------------------------------------------


def _stops(profile, t0, t1, times):
    edges = {t0, t1}
    edges.update(p.start for p in profile.pieces() if t0 < p.start < t1)
    edges.update(t for t in times if t0 < t < t1)
    return sorted(edges)


def _piece_at(profile, t_mid):
    for piece in profile.pieces():
        if piece.start <= t_mid <= piece.stop:
            return piece
    raise ValueError(f"time {t_mid} lies outside the profile")


def kinetic_band(spec, dx, h, order=STENCIL_ORDER):
    """Diagonals of 1 + i h K / (2 hbar) for the finite-difference kinetic matrix K."""
    weights = np.asarray(_kernels.LAPLACIAN_WEIGHTS[order])
    kinetic = -spec.hbar**2 / (2.0 * spec.mass * dx * dx) * weights
    band = 1j * h / (2.0 * spec.hbar) * kinetic
    band[0] += 1.0
    return band


def propagate_many(profile, psi0, spec, times=(), dt=None, t_end=None, order=STENCIL_ORDER):
    """Evolve ``psi0`` under H(t) = p^2/2m + m omega^2(t) x^2/2.

    The kinetic term is a central finite difference of the given order
    (Dirichlet walls at the grid ends), advanced by Crank-Nicolson; the
    potential enters as exact phase factors in a symmetric split, with
    omega^2 sampled at each step midpoint. Every step of the scheme is
    unitary and the sign of omega^2 plays no role. Steps never straddle a
    profile discontinuity or a requested snapshot time.

    Parameters
    ----------
    times : sequence of float
        Snapshot times within [psi0.time, t_end].
    dt : float, optional
        Largest step; defaults to ``default_dt(spec)``.

    Returns
    -------
    snapshots : list of GridState
        States at ``sorted(times)``.
    final : GridState
        State at ``t_end`` (default: the end of the profile).
    """
    dt = default_dt(spec) if dt is None else dt
    t_start = psi0.time
    t_end = profile.tf if t_end is None else t_end
    times = sorted(float(t) for t in times)
    if times and (times[0] < t_start or times[-1] > t_end):
        raise ValueError("snapshot times must lie within the propagation window")

    psi = np.array(psi0.amplitudes, dtype=np.complex128)
    dx = psi0.dx
    norm0 = psi0.norm()
    half = 0.5 * spec.mass / spec.hbar
    snapshots = [psi0.with_amplitudes(psi.copy(), t_start) for t in times if t == t_start]
    wanted = [t for t in times if t > t_start]

    stops = _stops(profile, t_start, t_end, wanted)
    factors = {}
    for a, b in zip(stops[:-1], stops[1:]):
        piece = _piece_at(profile, 0.5 * (a + b))
        n_steps = max(1, math.ceil((b - a) / dt * (1.0 - 1e-12)))
        h = (b - a) / n_steps
        key = round(h / dt, 12)
        if key not in factors:
            factors[key] = _kernels.band_lu(kinetic_band(spec, dx, h, order), psi.size)
        lower, upper = factors[key]
        mids = a + (np.arange(n_steps) + 0.5) * h
        wsq = np.ascontiguousarray(np.broadcast_to(piece.omega_sq(mids), mids.shape), dtype=float)
        failed = _kernels.split_steps(
            psi, psi0.x_min, dx, wsq, -0.5 * h * half, lower, upper, BOUNDARY_DENSITY
        )
        if failed:
            raise GridTooSmall(
                f"boundary density above {BOUNDARY_DENSITY:g} at t = {a + failed * h:.6g} s; "
                "widen the grid"
            )
        while wanted and wanted[0] <= b:
            snapshots.append(psi0.with_amplitudes(psi.copy(), wanted.pop(0)))

    final = psi0.with_amplitudes(psi, t_end)
    drift = abs(final.norm() - norm0) / norm0
    if drift > NORM_DRIFT_LIMIT:
        raise NormDrift(f"relative norm drift {drift:.3g} exceeds {NORM_DRIFT_LIMIT:g}")
    return snapshots, final


def propagate(profile, psi0, spec, dt=None, order=STENCIL_ORDER):
    """State at the end of ``profile``, evolved from ``psi0``."""
    return propagate_many(profile, psi0, spec, dt=dt, order=order)[1]
