"""The Ermakov equation  b'' + omega(t)^2 b = omega0^2 / b^3  in both directions.

``inverse_frequency`` reads the trap frequency off a prescribed b(t);
``ermakov_forward`` integrates b(t) for a prescribed omega^2(t).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BlowUp, NegativeFrequencyRegion, StepUnderflow
from .model import InverseEngineeredProfile, NumericLaw

B_WINDOW = (1e-9, 1e9)


def inverse_frequency(law, omega0):
    """Frequency profile that makes ``law`` a solution of the Ermakov equation."""
    return InverseEngineeredProfile(law, omega0)


def _ermakov_rhs(omega_sq, omega0):
    w0sq = omega0 * omega0

    def rhs(t, y):
        b, bdot = y
        return [bdot, w0sq / b**3 - omega_sq(t) * b]

    return rhs


def _leave_low(t, y):
    return y[0] - B_WINDOW[0]


def _leave_high(t, y):
    return y[0] - B_WINDOW[1]


_leave_low.terminal = True
_leave_high.terminal = True


def ermakov_forward(profile, b0, bdot0, omega0, t_span, tol=1e-10, method="DOP853"):
    """Integrate the Ermakov equation and tabulate b on ``t_span``.

    Parameters
    ----------
    profile : FrequencyProfile
        Supplies omega^2(t). Discontinuities listed by ``profile.pieces()``
        are never stepped across.
    b0, bdot0 : float
        State at ``t_span[0]``. ``t_span`` may run backwards in time.
    omega0 : float
        Constant on the right-hand side of the Ermakov equation.
    t_span : array_like
        Strictly monotonic output times.
    tol : float
        Relative tolerance of the adaptive Runge-Kutta integrator; the
        absolute tolerance is scaled from it.

    Returns
    -------
    NumericLaw
        Samples of b, bdot and bddot (the last from the equation itself),
        sorted in increasing time.
    """
    if not b0 > 0:
        raise ValueError("b0 must be positive")
    if not 0 < tol <= 1e-4:
        raise ValueError("tol must lie in (0, 1e-4]")
    t_span = np.asarray(t_span, dtype=float)
    steps = np.diff(t_span)
    if t_span.size < 2 or not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("t_span must be strictly monotonic with at least two points")
    forward = steps[0] > 0

    pieces = profile.pieces()
    if not forward:
        pieces = pieces[::-1]
    t_start, t_end = t_span[0], t_span[-1]

    b_out = np.empty_like(t_span)
    db_out = np.empty_like(t_span)
    ddb_out = np.empty_like(t_span)
    y = np.array([b0, bdot0], dtype=float)
    t_now = t_start

    for piece in pieces:
        lo, hi = (piece.start, piece.stop) if forward else (piece.stop, piece.start)
        # skip pieces entirely before the start or after the end
        if forward and (hi <= t_now or lo >= t_end):
            continue
        if not forward and (hi >= t_now or lo <= t_end):
            continue
        seg_stop = min(hi, t_end) if forward else max(hi, t_end)
        mask = (t_span >= t_now) & (t_span <= seg_stop) if forward else (
            (t_span <= t_now) & (t_span >= seg_stop)
        )
        if seg_stop == t_now:
            continue
        rhs = _ermakov_rhs(piece.omega_sq, omega0)
        atol = tol * max(1.0, abs(y[0])) * np.array([1.0, abs(omega0)])
        sol = solve_ivp(
            rhs,
            (t_now, seg_stop),
            y,
            method=method,
            rtol=tol,
            atol=atol,
            dense_output=True,
            events=(_leave_low, _leave_high),
        )
        if sol.status == 1:
            raise BlowUp(f"b left {B_WINDOW} at t = {sol.t[-1]:.6g} s")
        if sol.status != 0:
            raise StepUnderflow(sol.message)
        idx = np.nonzero(mask)[0]
        if idx.size:
            yy = sol.sol(t_span[idx])
            b_out[idx] = yy[0]
            db_out[idx] = yy[1]
            ddb_out[idx] = omega0**2 / yy[0] ** 3 - piece.omega_sq(t_span[idx]) * yy[0]
        y = sol.y[:, -1]
        t_now = seg_stop
        if t_now == t_end:
            break
    else:
        if t_now != t_end:
            raise ValueError("t_span extends beyond the profile's time range")

    if np.any(b_out <= B_WINDOW[0]) or np.any(b_out >= B_WINDOW[1]):
        raise BlowUp("b left the admissible window")
    if not forward:
        return NumericLaw(t_span[::-1], b_out[::-1], db_out[::-1], ddb_out[::-1])
    return NumericLaw(t_span, b_out, db_out, ddb_out)


def ermakov_final_state(profile, omega0, b0=1.0, bdot0=0.0, tol=1e-10):
    """(b, bdot) at the end of the profile, starting from (b0, bdot0) at t = 0."""
    law = ermakov_forward(profile, b0, bdot0, omega0, [0.0, profile.tf], tol=tol)
    return float(law.b_samples[-1]), float(law.bdot_samples[-1])


def _omega_dot_numeric(profile, t):
    # 5-point central difference, step tf/1e6; one-sided 5-point stencils within 2h of an end
    h = profile.tf * 1e-6
    t = np.asarray(t, dtype=float)

    def omega(x):
        return np.sqrt(profile.omega_sq(x))

    out = (omega(t - 2 * h) - 8 * omega(t - h) + 8 * omega(t + h) - omega(t + 2 * h)) / (12 * h)
    for mask, sign in ((t < 2 * h, 1.0), (t > profile.tf - 2 * h, -1.0)):
        if np.any(mask):
            x = t[mask]
            f = [omega(x + sign * k * h) for k in range(5)]
            out[mask] = sign * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    return out


def adiabaticity_margin(profile, n_samples=10_001):
    """Largest value of |sqrt(2) omega_dot / (8 omega^2)| over the profile.

    Raises :class:`NegativeFrequencyRegion` if omega^2 <= 0 at any sample,
    since the adiabaticity criterion is undefined there.
    """
    t = np.linspace(0.0, profile.tf, n_samples)
    wsq = np.asarray(profile.omega_sq(t), dtype=float)
    if np.any(wsq <= 0):
        i = int(np.argmin(wsq))
        raise NegativeFrequencyRegion(f"omega^2 = {wsq[i]:.6g} at t = {t[i]:.6g} s")
    wdot = profile.omega_dot(t)
    if wdot is None:
        wdot = _omega_dot_numeric(profile, t)
    return float(np.max(np.abs(math.sqrt(2.0) * np.asarray(wdot) / (8.0 * wsq))))
