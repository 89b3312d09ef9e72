"""Three-jump piecewise-constant frequency protocols.

The trap frequency jumps from omega0 to an imaginary value i*omegaI (an
expulsive barrier) for a time tau1, then to a real omega2 for tau2, and
finally to omegaf. Both segments have closed-form Ermakov solutions; the
durations follow from matching b and bdot at the switching time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DomainError, NoSolution
from .model import FrequencyProfile, Piece, ScalingLaw

SCAN_POINTS = 2048
MATCH_TOL = 1e-10


def segment1_b(omegaI, omega0, t):
    """b and bdot under constant omega^2 = -omegaI^2 from b = 1, bdot = 0."""
    if not omegaI > 0:
        raise ValueError("omegaI must be positive")
    t = np.asarray(t, dtype=float)
    A = (omega0**2 + omegaI**2) / omegaI**2
    sh = np.sinh(omegaI * t)
    b = np.sqrt(1.0 + A * sh * sh)
    bdot = A * omegaI * sh * np.cosh(omegaI * t) / b
    return b, bdot


def segment2_b(omega2, omega0, gamma, tf, t):
    """b and bdot under constant omega2^2 ending at b = gamma, bdot = 0 at tf."""
    if not omega2 > 0:
        raise ValueError("omega2 must be positive")
    u = omega2 * (np.asarray(t, dtype=float) - tf)
    D = omega0**2 / (omega2**2 * gamma**2) - gamma**2
    radicand = gamma**2 + D * np.sin(u) ** 2
    if np.any(radicand <= 0):
        raise DomainError("segment-2 radicand is not positive")
    b = np.sqrt(radicand)
    bdot = D * omega2 * np.sin(2.0 * u) / (2.0 * b)
    return b, bdot


def t_min(spec):
    """Shortest real-frequency bang-bang time, reached as omega1 -> 0, omega2 -> inf."""
    if spec.omegaf > spec.omega0:
        raise DomainError("minimal-time bound is defined for expansions only")
    return math.sqrt(1.0 - spec.omegaf / spec.omega0) / math.sqrt(spec.omegaf * spec.omega0)


@dataclass(frozen=True)
class BangBangPlan:
    """A solved three-jump protocol.

    ``candidates`` lists every (tau1, tf) root the solver found; the plan
    itself is the one with the smallest tf.
    """

    omegaI: float
    omega2: float
    tau1: float
    tau2: float
    gamma: float
    omega0: float
    residual: float = 0.0
    candidates: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.omegaI < 0 or self.omega2 <= 0 or self.tau1 <= 0 or self.tau2 <= 0:
            raise ValueError(f"invalid bang-bang plan {self}")

    @property
    def tf(self):
        return self.tau1 + self.tau2

    @property
    def omegaf(self):
        return self.omega0 / self.gamma**2

    def matching_residuals(self):
        b1, db1 = segment1_b(self.omegaI, self.omega0, self.tau1)
        b2, db2 = segment2_b(self.omega2, self.omega0, self.gamma, self.tf, self.tau1)
        return np.array([(b1 - b2) / self.gamma, (db1 - db2) / (self.gamma * self.omega0)])


def _segment2_phase(B, Bdot, omega2, omega0, gamma):
    """Smallest negative u = omega2 (tau1 - tf) reproducing (B, Bdot) on segment 2."""
    D = omega0**2 / (omega2**2 * gamma**2) - gamma**2
    if D == 0.0:
        return None
    sin_sq = (B * B - gamma**2) / D
    sin_2u = 2.0 * B * Bdot / (D * omega2)
    u = 0.5 * math.atan2(sin_2u, 1.0 - 2.0 * sin_sq)
    if u >= 0.0:
        u -= math.pi
    return u


def _polish(tau1, tf, omegaI, omega2, omega0, gamma, max_iter=50):
    """Damped Newton iteration on the two scaled matching conditions."""
    w0sq = omega0**2

    def F(x):
        b1, db1 = segment1_b(omegaI, omega0, x[0])
        b2, db2 = segment2_b(omega2, omega0, gamma, x[1], x[0])
        return np.array([(b1 - b2) / gamma, (db1 - db2) / (gamma * omega0)]), (b1, db1, b2, db2)

    x = np.array([tau1, tf], dtype=float)
    f, parts = F(x)
    for _ in range(max_iter):
        if np.max(np.abs(f)) <= 1e-14:
            break
        b1, db1, b2, db2 = (float(p) for p in parts)
        ddb1 = w0sq / b1**3 + omegaI**2 * b1
        ddb2 = w0sq / b2**3 - omega2**2 * b2
        J = np.array(
            [
                [(db1 - db2) / gamma, db2 / gamma],
                [(ddb1 - ddb2) / (gamma * omega0), ddb2 / (gamma * omega0)],
            ]
        )
        try:
            step = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            break
        norm0 = np.linalg.norm(f)
        lam = 1.0
        while lam > 1e-6:
            x_new = x + lam * step
            if x_new[0] > 0 and x_new[1] > x_new[0]:
                f_new, parts_new = F(x_new)
                if np.linalg.norm(f_new) < norm0:
                    break
            lam *= 0.5
        else:
            break
        x, f, parts = x_new, f_new, parts_new
    return x, float(np.max(np.abs(f)))


def matching_candidates(omegaI, omega2, spec, branches=3):
    """All (tau1, tf, residual) roots found by the scan, sorted by tf."""
    if not (omegaI > 0 and omega2 > 0):
        raise ValueError("omegaI and omega2 must be positive")
    omega0, gamma = spec.omega0, spec.gamma
    # segment 2 conserves bdot^2 + omega2^2 b^2 + omega0^2/b^2; fix it from the end state
    target = omega2**2 * gamma**2 + omega0**2 / gamma**2

    def reduced(tau):
        b, db = segment1_b(omegaI, omega0, tau)
        return (db * db + omega2**2 * b * b + omega0**2 / (b * b)) / target - 1.0

    taus = np.geomspace(1e-6 / omegaI, 10.0 / omegaI, SCAN_POINTS)
    values = reduced(taus)
    found = []
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]:
        if values[i] == 0.0:
            tau = taus[i]
        elif values[i + 1] == 0.0:
            continue
        else:
            tau = optimize.brentq(reduced, taus[i], taus[i + 1], xtol=1e-15, rtol=1e-15)
        B, Bdot = (float(v) for v in segment1_b(omegaI, omega0, tau))
        u = _segment2_phase(B, Bdot, omega2, omega0, gamma)
        if u is None:
            continue
        for k in range(branches):
            tf = tau - (u - k * math.pi) / omega2
            x, res = _polish(tau, tf, omegaI, omega2, omega0, gamma)
            if res <= MATCH_TOL and 0 < x[0] < x[1]:
                found.append((float(x[0]), float(x[1]), res))
    found.sort(key=lambda r: r[1])
    return found


def solve_matching(omegaI, omega2, spec):
    """Solve the matching conditions for the switching time and total time.

    Returns the plan with the smallest positive tf; all roots found are kept
    in ``plan.candidates``.
    """
    found = matching_candidates(omegaI, omega2, spec)
    if not found:
        raise NoSolution(
            f"no matching root for omegaI = {omegaI:g}, omega2 = {omega2:g} rad/s "
            f"on the scan grid (0, {10.0 / omegaI:.4g}] s"
        )
    tau1, tf, res = found[0]
    return BangBangPlan(
        omegaI=float(omegaI),
        omega2=float(omega2),
        tau1=tau1,
        tau2=tf - tau1,
        gamma=spec.gamma,
        omega0=spec.omega0,
        residual=res,
        candidates=tuple(found),
    )


@dataclass(frozen=True)
class BangBangProfile(FrequencyProfile):
    """omega^2(t) of a plan: omega0^2 at t = 0, -omegaI^2, then omega2^2, omegaf^2 at tf."""

    plan: BangBangPlan

    @property
    def tf(self):
        return self.plan.tf

    @property
    def omega0(self):
        return self.plan.omega0

    @property
    def omegaf(self):
        return self.plan.omegaf

    def omega_sq(self, t):
        p = self.plan
        t = np.asarray(t, dtype=float)
        out = np.where(t < p.tau1, -p.omegaI**2, p.omega2**2)
        out = np.where(t == 0.0, p.omega0**2, out)
        out = np.where(t == p.tf, p.omegaf**2, out)
        return out

    def pieces(self):
        p = self.plan
        first, second = -p.omegaI**2, p.omega2**2
        return [
            Piece(0.0, p.tau1, lambda t: np.full_like(np.asarray(t, dtype=float), first)),
            Piece(p.tau1, p.tf, lambda t: np.full_like(np.asarray(t, dtype=float), second)),
        ]


def bangbang_profile(plan, spec=None):
    return BangBangProfile(plan)


@dataclass(frozen=True, eq=False)
class BangBangLaw(ScalingLaw):
    """Piecewise closed-form b(t) of a solved plan."""

    plan: BangBangPlan

    @property
    def tf(self):
        return self.plan.tf

    def _split(self, t):
        p = self.plan
        t = np.asarray(t, dtype=float)
        first = t < p.tau1
        b1, db1 = segment1_b(p.omegaI, p.omega0, np.where(first, t, 0.0))
        b2, db2 = segment2_b(p.omega2, p.omega0, p.gamma, p.tf, np.where(first, p.tf, t))
        return first, np.where(first, b1, b2), np.where(first, db1, db2)

    def b(self, t):
        return self._split(t)[1]

    def bdot(self, t):
        return self._split(t)[2]

    def bddot(self, t):
        p = self.plan
        first, b, _ = self._split(t)
        wsq = np.where(first, -p.omegaI**2, p.omega2**2)
        return p.omega0**2 / b**3 - wsq * b
