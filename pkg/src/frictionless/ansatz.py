"""Inverse-engineering design of scaling laws b(t).

A law starts at b = 1 with vanishing first and second derivatives and ends at
b = gamma, again with both derivatives zero. Under these conditions any
eigenstate of the initial trap is carried onto the matching eigenstate of the
final trap.

All polynomials are handled in the reduced time s = t/tf. Coefficients are
stored in powers of s, which keeps the boundary-value system well conditioned
no matter how short tf is.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, optimize

from .errors import NoBracket, PositivityViolated, SingularSystem
from .model import ExpPolynomialLaw, PolynomialLaw

#: Relative tolerance of the adaptive quadrature used for phase integrals.
QUAD_RTOL = 1e-10
PHASE_SCAN_POINTS = 512


def _boundary_rows(degree, points=(0.0, 1.0)):
    """Rows of the linear map coeffs -> (p, p', p'') at both end points."""
    j = np.arange(degree + 1, dtype=float)
    rows = []
    for x in points:
        with np.errstate(divide="ignore", invalid="ignore"):
            # x**(j-k) for j >= k, exact zeros otherwise (also when x = 0)
            powers = [np.where(j >= k, float(x) ** np.maximum(j - k, 0), 0.0) for k in range(3)]
        rows += [powers[0], j * powers[1], j * (j - 1.0) * powers[2]]
    return np.array(rows)


# end points in the two bases: s in [0, 1] and u = s - 1 in [-1, 0]
_S_POINTS = (0.0, 1.0)
_U_POINTS = (-1.0, 0.0)


def _solve_quintic(start, stop, extra=None, points=_S_POINTS):
    """Quintic coefficients with value `start`/`stop` and flat ends.

    ``extra`` is a (coefficient, power) pair for one more monomial whose
    contribution is moved to the right-hand side. ``points`` are the two end
    points in the chosen variable.
    """
    rhs = np.array([start, 0.0, 0.0, stop, 0.0, 0.0])
    if extra is not None:
        c, k = extra
        rhs -= c * _boundary_rows(k, points)[:, k]
    try:
        coeffs = np.linalg.solve(_boundary_rows(5, points), rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - matrix is constant and regular
        raise SingularSystem(str(exc)) from exc
    # the conditions at the origin fix the three lowest coefficients outright
    origin = 0 if points[0] == 0.0 else 3
    coeffs[:3] = rhs[origin : origin + 3] * (1.0, 1.0, 0.5)
    return coeffs


def closed_form_quintic(gamma):
    """Coefficients of 1 + (gamma-1)(10 s^3 - 15 s^4 + 6 s^5)."""
    g = gamma - 1.0
    return np.array([1.0, 0.0, 0.0, 10.0 * g, -15.0 * g, 6.0 * g])


def closed_form_quintic_end(gamma):
    """The same law in powers of u = s - 1: gamma + (gamma-1)(10 u^3 + 15 u^4 + 6 u^5)."""
    g = gamma - 1.0
    return np.array([gamma, 0.0, 0.0, 10.0 * g, 15.0 * g, 6.0 * g])


def design_polynomial(spec):
    """Degree-5 polynomial law satisfying the six boundary conditions.

    The law also carries its expansion about s = 1 so that both ends are
    evaluated without cancellation.
    """
    coeffs = _solve_quintic(1.0, spec.gamma)
    end = _solve_quintic(1.0, spec.gamma, points=_U_POINTS)
    scale = max(1.0, abs(spec.gamma))
    for got, expected in ((coeffs, closed_form_quintic(spec.gamma)),
                          (end, closed_form_quintic_end(spec.gamma))):
        if not np.allclose(got, expected, rtol=1e-12, atol=1e-12 * scale):
            raise SingularSystem(f"boundary solve drifted from closed form: {got} vs {expected}")
    return PolynomialLaw(coeffs, spec.tf, end)


def design_exp_polynomial(spec):
    """b(t) = exp(p(s)) with p quintic, p(0) = 0 and p(1) = ln(gamma).

    Because p' vanishes at both ends, b'' = 0 there is equivalent to p'' = 0,
    so the exponent obeys the same six conditions as the plain polynomial.
    """
    target = math.log(spec.gamma)
    coeffs = _solve_quintic(0.0, target)
    end = _solve_quintic(0.0, target, points=_U_POINTS)
    return ExpPolynomialLaw(coeffs, spec.tf, end)


def phase_integral(law, tf=None):
    """Adaptive quadrature of the integral of 1/b(t)^2 over [0, tf]."""
    tf = law.tf if tf is None else tf
    value, _ = integrate.quad(
        lambda t: 1.0 / law.b(t) ** 2, 0.0, tf, epsabs=0.0, epsrel=QUAD_RTOL, limit=500
    )
    return value


def sextic_family(spec, c, end=False):
    """Degree-6 coefficients (in s, or in s - 1 if ``end``) for s^6 coefficient ``c``.

    Every member meets the six boundary conditions exactly. The leading
    coefficient is the same in both variables.
    """
    coeffs = np.empty(7)
    coeffs[:6] = _solve_quintic(1.0, spec.gamma, extra=(c, 6), points=_U_POINTS if end else _S_POINTS)
    coeffs[6] = c
    return coeffs


def _min_b(coeffs):
    s = np.linspace(0.0, 1.0, 10_001)
    return float(np.min(np.polynomial.polynomial.polyval(s, coeffs)))


def _reduced_phase(coeffs):
    """Integral of 1/b(s)^2 over s in [0, 1]; nan if b touches zero."""
    if _min_b(coeffs) <= 0.0:
        return math.nan
    value, _ = integrate.quad(
        lambda s: 1.0 / np.polynomial.polynomial.polyval(s, coeffs) ** 2,
        0.0,
        1.0,
        epsabs=0.0,
        epsrel=QUAD_RTOL,
        limit=500,
    )
    return value


def phase_search_range(spec):
    return 1e3 * spec.gamma


def design_phase_constrained(spec, tprime, return_extra=False):
    """Sextic law with prescribed phase integral (omegaf/omega0) * tprime.

    The s^6 coefficient is found by scanning [-R, R] for a sign change of the
    phase mismatch and polishing with Brent's method. When several brackets
    exist the root nearest zero (the least distorted law) is returned.
    """
    if not tprime > 0:
        raise ValueError("tprime must be positive")
    target = spec.omegaf / spec.omega0 * tprime / spec.tf

    def g(c):
        return _reduced_phase(sextic_family(spec, c)) - target

    R = phase_search_range(spec)
    grid = np.linspace(-R, R, PHASE_SCAN_POINTS)
    values = np.array([g(c) for c in grid])

    roots = []
    for i, (lo, hi) in enumerate(zip(values[:-1], values[1:])):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            continue
        if lo == 0.0:
            roots.append(grid[i])
        elif lo * hi < 0.0:
            roots.append(optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-12, rtol=1e-15))
    if np.isfinite(values[-1]) and values[-1] == 0.0:
        roots.append(grid[-1])
    if not roots:
        raise NoBracket(
            f"phase mismatch keeps one sign over [{-R:g}, {R:g}] for target integral "
            f"{target * spec.tf:.6g} s"
        )
    c = min(roots, key=abs)
    coeffs = sextic_family(spec, c)
    if _min_b(coeffs) <= 0.0:
        raise PositivityViolated(f"phase-constrained law with c = {c:g} reaches b <= 0")
    law = PolynomialLaw(coeffs, spec.tf, sextic_family(spec, c, end=True))
    return (law, c) if return_extra else law


def boundary_residuals(law, gamma):
    """Boundary-condition residuals, derivatives scaled by tf and tf^2."""
    tf = law.tf
    return np.array(
        [
            float(law.b(0.0)) - 1.0,
            float(law.bdot(0.0)) * tf,
            float(law.bddot(0.0)) * tf**2,
            float(law.b(tf)) - gamma,
            float(law.bdot(tf)) * tf,
            float(law.bddot(tf)) * tf**2,
        ]
    )
