"""Compiled inner loops of the grid propagator.

One time step is the symmetric product

    exp(-i V h / 2 hbar) * C * exp(-i V h / 2 hbar)

with C = (1 + i h K / 2 hbar)^-1 (1 - i h K / 2 hbar) the Crank-Nicolson
(Cayley) factor of a banded finite-difference kinetic matrix K. Adjacent
potential half-steps are merged. C is applied as 2 (1 + i a K)^-1 - 1, so
each step costs one banded forward/back substitution against an LU
factorisation computed once per constant step size.
"""

import cmath

import numba
import numpy as np

# central-difference weights for the second derivative, offsets 0, 1, 2, ...
LAPLACIAN_WEIGHTS = {
    2: (-2.0, 1.0),
    4: (-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0),
    6: (-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0),
    8: (-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0),
}

_CHIRP_RESYNC = 64


@numba.njit(cache=True)
def band_lu(band, n):
    """LU factors (no pivoting) of the symmetric Toeplitz band matrix.

    ``band[d]`` is the entry on the d-th super/sub-diagonal. The matrices
    used here are 1 + i*(real symmetric), whose Hermitian part is the
    identity, so elimination without pivoting is safe.
    """
    kl = band.size - 1
    lower = np.zeros((n, kl), dtype=np.complex128)
    upper = np.zeros((n, kl + 1), dtype=np.complex128)
    row = np.empty(2 * kl + 1, dtype=np.complex128)
    for i in range(n):
        for d in range(-kl, kl + 1):
            j = i + d
            row[d + kl] = band[abs(d)] if 0 <= j < n else 0.0
        for k in range(kl):
            j = i - kl + k
            if j < 0:
                continue
            m = row[j - i + kl] / upper[j, 0]
            lower[i, k] = m
            for q in range(kl + 1):
                col = j + q - i + kl
                if col <= 2 * kl and j + q < n:
                    row[col] -= m * upper[j, q]
        for q in range(kl + 1):
            upper[i, q] = row[kl + q]
    return lower, upper


@numba.njit(cache=True, fastmath=True)
def chirp_mul(psi, x0, dx, theta):
    """psi[i] *= exp(1j * theta * x_i**2) on the grid x_i = x0 + i dx."""
    n = psi.size
    z = 1.0 + 0.0j
    g = 1.0 + 0.0j
    gg = cmath.exp(2j * theta * dx * dx)
    for i in range(n):
        if i % _CHIRP_RESYNC == 0:
            xi = x0 + i * dx
            z = cmath.exp(1j * theta * xi * xi)
            g = cmath.exp(1j * theta * (2.0 * xi * dx + dx * dx))
        psi[i] *= z
        z *= g
        g *= gg


@numba.njit(cache=True, fastmath=True)
def _chirp_ri(pr, pi, x0, dx, theta):
    # same recurrence as chirp_mul on separate real/imaginary arrays
    n = pr.size
    z = 1.0 + 0.0j
    g = 1.0 + 0.0j
    gg = cmath.exp(2j * theta * dx * dx)
    for i in range(n):
        if i % _CHIRP_RESYNC == 0:
            xi = x0 + i * dx
            z = cmath.exp(1j * theta * xi * xi)
            g = cmath.exp(1j * theta * (2.0 * xi * dx + dx * dx))
        a = pr[i]
        b = pi[i]
        pr[i] = a * z.real - b * z.imag
        pi[i] = a * z.imag + b * z.real
        z *= g
        g *= gg


@numba.njit(cache=True, fastmath=True)
def split_steps(psi, x0, dx, omega_sq_mid, phase_coef, lower, upper, edge_limit):
    """Advance ``psi`` in place by ``omega_sq_mid.size`` steps.

    ``phase_coef * omega_sq`` is the potential half-step phase per unit x^2.
    Returns 0 on success, or the 1-based index of the first step after
    which the density at either grid end exceeded ``edge_limit``.
    """
    n = psi.size
    kl = lower.shape[1]
    nsteps = omega_sq_mid.size
    # real/imaginary parts in separate arrays vectorise far better
    lr = np.ascontiguousarray(lower.real)
    li = np.ascontiguousarray(lower.imag)
    ur = np.ascontiguousarray(upper.real)
    ui = np.ascontiguousarray(upper.imag)
    inv = 1.0 / upper[:, 0]
    ir = inv.real.copy()
    ii = inv.imag.copy()
    pr = psi.real.copy()
    pi = psi.imag.copy()
    rr = np.zeros(n)
    ri = np.zeros(n)
    status = 0
    _chirp_ri(pr, pi, x0, dx, phase_coef * omega_sq_mid[0])
    for s in range(nsteps):
        # forward substitution on 2 psi
        for i in range(n):
            ar = 2.0 * pr[i]
            ai = 2.0 * pi[i]
            for k in range(max(0, kl - i), kl):
                j = i - kl + k
                ar -= lr[i, k] * rr[j] - li[i, k] * ri[j]
                ai -= lr[i, k] * ri[j] + li[i, k] * rr[j]
            rr[i] = ar
            ri[i] = ai
        # back substitution, then psi <- solution - psi
        for i in range(n - 1, -1, -1):
            ar = rr[i]
            ai = ri[i]
            for q in range(1, min(kl, n - 1 - i) + 1):
                j = i + q
                ar -= ur[i, q] * rr[j] - ui[i, q] * ri[j]
                ai -= ur[i, q] * ri[j] + ui[i, q] * rr[j]
            xr = ar * ir[i] - ai * ii[i]
            xi = ar * ii[i] + ai * ir[i]
            rr[i] = xr
            ri[i] = xi
            pr[i] = xr - pr[i]
            pi[i] = xi - pi[i]
        if s + 1 < nsteps:
            _chirp_ri(pr, pi, x0, dx, phase_coef * (omega_sq_mid[s] + omega_sq_mid[s + 1]))
        else:
            _chirp_ri(pr, pi, x0, dx, phase_coef * omega_sq_mid[s])
        edge = max(pr[0] ** 2 + pi[0] ** 2, pr[n - 1] ** 2 + pi[n - 1] ** 2)
        if edge > edge_limit:
            status = s + 1
            break
    for i in range(n):
        psi[i] = complex(pr[i], pi[i])
    return status
