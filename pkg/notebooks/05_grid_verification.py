# %% [markdown]
# # Checking a design on a grid
#
# The engineered trajectory is exact for the Ermakov equation. Here the
# Schrodinger equation itself is integrated on a grid and compared against
# the expanding mode. This takes a few tens of seconds.

# %%
import time

import numpy as np

from frictionless import (
    ExpandingMode,
    design_polynomial,
    eigenstate_grid,
    fidelity,
    grid_energy,
    hz_to_angular,
    inverse_frequency,
    make_spec,
    mode_energy,
    populations,
    propagate_many,
)
from frictionless.dynamics import mode_grid
from _plotting import plt, save

omega0, omegaf = hz_to_angular(250.0), hz_to_angular(2.5)
spec = make_spec(omega0, omegaf, 2e-3)
law = design_polynomial(spec)
profile = inverse_frequency(law, omega0)

# %%
n = 1
mode = ExpandingMode(n, law, spec)
psi0 = eigenstate_grid(n, omega0, spec, law=law)
print(f"grid: {psi0.x.size} points over +-{psi0.x[-1] / spec.length_scale:.0f} length units")
times = np.linspace(0.0, spec.tf, 22)[1:-1]
start = time.perf_counter()
snapshots, final = propagate_many(profile, psi0, spec, times=times)
print(f"propagated in {time.perf_counter() - start:.1f} s")

# %% [markdown]
# After 2 ms the state sits in the n-th level of the 2.5 Hz trap.

# %%
p = populations(final, omegaf, 3, spec)
print("populations of the final trap:", np.round(p, 9))
print("fidelity with the expanding mode:", fidelity(final, mode_grid(mode, spec.tf, final)))
print("energy / (hbar omega_f):", grid_energy(final, omegaf**2, spec) / omegaf)

# %%
ratio = [grid_energy(s, float(profile.omega_sq(s.time)), spec) / mode_energy(mode, profile, s.time)
         for s in snapshots]
print("largest energy mismatch along the way:", np.max(np.abs(np.array(ratio) - 1)))

# %%
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in snapshots[::5] + [final]:
        ax.plot(s.x / spec.length_scale, np.abs(s.amplitudes) ** 2 * spec.length_scale,
                label=f"{s.time * 1e3:.2f} ms")
    ax.set(xlabel="x / l0", ylabel="density", xlim=(-40, 40))
    ax.legend()
    save(fig, "grid_verification.png")
