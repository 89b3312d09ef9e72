# %% [markdown]
# # Reference ramps
#
# Without inverse engineering, a ramp has to be slow to avoid heating. Two
# baselines: omega falling linearly, and the "uniform" ramp whose
# adiabaticity parameter |d omega/dt| / omega^2 stays constant.

# %%
import numpy as np

from frictionless import adiabaticity_margin, hz_to_angular, linear_ramp, make_spec, uniform_ramp
from frictionless.cli import reference_point
from _plotting import plt, save

omega0, omegaf = hz_to_angular(250.0), hz_to_angular(2.5)

# %% [markdown]
# The margin max |d omega/dt| / omega^2 reaches 1 at about 1.11 s for the
# linear ramp and 11.1 ms for the uniform one.

# %%
for tf in (1.114, 11.14e-3):
    spec = make_spec(omega0, omegaf, tf)
    print(f"tf = {tf:g} s  linear {adiabaticity_margin(linear_ramp(spec)):.4f}"
          f"  uniform {adiabaticity_margin(uniform_ramp(spec)):.4f}")

# %% [markdown]
# Final ground-state energy relative to hbar omega_f / 2, from the Ermakov
# equation. The uniform ramp oscillates before settling, while the linear
# ramp decays slowly.

# %%
curves = {}
for ramp, grid in (("linear", np.linspace(1.0, 20.0, 12)), ("uniform", np.linspace(0.02, 0.5, 40))):
    excess = [reference_point(ramp, make_spec(omega0, omegaf, tf))[1] for tf in grid]
    curves[ramp] = (grid, np.array(excess))
    for tf, e in zip(grid[::4], excess[::4]):
        print(f"{ramp:8s} tf = {tf:8.4f} s  excess {100 * e:8.3f} %")

# %%
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, (ramp, (grid, excess)) in zip(axes, curves.items()):
        ax.semilogy(grid, excess)
        ax.axhline(0.01, color="k", lw=0.5)
        ax.set(title=ramp, xlabel="tf [s]", ylabel="relative excess energy")
    save(fig, "reference_ramps.png")
