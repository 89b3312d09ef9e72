# %% [markdown]
# # Designed scaling laws
#
# A 250 Hz trap is opened to 2.5 Hz. Fixing b(0) = 1 and b(tf) = 10 with
# vanishing first and second derivatives at both ends pins a quintic in
# s = t/tf. The trap frequency then follows from the Ermakov equation,
# omega^2 = omega0^2/b^4 - bddot/b.

# %%
import numpy as np

from frictionless import (
    boundary_residuals,
    design_exp_polynomial,
    design_phase_constrained,
    design_polynomial,
    hz_to_angular,
    inverse_frequency,
    make_spec,
    phase_integral,
)
from _plotting import plt, save

omega0, omegaf = hz_to_angular(250.0), hz_to_angular(2.5)
spec = make_spec(omega0, omegaf, 6e-3)
print("gamma =", spec.gamma)

# %% [markdown]
# The quintic coefficients are 1, 0, 0, 10(g-1), -15(g-1), 6(g-1) with g = 10.

# %%
quintic = design_polynomial(spec)
print("quintic coefficients:", quintic.coeffs)
print("boundary residuals:", boundary_residuals(quintic, spec.gamma))

# %% [markdown]
# Two other families share the same boundary data. The exponential form
# b = exp(p(s)) keeps b positive by construction; the sextic carries a free
# coefficient, chosen so that the phase integral of 1/b^2 hits a target.
# The target is passed as a time tprime measured in the final trap, so the
# integral itself is (omegaf/omega0) tprime. Here it is 20% above the quintic.

# %%
tprime = 1.2 * phase_integral(quintic) * omega0 / omegaf
laws = {
    "poly": quintic,
    "exppoly": design_exp_polynomial(spec),
    "phase": design_phase_constrained(spec, tprime),
}
t = np.linspace(0.0, spec.tf, 1001)
for name, law in laws.items():
    w2 = inverse_frequency(law, omega0).omega_sq(t)
    print(f"{name:8s} min omega^2 = {w2.min():12.4g}  max b = {law.b(t).max():.4f}")

# %% [markdown]
# At 6 ms the quintic needs an expulsive (omega^2 < 0) stretch in the middle.
# Longer durations remove it.

# %%
for tf_ms in (2, 6, 10, 15, 25):
    s = spec.with_tf(tf_ms * 1e-3)
    w2 = inverse_frequency(design_polynomial(s), omega0).omega_sq(np.linspace(0, s.tf, 4001))
    print(f"tf = {tf_ms:2d} ms  min omega^2 = {w2.min():.4g} rad^2/s^2")

# %%
if plt is not None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for name, law in laws.items():
        ax1.plot(t * 1e3, law.b(t), label=name)
        ax2.plot(t * 1e3, inverse_frequency(law, omega0).omega_sq(t) / omega0**2, label=name)
    ax1.set(xlabel="t [ms]", ylabel="b")
    ax2.set(xlabel="t [ms]", ylabel=r"$\omega^2/\omega_0^2$")
    ax2.axhline(0, color="k", lw=0.5)
    ax1.legend()
    save(fig, "designed_trajectories.png")
