# %% [markdown]
# # Round trip through the Ermakov equation
#
# Feeding the engineered omega^2(t) back into the Ermakov equation from
# b = 1, bdot = 0 should return the designed law.

# %%
import numpy as np

from frictionless import design_polynomial, ermakov_forward, hz_to_angular, inverse_frequency, make_spec
from _plotting import plt, save

omega0, omegaf = hz_to_angular(250.0), hz_to_angular(2.5)

errors = {}
for tf_ms in (2, 6, 10, 15, 25):
    spec = make_spec(omega0, omegaf, tf_ms * 1e-3)
    law = design_polynomial(spec)
    t = np.linspace(0.0, spec.tf, 1000)
    numeric = ermakov_forward(inverse_frequency(law, omega0), 1.0, 0.0, omega0, t)
    errors[tf_ms] = np.abs(numeric.b_samples / law.b(t) - 1)
    print(f"tf = {tf_ms:2d} ms  max relative error {errors[tf_ms].max():.2e}")

# %% [markdown]
# The integrator tolerance is 1e-10, so errors of a few 1e-9 are expected
# for the shortest, most violent protocols.

# %%
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for tf_ms, err in errors.items():
        ax.semilogy(np.linspace(0, 1, err.size), err + 1e-18, label=f"{tf_ms} ms")
    ax.set(xlabel="t / tf", ylabel="|b_num / b - 1|")
    ax.legend()
    save(fig, "ermakov_round_trip.png")
