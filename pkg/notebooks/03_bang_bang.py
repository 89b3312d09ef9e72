# %% [markdown]
# # Three-jump protocol
#
# Hold omega_I for tau1, then omega_2 for tau2, then jump to omega_f. With
# omega_I = 0.9 omega0 and omega_2 = omega0 the matching conditions have a
# solution near 2.09 ms, well under the time-minimal bound for real
# frequencies.

# %%
import numpy as np

from frictionless import (
    BangBangLaw,
    bangbang_profile,
    ermakov_forward,
    hz_to_angular,
    make_spec,
    solve_matching,
    t_min,
)
from frictionless.bangbang import matching_candidates
from _plotting import plt, save

omega0, omegaf = hz_to_angular(250.0), hz_to_angular(2.5)
spec = make_spec(omega0, omegaf, 2e-3)

print(f"t_min = {t_min(spec) * 1e3:.4f} ms")
plan = solve_matching(0.9 * omega0, omega0, spec)
print(f"tau1 = {plan.tau1 * 1e3:.4f} ms  tau2 = {plan.tau2 * 1e3:.4f} ms  tf = {plan.tf * 1e3:.4f} ms")
print("matching residuals:", plan.matching_residuals())

# %% [markdown]
# The tau2 equation is periodic, so later branches exist too.

# %%
for tau1, tf, res in matching_candidates(0.9 * omega0, omega0, spec):
    print(f"  tau1 = {tau1 * 1e3:.4f} ms  tf = {tf * 1e3:.4f} ms  residual {res:.1e}")

# %% [markdown]
# Replaying the piecewise frequency through the ODE lands on b = 10 at rest.

# %%
t = np.linspace(0.0, plan.tf, 2001)
numeric = ermakov_forward(bangbang_profile(plan, spec), 1.0, 0.0, omega0, t)
law = BangBangLaw(plan)
print("max relative deviation:", np.max(np.abs(numeric.b_samples / law.b(t) - 1)))
print("final b, bdot:", numeric.b_samples[-1], numeric.bdot_samples[-1])

# %%
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t * 1e3, law.b(t), label="analytic")
    ax.plot(t[::100] * 1e3, numeric.b_samples[::100], "o", label="ODE")
    ax.set(xlabel="t [ms]", ylabel="b")
    ax.legend()
    save(fig, "bang_bang.png")
