# %% [markdown]
# # Small Gaussian: dispersive tail against direct simulation
#
# A small bump q0 = 0.1 exp(-x^2) sheds a weak soliton and a dispersive wave
# train.  For 0 < x/t < 2 the tail is described by the t^(-1/2) stationary-phase
# term.  We evolve the PDE to t = 100 and compare pointwise.  Takes a minute or two.

# %%
import numpy as np

from ch_ist.asymptotics import evaluate
from ch_ist.pde_oracle import GridSpec, evolve
from ch_ist.scattering import InitialDatum, scatter

eps = 0.1
q0 = lambda x: eps * np.exp(-x * x)
grid_z = np.concatenate([-np.linspace(0.025, 8, 320)[::-1], np.linspace(0.025, 8, 320)])
spec = scatter(InitialDatum.from_function(q0, L=20.0), grid_z)
print("poles:", [(round(p.a, 5), round(p.gamma, 5)) for p in spec.poles])
print(f"sup |r| = {np.max(np.abs(spec.r)):.4f}")

# %%
t, x0 = 100.0, -150.0
grid = GridSpec(204.8, 4096, 0.05)
traj = evolve(q0(grid.x - x0), grid, t)
xs = np.arange(-10.0, 100.0, 0.5)
num = np.interp(xs + x0, grid.x, traj.states[-1])
res = [evaluate(spec, x, t) for x in xs]
approx = np.array([r.q_total for r in res])

# %%
print(f"{'x':>7} {'pde':>10} {'asymptotic':>11} {'case':>5}")
for x, a, b, r in list(zip(xs, num, approx, res))[::12]:
    print(f"{x:7.1f} {a:10.5f} {b:11.5f} {r.case.value:>5}")
for lo, hi in [(-10, 0), (0, 20), (20, 60), (60, 100)]:
    s = (xs >= lo) & (xs < hi)
    print(f"x in [{lo}, {hi}): max diff {np.max(np.abs(approx - num)[s]):.2e}, max |q| {np.max(np.abs(num[s])):.2e}")
