# %% [markdown]
# # Rays, stationary points and where the phase decays
#
# A ray x ~ xi t is sorted into one of four sectors by how many real
# stationary points the phase has.  This script prints the bookkeeping for a
# few rays and an ASCII chart of sign Re(i theta) in the upper half plane.

# %%
import numpy as np

from ch_ist import phase
from ch_ist.scattering import SpectralData

for xi in (-1.0, -0.1, 1.0, 3.0):
    info = phase.stationary_points(xi)
    pts = ", ".join(f"{k}: {v:+.6f}" for k, v in sorted(info.points.items()))
    print(f"xi = {xi:+.2f}  case {info.case.value:>3}  n = {info.n_xi}  points [{pts}]  kappa0 = {info.kappa0}")

# %% [markdown]
# z0 and z1 merge at xi = -1/4, which is where the two outer points disappear.

# %%
for eps in (1e-2, 1e-4, 1e-6):
    z0, z1 = phase.closed_form_points(-0.25 + eps)
    print(f"xi = -1/4 + {eps:.0e}:  z1 - z0 = {(z1 - z0).real:.3e}")

# %% [markdown]
# Sign chart for xi = -0.1: '+' where Re(i theta) > 0, '-' where it is negative.
# The row at the bottom is just above the real axis.

# %%
xi = -0.1
for v in np.linspace(1.0, 0.05, 12):
    row = "".join("+" if phase.sign_re_i_theta(complex(u, v), xi) > 0 else "-" for u in np.linspace(-2, 2, 61))
    print(f"{v:5.2f} {row}")

# %% [markdown]
# With a spectrum attached, the ray also picks the pole (if any) whose soliton it
# follows.  An a = 1/4 soliton moves with speed 2 / (1 - 4a^2) = 8/3.

# %%
spec = SpectralData([(0.1, 1.0), (0.25, 1.0)])
for xi in (1.0, 2.2, 8 / 3, 3.5):
    info = phase.with_spectrum(phase.stationary_points(xi), spec)
    print(f"xi = {xi:.3f}  rho = {info.rho:.4f}  retained pole index = {info.j0}")
