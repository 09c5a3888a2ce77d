# %% [markdown]
# # How fast does the soliton-only approximation lose accuracy?
#
# Soliton (a = 1/4) plus a small Gaussian, evolved directly to t = 200.  Behind
# the soliton the error of the pure one-soliton approximation is dominated by
# the dispersive t^(-1/2) tail, so the log-log slope should be near -1/2.
# Runs for several minutes.

# %%
import numpy as np

from ch_ist.verification import decay_experiment

ex = decay_experiment()
print("poles:", [(round(p.a, 6), round(p.gamma, 6)) for p in ex.spec.poles])
for t, e in zip(ex.times, ex.errors):
    print(f"t = {t:5.0f}  sup error {e:.3e}  error * sqrt(t) {e * np.sqrt(t):.4f}")
print(f"fitted slope {ex.slope:.3f}")
print(f"soliton-region error at t = 100: {ex.soliton_region_error:.2e}  (t * error = {100 * ex.soliton_region_error:.3f})")
print(f"mass / energy drift of the run: {ex.drift[0]:.1e} / {ex.drift[1]:.1e}")
