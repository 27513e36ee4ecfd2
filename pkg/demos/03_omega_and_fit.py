# Entropy grows like a + b ln N, and the system moves away from its maximum
# entropy as N grows (Landsberg order parameter).
import numpy as np

from becentropy import TrapSpec, fit_sweep, run_sweep

sweep = run_sweep(TrapSpec(1))
fit = fit_sweep(sweep)
print(f"S = {fit.intercept:.4f} + {fit.slope:.5f} ln N   (rms {fit.rms_residual:.4f})")

n = np.array(sweep.n_values, dtype=float)
for ni, s, omega in zip(n, sweep.column("s_total"), sweep.column("omega")):
    print(f"N={ni:>9.0f}  S={s:.4f}  fit={fit(ni):.4f}  Omega={omega:.5f}")

# order grows monotonically with N
print("Omega increasing:", bool(np.all(np.diff(sweep.column("omega")) > 0)))

# the fit extrapolates, the physics may not
print("fit at N=1e7:", fit(1e7))
