# Sweep the particle number for 87Rb (a = 52.9 A) in a trap of length 12180 A
# and print the entropy table.
import time

from becentropy import TABLE_N_VALUES, TrapSpec, audit_inequalities, run_sweep

start = time.perf_counter()
sweep = run_sweep(TrapSpec(1), TABLE_N_VALUES)
print(f"sweep took {time.perf_counter() - start:.1f} s")

cols = ["s_r_min", "s_r", "s_r_max", "s_k_min", "s_k", "s_k_max", "s_min", "s_total", "s_max"]
print(f"{'N':>8}" + "".join(f"{c:>9}" for c in cols))
for n, rep in zip(sweep.n_values, sweep.reports):
    print(f"{n:>8}" + "".join(f"{getattr(rep, c):9.3f}" for c in cols))

# condensate properties behind the entropies
for n, state in sweep.states.items():
    print(n, "mu", round(state.chemical_potential, 4), "n(0) a^3", f"{state.peak_gas_parameter:.1e}")

audit = audit_inequalities(sweep)
print("inequality chain checks:", audit.n_checks, "all pass" if audit.passed else "FAILED")
