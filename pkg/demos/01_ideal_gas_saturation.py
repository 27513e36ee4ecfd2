# A non-interacting gas in a harmonic trap is a Gaussian, and Gaussians sit
# exactly on the entropic uncertainty bound.
import numpy as np

from becentropy import EUR_BOUND, GAUSSIAN_ENTROPY, TrapSpec, analyse

state, pair, report = analyse(TrapSpec(1, scattering_length_phys=0.0))

print("mu          ", state.chemical_potential)  # 1.5 hbar omega
print("S_r, S_k    ", report.s_r, report.s_k)
print("S           ", report.s_total, "bound", EUR_BOUND)

# every bound collapses onto the Gaussian value
for name, value in zip(report.bounds._fields, report.bounds):
    print(f"{name:8s} {value:.6f}")
print("single-space Gaussian entropy", GAUSSIAN_ENTROPY)

# the momentum density is the same Gaussian
k = pair.nk.nodes
print("max |n(k) - pi^-1.5 exp(-k^2)|", np.abs(pair.nk.values - np.pi**-1.5 * np.exp(-k**2)).max())
