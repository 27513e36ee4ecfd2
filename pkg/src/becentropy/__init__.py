"""Information entropy of trapped Bose-Einstein condensates.

Ground states of the Gross-Pitaevskii equation in an isotropic harmonic trap,
their position and momentum Shannon entropies, the entropic uncertainty
bounds built from kinetic energy and mean-square radius, Landsberg's order
parameter, and the logarithmic growth of the entropy sum with particle number.
All quantities are in oscillator units (hbar = m = omega = 1).
"""

from .entropy import (
    EUR_BOUND,
    GAUSSIAN_ENTROPY,
    EntropyReport,
    entropy_report,
    eur_bounds,
    landsberg_omega,
    moments,
    shannon_entropy,
)
from .gpe import CondensateState, TrapSpec, solve_ground_state, thomas_fermi_mu
from .momentum import DensityPair, MomentumGrid, to_momentum
from .radial import RadialFunction, RadialGrid, integrate_radial, second_derivative
from .scaling import (
    TABLE_N_VALUES,
    LogLawFit,
    SweepResult,
    analyse,
    audit_inequalities,
    fit_log_law,
    fit_sweep,
    run_sweep,
)

__version__ = "0.1.0"
