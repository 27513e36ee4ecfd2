# Compute the entropies of densities that come from somewhere else, here a
# pair of text files written by the solver itself.
import tempfile
from pathlib import Path

import numpy as np

from becentropy import TrapSpec, analyse
from becentropy.io import export_density_pair, ingest_density_pair, read_density

_, pair, report = analyse(TrapSpec(5_000))

with tempfile.TemporaryDirectory() as tmp:
    pos, mom = Path(tmp) / "rho.dat", Path(tmp) / "nk.dat"
    export_density_pair(pair, pos, mom)
    again = ingest_density_pair(pos, mom)
    print("S from solver  ", report.s_total)
    print("S from files   ", again.s_total)

    # a non-uniform table gets resampled onto a uniform mesh
    r = np.sort(np.r_[0.0, np.random.default_rng(0).uniform(0, 8, 300), 8.0])
    np.savetxt(Path(tmp) / "gauss.dat", np.column_stack([r, np.pi**-1.5 * np.exp(-r**2)]))
    got = read_density(Path(tmp) / "gauss.dat", "position")
    print("resampled:", got.resampled, "normalisation defect:", f"{got.normalization_defect:.1e}")
