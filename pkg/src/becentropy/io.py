"""Reading tabulated densities and writing report files."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .entropy import EntropyReport, entropy_report
from .momentum import DensityPair, MomentumGrid
from .radial import MIN_POINTS, GridError, RadialFunction, RadialGrid, integrate_radial

MAX_INGEST_DEFECT = 0.10
NEGATIVE_TOL = -1e-12
UNIFORM_RTOL = 1e-9
RESAMPLE_POINTS = 2049

TABLE_COLUMNS = (
    ("N", "n_particles"),
    ("S_r(min)", "s_r_min"),
    ("S_r", "s_r"),
    ("S_r(max)", "s_r_max"),
    ("S_k(min)", "s_k_min"),
    ("S_k", "s_k"),
    ("S_k(max)", "s_k_max"),
    ("S(min)", "s_min"),
    ("S", "s_total"),
    ("S(max)", "s_max"),
    ("Omega", "omega"),
)

_SPLIT = re.compile(r"[,\s]+")


class IngestionError(ValueError):
    pass


@dataclass(frozen=True)
class IngestedDensity:
    source: Path
    kind: str  # "position" or "momentum"
    coordinates: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    normalization_defect: float = 0.0
    resampled: bool = False

    def as_radial_function(self) -> RadialFunction:
        mesh_type = RadialGrid if self.kind == "position" else MomentumGrid
        return RadialFunction(mesh_type(self.coordinates[-1], self.coordinates.size), self.density)


def read_table(path) -> np.ndarray:
    """Parse a two-column numeric table; '#' starts a comment, commas or blanks separate."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read ({exc.strerror})") from exc
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        if len(fields) != 2:
            raise IngestionError(f"{path}:{lineno}: expected 2 columns, found {len(fields)}")
        try:
            rows.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise IngestionError(f"{path}:{lineno}: non-numeric entry {line!r}") from None
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    return np.array(rows)


def _row_lines(path) -> list[int]:
    """Line number of every data row, for diagnostics."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if line.split("#", 1)[0].strip():
            out.append(lineno)
    return out


def _is_uniform_from_zero(x: np.ndarray) -> bool:
    if x.size < MIN_POINTS or x[0] != 0.0:
        return False
    h = x[-1] / (x.size - 1)
    return np.allclose(np.diff(x), h, rtol=UNIFORM_RTOL, atol=0.0)


def read_density(path, kind: str) -> IngestedDensity:
    """Load a radial density, validate it, put it on a uniform mesh and renormalise.

    Tables that are not uniform from the origin are resampled with a cubic
    spline (constant below the first tabulated point).
    """
    if kind not in ("position", "momentum"):
        raise ValueError(f"kind must be 'position' or 'momentum', got {kind!r}")
    path = Path(path)
    data = read_table(path)
    x, p = data[:, 0], data[:, 1]
    lines = _row_lines(path)

    bad = np.flatnonzero(~np.isfinite(data).all(axis=1))
    if bad.size:
        raise IngestionError(f"{path}:{lines[bad[0]]}: non-finite value")
    if x[0] < 0:
        raise IngestionError(f"{path}:{lines[0]}: negative coordinate {x[0]}")
    step = np.diff(x)
    if np.any(step <= 0):
        i = int(np.flatnonzero(step <= 0)[0]) + 1
        raise IngestionError(
            f"{path}:{lines[i]}: coordinate {x[i]} does not increase (previous {x[i - 1]})"
        )
    if np.any(p < NEGATIVE_TOL):
        i = int(np.flatnonzero(p < NEGATIVE_TOL)[0])
        raise IngestionError(f"{path}:{lines[i]}: negative density {p[i]}")
    p = np.clip(p, 0.0, None)

    resampled = not _is_uniform_from_zero(x)
    if resampled:
        mesh = np.linspace(0.0, x[-1], max(RESAMPLE_POINTS, x.size))
        p = np.clip(CubicSpline(x, p)(np.clip(mesh, x[0], None)), 0.0, None)
        x = mesh
    mesh_type = RadialGrid if kind == "position" else MomentumGrid
    f = RadialFunction(mesh_type(x[-1], x.size), p)
    norm = integrate_radial(f)
    defect = norm - 1.0
    if not abs(defect) <= MAX_INGEST_DEFECT:
        raise IngestionError(
            f"{path}: {kind} density integrates to {norm:.6g}; "
            f"defect exceeds {MAX_INGEST_DEFECT:.0%}"
        )
    return IngestedDensity(path, kind, f.nodes.copy(), p / norm, float(defect), resampled)


def ingest_density_pair(pos_file, mom_file) -> EntropyReport:
    """Entropy report for externally tabulated rho(r) and n(k)."""
    rho = read_density(pos_file, "position")
    nk = read_density(mom_file, "momentum")
    try:
        pair = DensityPair(rho.as_radial_function(), nk.as_radial_function())
    except GridError as exc:
        raise IngestionError(str(exc)) from exc
    return entropy_report(pair)


def _format_columns(x: np.ndarray, y: np.ndarray) -> str:
    return "".join(f"{a:.17g} {b:.17g}\n" for a, b in zip(x, y))


def export_density_pair(pair: DensityPair, pos_file, mom_file) -> None:
    """Write rho(r) and n(k) as full-precision two-column tables readable by ``read_density``."""
    _atomic_write_all({
        Path(pos_file): "# r rho(r)\n" + _format_columns(pair.rho.nodes, pair.rho.values),
        Path(mom_file): "# k n(k)\n" + _format_columns(pair.nk.nodes, pair.nk.values),
    })


def _g6(x) -> str:
    return f"{x:.6g}"


def _round6(x: float) -> float:
    return float(_g6(x))


def table_csv(reports) -> str:
    lines = [",".join(name for name, _ in TABLE_COLUMNS)]
    for rep in reports:
        cells = []
        for _, attr in TABLE_COLUMNS:
            value = getattr(rep, attr)
            if attr == "n_particles":
                cells.append("" if value is None else str(int(value)))
            else:
                cells.append(_g6(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def fit_json(fit) -> str:
    payload = {
        "a": _round6(fit.intercept),
        "b": _round6(fit.slope),
        "rms_residual": _round6(fit.rms_residual),
        "n_min": int(fit.n_range[0]),
        "n_max": int(fit.n_range[1]),
    }
    return json.dumps(payload, indent=2) + "\n"


def report_json(report: EntropyReport, extra: dict | None = None) -> str:
    payload = {
        k: (_round6(v) if isinstance(v, float) else v) for k, v in report.to_dict().items()
    }
    payload.update(extra or {})
    return json.dumps(payload, indent=2) + "\n"


def plot_data(n_values, values, label: str) -> str:
    body = "".join(f"{int(n)} {_g6(v)}\n" for n, v in zip(n_values, values))
    return f"# N {label}\n" + body


def _atomic_write_all(files: dict) -> None:
    """Write every file to a temporary sibling first, then rename them all into place."""
    dirs = {p.parent for p in files}
    for d in dirs:
        d.mkdir(parents=True, exist_ok=True)
        if not os.access(d, os.W_OK):
            raise PermissionError(f"output directory {d} is not writable")
    staged = []
    try:
        for path, text in files.items():
            tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
            staged.append((tmp, path))
            with open(tmp, "w", newline="\n") as fh:
                fh.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise


def emit_reports(sweep, fit, config) -> list[Path]:
    """Write table.csv, fit.json, fig1.dat and fig2.dat (as selected by ``config.formats``)."""
    if not sweep.entries:
        raise ValueError("empty sweep")
    out = Path(config.out_dir or ".")
    files = {}
    if "csv" in config.formats:
        files[out / "table.csv"] = table_csv(sweep.reports)
    if "json" in config.formats:
        files[out / "fit.json"] = fit_json(fit)
    if "plotdata" in config.formats:
        files[out / "fig1.dat"] = plot_data(sweep.n_values, sweep.column("s_total"), "S")
        files[out / "fig2.dat"] = plot_data(sweep.n_values, sweep.column("omega"), "Omega")
    _atomic_write_all(files)
    return sorted(files)


def emit_ingest_report(report: EntropyReport, config) -> list[Path]:
    out = Path(config.out_dir or ".")
    files = {}
    if "csv" in config.formats:
        files[out / "table.csv"] = table_csv([report])
    if "json" in config.formats:
        files[out / "report.json"] = report_json(report)
    _atomic_write_all(files)
    return sorted(files)
