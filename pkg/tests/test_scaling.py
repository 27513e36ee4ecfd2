import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from becentropy.entropy import EUR_BOUND
from becentropy.gpe import BoundaryError, TrapSpec
from becentropy.scaling import (
    SweepError,
    audit_inequalities,
    audit_report,
    fit_log_law,
    fit_sweep,
    run_sweep,
)

from conftest import PUBLISHED_TABLE


def test_fit_exact_line():
    n = np.array([10.0, 100.0, 1e3, 1e4])
    fit = fit_log_law(list(zip(n, 1 + 2 * np.log(n))))
    assert fit.intercept == pytest.approx(1.0, abs=1e-12)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.rms_residual <= 1e-12
    assert fit.n_range == (10, 10_000)


def test_fit_published_table_points():
    fit = fit_log_law(PUBLISHED_TABLE[:, [0, 8]])
    assert fit.intercept == pytest.approx(6.033, abs=0.05)
    assert fit.slope == pytest.approx(0.068, abs=0.01)


@pytest.mark.parametrize("a, b", [(5.325, 0.858), (5.891, 0.849), (6.257, 1.007)])
def test_fit_recovers_fermionic_parameters(a, b):
    n = np.geomspace(2, 300, 12)
    fit = fit_log_law(list(zip(n, a + b * np.log(n))))
    assert fit.intercept == pytest.approx(a, abs=1e-10)
    assert fit.slope == pytest.approx(b, abs=1e-10)


@pytest.mark.parametrize("points", [
    [(10, 1.0), (100, 2.0)],
    [(10, 1.0), (10, 2.0), (10, 3.0)],
    [(0.5, 1.0), (10, 2.0), (100, 3.0)],
])
def test_fit_rejects(points):
    with pytest.raises(ValueError):
        fit_log_law(points)


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    a=st.floats(-10, 10),
    b=st.floats(-2, 2),
)
def test_fit_is_order_invariant_and_recovers_lines(seed, a, b):
    rng = np.random.default_rng(seed)
    n = rng.uniform(1, 1e6, size=8)
    s = a + b * np.log(n) + rng.normal(scale=0.01, size=8)
    pts = list(zip(n, s))
    first = fit_log_law(pts)
    shuffled = fit_log_law([pts[i] for i in rng.permutation(8)])
    assert shuffled.intercept == pytest.approx(first.intercept, abs=1e-9)
    assert shuffled.slope == pytest.approx(first.slope, abs=1e-10)
    exact = fit_log_law(list(zip(n, a + b * np.log(n))))
    assert exact.slope == pytest.approx(b, abs=1e-9)


def test_ideal_gas_sweep():
    sweep = run_sweep(TrapSpec(1, scattering_length_phys=0.0), [1])
    rep = sweep.reports[0]
    assert rep.s_total == pytest.approx(EUR_BOUND, abs=1e-3)
    slacks = audit_inequalities(sweep).rows[0].slacks
    assert all(abs(v) <= 1e-4 for v in slacks.values())


def test_sweep_rejects_repeated_n():
    with pytest.raises(ValueError, match="strictly increasing"):
        run_sweep(TrapSpec(1), [1000, 1000])


def test_sweep_rejects_empty_and_nonpositive():
    with pytest.raises(ValueError):
        run_sweep(TrapSpec(1), [])
    with pytest.raises(ValueError):
        run_sweep(TrapSpec(1), [0, 10])


def test_sweep_failure_keeps_partial_results():
    with pytest.raises(SweepError) as info:
        run_sweep(TrapSpec(1), [500, 1_000_000], r_max=9.0)
    err = info.value
    assert err.n_particles == 1_000_000
    assert [e.n_particles for e in err.partial] == [500]
    assert isinstance(err.cause, BoundaryError)


def test_parallel_sweep_matches_serial():
    ns = [500, 5_000, 50_000]
    serial = run_sweep(TrapSpec(1), ns)
    parallel = run_sweep(TrapSpec(1), ns, workers=3)
    assert serial.entries == parallel.entries


def test_rb_sweep_shape(rb_sweep):
    assert rb_sweep.n_values == [int(n) for n in PUBLISHED_TABLE[:, 0]]
    assert np.all(np.diff(rb_sweep.column("s_total")) > 0)
    assert np.all(np.diff(rb_sweep.column("omega")) > 0)


def test_rb_sweep_fit_residual(rb_sweep):
    assert fit_sweep(rb_sweep).rms_residual <= 0.05


def test_audit_passes_on_rb_sweep(rb_sweep):
    audit = audit_inequalities(rb_sweep)
    assert audit.passed
    assert audit.n_checks == 30
    for row in audit.rows:
        assert all(v > 0 for v in row.slacks.values())


def test_audit_flags_corrupted_report(rb_sweep):
    rep = rb_sweep.reports[3]
    bad = dataclasses.replace(rep, s_r=rep.s_r_min - 0.1)
    row = audit_report(bad)
    assert not row.position_ok
    assert row.momentum_ok and row.total_ok
    assert row.slacks["s_r_lower"] < 0
    assert not audit_inequalities([rep, bad]).passed
