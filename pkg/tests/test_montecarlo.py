import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman.montecarlo import (
    CSV_HEADER,
    PowerSums,
    SimulationConfig,
    TrialRecord,
    export_csv,
    export_histogram,
    fit_line,
    load_csv,
    simulate,
    stats_from_records,
)
from bergman.recurrence import new_recurrence


def test_n2_is_deterministic():
    s = simulate(2, 20, 3)
    assert set(s.lengths) == {1}
    assert s.variance == 0 and s.degenerate
    assert all(v == 0.0 for v in s.std_moments.values())
    assert s.hist_counts == [20]


def test_single_trial_is_degenerate():
    s = simulate(10, 1, 3)
    assert s.trials == 1 and s.degenerate


def test_bad_arguments():
    with pytest.raises(ValueError):
        simulate(0, 5)
    with pytest.raises(ValueError):
        simulate(5, 0)


def test_fit_line():
    xs = [1, 2, 3, 4]
    slope, icpt, r2 = fit_line(xs, [2 * x + 1 for x in xs])
    assert slope == pytest.approx(2) and icpt == pytest.approx(1) and r2 == pytest.approx(1)
    slope, _, r2 = fit_line(xs, [5, 5, 5, 5])
    assert slope == pytest.approx(0, abs=1e-12) and r2 == 1.0
    with pytest.raises(ValueError):
        fit_line([1, 1, 2], [0, 1, 2])


@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=50))
def test_power_sums_match_numpy(xs):
    ps = PowerSums()
    for x in xs:
        ps.add(x)
    a = np.asarray(xs, dtype=float)
    for p in (2, 3, 4):
        want = float(((a - a.mean()) ** p).mean())
        assert float(ps.central(p)) == pytest.approx(want, rel=1e-9, abs=1e-6 * max(1.0, a.std()) ** p)


@given(st.lists(st.integers(0, 1000), min_size=1, max_size=40), st.integers(0, 40))
def test_power_sums_merge(xs, cut):
    whole, a, b = PowerSums(), PowerSums(), PowerSums()
    for x in xs:
        whole.add(x)
    for x in xs[:cut]:
        a.add(x)
    for x in xs[cut:]:
        b.add(x)
    a.merge(b)
    assert a.sums == whole.sums and a.central(3) == whole.central(3)


def test_standardized_order_two_is_one():
    recs = [TrialRecord(t, 0, 5, m, 0, 0, 0, 0) for t, m in enumerate([3, 1, 4, 1, 5, 9, 2, 6])]
    s = stats_from_records(recs, 5)
    assert isinstance(s.sums.central(2), Fraction)
    assert float(s.sums.central(2)) / s.variance == pytest.approx(1.0)
    assert s.mean == pytest.approx(31 / 8)


def test_csv_is_identical_across_threads(tmp_path):
    a = simulate(30, 12, 5, threads=1)
    b = simulate(30, 12, 5, threads=2)
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(a, pa)
    export_csv(b, pb)
    assert pa.read_bytes() == pb.read_bytes()
    assert a.to_json() == b.to_json()
    ha, hb = tmp_path / "ha.csv", tmp_path / "hb.csv"
    export_histogram(a, ha)
    export_histogram(b, hb)
    assert ha.read_bytes() == hb.read_bytes()


def test_seed_changes_outcome():
    assert simulate(40, 10, 1).lengths != simulate(40, 10, 2).lengths


def test_csv_round_trip(tmp_path):
    s = SimulationConfig(25, 15, 9).run()
    p = tmp_path / "t.csv"
    export_csv(s, p)
    assert p.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    back = load_csv(p)
    assert back.lengths == s.lengths
    assert back.mean == s.mean
    for k, v in s.std_moments.items():
        assert math.isclose(back.std_moments[k], v, abs_tol=1e-12)


def test_empty_stats_header_only(tmp_path):
    s = stats_from_records([], 4)
    p = tmp_path / "e.csv"
    export_csv(s, p)
    assert p.read_text() == ",".join(CSV_HEADER) + "\n"


def test_other_recurrence():
    s = simulate(8, 6, 2, new_recurrence([2, 1]))
    assert s.coeffs == (2, 1) and all(r.moves > 0 for r in s.records)
