import mpmath
import pytest

from compsaw.heightseries import HeightSeries
from compsaw.oracle import dfs_count_bridges, dfs_count_walks, dfs_max_height_table
from compsaw.partition import (CONSTANTS, WeightedSeries, beta, concat_probability,
                               u_from_weight, weight_by_height)


def test_constants_stored_exactly():
    assert CONSTANTS.mu_sq_lattice == "2.63815853035"
    assert str(CONSTANTS.sigma) == "3/7"
    assert CONSTANTS.alpha == CONSTANTS.g_saws - CONSTANTS.g_bridges
    assert float(CONSTANTS.alpha) == pytest.approx(73 / 112)


def test_single_bridge_term():
    t = dfs_count_bridges(6)
    for u in ("0.3", "1.7"):
        ws = weight_by_height(t, u)
        with mpmath.workdps(50):
            want = mpmath.exp(-mpmath.mpf(u)) * mpmath.exp(-beta())
            assert abs(ws[1] / want - 1) < mpmath.mpf(10) ** -45


def test_unit_weights_give_totals():
    t = dfs_count_bridges(8)
    ws = weight_by_height(t, 0, "raw")
    assert [int(ws[n]) for n in ws.n_values] == t.totals()[1:]


def test_large_u_limit():
    t = dfs_max_height_table(6)
    ws = weight_by_height(t, 60, "raw")
    assert all(abs(ws[n] - 2) < 1e-20 for n in ws.n_values)


def test_monotone_in_u():
    t = dfs_count_bridges(8)
    lo, hi = weight_by_height(t, 0.2), weight_by_height(t, 0.9)
    assert all(hi[n] < lo[n] for n in lo.n_values if n >= 2)


def test_normalization_consistency():
    t = dfs_count_bridges(8)
    raw, norm = weight_by_height(t, 0.5, "raw"), weight_by_height(t, 0.5)
    with mpmath.workdps(50):
        for n in raw.n_values:
            assert abs(raw[n] * mpmath.exp(-beta() * n) / norm[n] - 1) < mpmath.mpf(10) ** -45
    assert raw.as_normalized().values.keys() == norm.values.keys()


def test_precision_stable():
    t = dfs_count_bridges(10)
    a = weight_by_height(t, u_from_weight(0.5))
    b = weight_by_height(t, u_from_weight(0.5, dps=100), dps=100)
    for n in a.n_values:
        assert abs(a[n] / b[n] - 1) < 1e-20


def test_errors():
    with pytest.raises(ValueError):
        weight_by_height(HeightSeries("bridges", {}, 0, 0), 1)
    with pytest.raises(ValueError):
        weight_by_height(dfs_count_bridges(3), -1)
    with pytest.raises(ValueError):
        WeightedSeries(1, "raw", {1: mpmath.mpf(0)})


def test_csv_roundtrip(tmp_path):
    ws = weight_by_height(dfs_count_bridges(8), u_from_weight(0.5))
    text = ws.to_csv(tmp_path / "s.csv")
    assert text.splitlines()[1] == "n,value"
    back = WeightedSeries.from_csv(tmp_path / "s.csv")
    assert back.beta_mode == "normalized" and back.n_values == ws.n_values
    for n in ws.n_values:
        assert abs(back[n] / ws[n] - 1) < 1e-45
    assert back.to_csv() == text


def test_concat_probability():
    c = dfs_count_walks("full_plane", 4)
    assert concat_probability(c, 1) == 0.75
    with mpmath.workdps(50):
        assert abs(concat_probability(c, 2) - mpmath.mpf(100) / 144) < 1e-40
    # one dimension: c_n = 2 for all n, so p_n = 1/2
    assert concat_probability([1, 2, 2, 2, 2], 2) == 0.5
    with pytest.raises(ValueError):
        concat_probability(c, 3)
