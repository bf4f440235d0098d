import random

import pytest

from compsaw.enumeration import bridges_by_height
from compsaw.oracle import dfs_count_bridges, irreducible_tally
from compsaw.series import (DegreeMismatch, GFPoly, TwoVarSeries, extend_bridges,
                            geometric_inverse, irreducible_from_bridges, series_mul,
                            validity_bound)


def naive_mul(a, b, d):
    out = [0] * (d + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= d:
                out[i + j] += x * y
    return out


def test_basic_arithmetic():
    p, q = GFPoly((1, 1), 2), GFPoly((1, -1), 2)
    assert (p * q).coeffs == (1, 0, -1)
    z = GFPoly.monomial(1, 4)
    inv = geometric_inverse(z)
    assert inv.coeffs == (1, 1, 1, 1, 1)
    assert (z * inv).coeffs == (0, 1, 1, 1, 1)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        GFPoly((1,), 2) * GFPoly((1,), 3)
    with pytest.raises(DegreeMismatch):
        GFPoly((1,), 2).truncate(5)


def test_mul_matches_schoolbook():
    rng = random.Random(7)
    for _ in range(30):
        d = rng.randint(0, 12)
        a = [rng.choice([0, 0, 1, -3, 10 ** 30]) for _ in range(d + 1)]
        b = [rng.choice([0, 2, -1, 7 ** 40]) for _ in range(d + 1)]
        assert list(series_mul(GFPoly(a, d), GFPoly(b, d)).coeffs) == naive_mul(a, b, d)


def test_json_roundtrip(tmp_path):
    B = bridges_by_height(3, 10)
    B.write_json(tmp_path / "b.json")
    assert TwoVarSeries.from_json(tmp_path / "b.json").to_json() == B.to_json()
    assert B[1].to_json(1)["h"] == 1 and isinstance(B[1].to_json()["coeffs"][0], str)


def test_irreducible_small():
    B = bridges_by_height(4, 12)
    A = irreducible_from_bridges(B)
    assert A[1].coeffs == B[1].coeffs
    assert A[2][2] == 0  # NN = N + N
    assert all(c >= 0 for h in A.polys for c in A[h].coeffs)


def test_irreducible_matches_classification():
    B = bridges_by_height(10, 10)
    A = irreducible_from_bridges(B)
    assert A.to_table("irreducible_bridges").entries == irreducible_tally(10).entries


def test_missing_height():
    B = bridges_by_height(3, 8)
    with pytest.raises(ValueError):
        irreducible_from_bridges(TwoVarSeries({1: B[1], 3: B[3]}), 3)


def test_extension_against_dfs():
    B = bridges_by_height(3, 11)
    A = irreducible_from_bridges(B)
    E = extend_bridges(A, validity_bound(3), 3)
    ref = dfs_count_bridges(11)
    assert E.to_table().totals() == ref.totals()


def test_extension_bounds():
    A = irreducible_from_bridges(bridges_by_height(2, 10))
    with pytest.raises(ValueError, match="validity"):
        extend_bridges(A, 9, 2)


def test_extension_roundtrip_and_consistency():
    B = bridges_by_height(5, 17)
    A = irreducible_from_bridges(B)
    E5 = extend_bridges(A, 17, 5)
    for h in range(1, 6):
        assert E5[h].coeffs == B[h].coeffs
    E3 = extend_bridges(A, validity_bound(3), 3)
    for h in E3.polys:
        assert E3[h].coeffs == E5[h].truncate(validity_bound(3)).coeffs


def test_w1_hand_expansion():
    A = irreducible_from_bridges(bridges_by_height(1, 5))
    E = extend_bridges(A, 5, 1)
    assert E[2][2] == 1
    # two height-1 irreducibles of 1 + 2 steps, in either order
    assert E[2][3] == 2 * A[1][1] * A[1][2]
