import pytest

from compsaw.oracle import (OracleLimitError, classify_irreducible, decode_steps,
                            dfs_count_bridges, dfs_count_polygons_halfplane, dfs_count_walks,
                            dfs_max_height_table, irreducible_tally, is_bridge, iter_walks)


def test_full_plane_small():
    assert dfs_count_walks("full_plane", 4)[1:] == [4, 12, 36, 100]


def test_half_plane_small():
    counts, table = dfs_count_walks("half_plane", 2)
    assert counts[1:] == [3, 7]
    assert table.heights(1) == {0: 2, 1: 1}
    assert table.heights(2) == {0: 2, 1: 4, 2: 1}


def test_strip_zero():
    assert dfs_count_walks("strip", 5, h=0)[5] == 2


def test_centered_strip_inactive():
    assert dfs_count_walks("centered_strip", 2, h=4)[2] == 12


def test_cap_refused():
    with pytest.raises(OracleLimitError):
        dfs_count_walks("full_plane", 17)
    assert dfs_count_walks("full_plane", 3, cap=3)[3] == 36


@pytest.mark.parametrize("kind", ["banana", "strip"])
def test_bad_kind_or_missing_height(kind):
    with pytest.raises(ValueError):
        dfs_count_walks(kind, 3)


def test_bridges_weak_and_strict():
    weak = dfs_count_bridges(2, strict=False)
    assert weak.heights(1) == {1: 1}
    assert weak.heights(2) == {1: 4, 2: 1}
    strict = dfs_count_bridges(2)
    # EN and WN revisit the bottom row
    assert strict.heights(2) == {1: 2, 2: 1}


def test_orderings_agree():
    a = dfs_max_height_table(9, ordering="enws")
    b = dfs_max_height_table(9, ordering="swne")
    assert a.entries == b.entries
    assert dfs_count_bridges(9, ordering="swne").entries == dfs_count_bridges(9).entries


def test_max_height_table_sums_to_half_plane():
    counts, table = dfs_count_walks("half_plane", 8)
    assert table.totals() == [0] + counts[1:]
    assert all(table[n, n] == 1 for n in range(1, 9))


def test_polygons():
    p = dfs_count_polygons_halfplane(8)
    assert p.total(3) == 0 and p.total(5) == 0
    # ENW, NES, WNE, NWS: both orientations from both bottom corners
    assert p.heights(4) == {1: 4}
    assert p.total(6) > 0 and all(h >= 1 for _, h in p.entries)


def test_reflection_symmetry():
    ends = {}
    for w in iter_walks(7):
        ends[w[-1]] = ends.get(w[-1], 0) + 1
    for (x, y), c in ends.items():
        assert ends[-x, y] == c


@pytest.mark.parametrize("word,expected", [("N", True), ("NN", False), ("NESENN", None),
                                           ("NEN", False), ("NENEN", False), ("ENWNN", None)])
def test_classify(word, expected):
    w = decode_steps(word)
    if expected is None:
        with pytest.raises(ValueError):
            classify_irreducible(w)
    else:
        assert classify_irreducible(w) is expected


def test_classify_weak_criterion():
    # NESENN touches y = 0 again, so it is only a bridge in the weak sense,
    # where it splits at t = 5 into a height-1 bridge plus N
    w = decode_steps("NESENN")
    assert classify_irreducible(w, strict=False) is False
    assert is_bridge(decode_steps("ENN"), strict=False)
    assert not is_bridge(decode_steps("ENN"))


def test_classification_partitions_bridges():
    irr = irreducible_tally(9)
    b = dfs_count_bridges(9)
    for (n, h), c in irr.entries.items():
        assert 0 < c <= b[n, h]
    # NN splits, so (2, 2) has no irreducible member
    assert irr[2, 2] == 0


def test_minimal_length_gap():
    irr = irreducible_tally(10)
    for h in (2, 3):
        assert all(irr[n, h] == 0 for n in range(3 * h))
