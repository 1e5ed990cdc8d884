import json

import pytest
from hypothesis import given, settings, strategies as st

from mnpieri.ribbons import (Ribbon, RibbonTableau, bubble_game, collapse_edges, connected_components,
                             cover_horizontal_strip, cover_vertical_strip, enumerate_ribbon_tableaux,
                             enumerate_tilings, is_vertical_strip, minimal_tableau, next_to,
                             partition_minus, ribbon_height, tableau_weights)
from mnpieri.shapes import Partition, SkewShape, enumerate_partitions, enumerate_subpartitions


def _skews(maxsize):
    out = []
    for size in range(1, maxsize + 1):
        for lam in enumerate_partitions(size):
            for mu in enumerate_subpartitions(lam):
                if mu != lam:
                    out.append(SkewShape(lam, mu))
    return out


SKEWS = _skews(8)
skews = st.sampled_from(SKEWS)


def test_ribbon_validation_and_order():
    r = Ribbon(((1, 0), (0, 1), (0, 0)))
    assert r.boxes == ((0, 1), (0, 0), (1, 0))
    assert (r.height, r.width, len(r)) == (1, 1, 3)
    assert r.transpose().height == 1
    with pytest.raises(ValueError):
        Ribbon(((0, 0), (1, 1)))
    with pytest.raises(ValueError):
        Ribbon(())


def test_next_to_uses_first_common_edge():
    left = Ribbon(((0, 0),))
    right = Ribbon(((1, 0),))
    above = Ribbon(((0, 1),))
    assert next_to(left, right) and next_to(right, left)
    assert not next_to(left, above)
    assert not next_to(left, Ribbon(((5, 5),)))
    assert is_vertical_strip([left, above])
    assert not is_vertical_strip([left, right])


def test_vertical_column_of_dominoes():
    sh = SkewShape(Partition([1, 1, 1, 1]))
    strip = cover_vertical_strip(sh, 2)
    assert strip is not None and len(strip) == 2 and strip.height == 2
    assert cover_horizontal_strip(sh, 2) is None
    assert cover_horizontal_strip(SkewShape(Partition([4])), 2) is not None
    with pytest.raises(ValueError):
        cover_vertical_strip(sh, 2, 3)


@given(skews, st.sampled_from([1, 2, 3]))
@settings(max_examples=300, deadline=None)
def test_bubble_game_agrees_with_cover(sh, n):
    if sh.size % n:
        assert cover_vertical_strip(sh, n) is None
        return
    strip = cover_vertical_strip(sh, n)
    assert bubble_game(sh, n) == (strip is not None)
    if strip is not None:
        assert sorted(b for r in strip for b in r) == sorted(sh.boxes())
        assert is_vertical_strip(list(strip))
        assert all(len(r) == n for r in strip)


@given(skews, st.sampled_from([2, 3]))
@settings(max_examples=150, deadline=None)
def test_horizontal_cover_is_transposed_vertical(sh, n):
    tr = SkewShape(sh.outer.conjugate(), sh.inner.conjugate())
    assert (cover_horizontal_strip(sh, n) is None) == (cover_vertical_strip(tr, n) is None)


def test_every_skew_shape_is_a_vertical_strip_of_single_boxes_iff_one_box_per_row():
    for sh in SKEWS:
        rows = [b.y for b in sh.boxes()]
        assert (cover_vertical_strip(sh, 1) is not None) == (len(rows) == len(set(rows)))


@given(skews, st.sampled_from([2, 3]))
@settings(max_examples=120, deadline=None)
def test_tableau_weights_match_direct_enumeration(sh, n):
    if sh.size % n or sh.size > 6:
        return
    counts = {}
    for T in (t for t in enumerate_tilings(sh, n)):
        for nu, c in tableau_weights(sh, T).items():
            counts[nu] = counts.get(nu, 0) + c
    k = sh.size // n
    for nu in [(k,), (k - 1, 1), (1, k - 1)] if k > 1 else [(k,)]:
        direct = enumerate_ribbon_tableaux(sh, n, nu)
        assert len(direct) == counts.get(nu, 0), nu
        for T in direct:
            assert T.weight == nu
            assert sorted(b for r in T.ribbons() for b in r) == sorted(sh.boxes())


def test_domino_tilings_of_rectangles():
    # domino tilings of 2 x m rectangles are Fibonacci numbers
    fib = [1, 1, 2, 3, 5, 8]
    for m in range(1, 6):
        assert len(enumerate_tilings(SkewShape(Partition([m, m])), 2)) == fib[m]
    assert len(enumerate_tilings(SkewShape(Partition([4, 4, 4])), 2)) == 11


def test_partition_minus():
    lam = Partition([3, 2])
    assert partition_minus(lam, [(2, 0), (1, 1)]) == Partition([2, 1])
    assert partition_minus(lam, [(0, 0)]) is None


def test_tableau_json_and_height():
    sh = SkewShape(Partition([2, 2]))
    (T,) = enumerate_ribbon_tableaux(sh, 2, (1, 1))[:1]
    assert isinstance(T, RibbonTableau)
    assert len(json.loads(T.to_json())) == 2
    assert T.height == ribbon_height(T.ribbons())


def test_collapse_graph_of_square():
    sh = SkewShape(Partition([2, 2]))
    verts, edges = collapse_edges(enumerate_tilings(sh, 2))
    assert len(verts) == 2 and edges == [(0, 1)]
    assert connected_components(3, [(0, 2)]) == [0, 1, 0]


def test_minimal_tableau():
    sh = SkewShape(Partition([3, 3]))
    T = minimal_tableau(sh, 2)
    assert T is not None and sorted(b for r in T.ribbons() for b in r) == sorted(sh.boxes())
    assert minimal_tableau(SkewShape(Partition([2, 1])), 2) is None
