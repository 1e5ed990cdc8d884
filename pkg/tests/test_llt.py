import pytest

from mnpieri.llt import (NonConstantRatio, connectivity_report, gamma_ratio, iterated_pieri, llt_classic,
                         llt_G, realizable_tilings, tableau_theta)
from mnpieri.qt import ONE, ZERO, s
from mnpieri.shapes import Partition, SkewShape, enumerate_partitions, enumerate_subpartitions


def ribbon_shapes(n, maxsize):
    out = []
    for size in range(n, maxsize + 1):
        for lam in enumerate_partitions(size):
            for mu in enumerate_subpartitions(lam):
                sh = SkewShape(lam, mu)
                if sh.size and sh.size % n == 0 and realizable_tilings(sh, n):
                    out.append(sh)
    return out


@pytest.mark.parametrize("m,n", [(1, 2), (3, 2), (1, 3)])
def test_iterated_pieri_matches_tableau_series(m, n):
    for sh in ribbon_shapes(n, 7 if n == 2 else 6):
        G = llt_G(sh, n, m, 3)
        for nu, c in G.coeffs.items():
            assert iterated_pieri(sh.inner, nu, m, n).get(sh.outer, ZERO) == c, (sh, nu)
        total = sh.size // n
        for nu in [(total, 0, 0), (0, 0, total)]:
            assert iterated_pieri(sh.inner, nu, m, n).get(sh.outer, ZERO) == G.coefficient(nu)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 3)])
def test_series_is_symmetric(m, n):
    for sh in ribbon_shapes(n, 6):
        assert llt_G(sh, n, m, 3).is_symmetric(), sh
        assert llt_classic(sh, n, 3).is_symmetric(), sh


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (3, 2)])
def test_coprime_slope_is_rescaled_classic_series(m, n):
    for sh in ribbon_shapes(n, 6):
        g = gamma_ratio(sh, n, m)
        G, C = llt_G(sh, n, m, 2), llt_classic(sh, n, 2)
        assert set(G.coeffs) == set(C.coeffs)
        for nu, c in C.coeffs.items():
            assert G.coefficient(nu) == g * c


def test_non_coprime_slope_has_no_common_ratio():
    sh = SkewShape(Partition([2, 2]))
    with pytest.raises(NonConstantRatio):
        gamma_ratio(sh, 2, 0)
    with pytest.raises(ValueError):
        gamma_ratio(SkewShape(Partition([2, 1])), 2, 1)


def test_tableau_theta_of_column():
    sh = SkewShape(Partition([1, 1]))
    ((tiling, counts),) = realizable_tilings(sh, 2)
    assert counts == {(1,): 1}
    # one vertical domino whose south-east box sits at the origin
    assert tableau_theta(tiling, 1, 2) == -ONE
    assert gamma_ratio(sh, 2, 1) == ONE / s


def test_connectivity_of_small_shapes():
    for sh in ribbon_shapes(2, 8):
        rep = connectivity_report(sh, 2)
        assert rep.connected, sh
        assert rep.bad_edges == []
        assert rep.minimal_in_component in (True, None)


def test_dropping_edges_disconnects():
    sh = SkewShape(Partition([3, 3]))
    full = connectivity_report(sh, 2)
    assert (full.vertices, full.edges, full.components) == (3, 2, 1)
    cut = connectivity_report(sh, 2, drop_edges=1)
    assert cut.components == 2 and not cut.connected
    assert cut.minimal_in_component is False
