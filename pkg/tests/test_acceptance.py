"""Acceptance criteria, checked exactly.

Each test carries ``@criterion(n)``.  Tests marked ``companion=True`` check a
corrected form of a statement whose literal version fails; the literal test is
kept as is.  Run with pytest, or as a script, to get one status line per
criterion in the terminal summary.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import gcd

import pytest

from mnpieri.hall import KernelAction, MultiplyBy, UnitKernel, e_operator
from mnpieri.kernels import ShuffleKernel, eval_hook, hook, phi_norm_kernel, sym_evaluate
from mnpieri.llt import llt_classic, llt_G, realizable_tilings
from mnpieri.qt import ONE, ZERO, eval_qt, hd_ratio, q, t
from mnpieri.ribbons import bubble_game, cover_vertical_strip, enumerate_tilings, tableau_weights
from mnpieri.shapes import (Partition, SkewShape, dominance_leq, enumerate_partitions,
                            enumerate_subpartitions)
from mnpieri.stable import (degree_scan, dlambda_formula, expand_in_stable, pieri_rhs,
                            stable_integer_slope)
from mnpieri.suites import (RunConfig, _llt_shapes, suite_collapse, suite_coproduct, suite_heisenberg,
                            suite_inverse, suite_llt, suite_wheel)
from mnpieri.symfunc import (SymFunc, convert, macdonald_inner, macdonald_M, macdonald_P,
                             multiply, nabla, nabla_eigenvalue)

criterion = pytest.mark.criterion


def partitions_upto(d):
    for size in range(d + 1):
        yield from enumerate_partitions(size)


def failing(cases):
    return [c for c in cases if not c["pass"]]


# 1 ---------------------------------------------------------------------------


def vertical_strips(mu, k):
    """Oracle: partitions lam with lam/mu a vertical k-strip (at most one box per row)."""
    mu = list(mu)
    rows = len(mu) + k
    base = mu + [0] * k
    out = []

    def rec(i, left, acc):
        if i == rows:
            if left == 0:
                out.append(Partition(acc))
            return
        for add in (0, 1):
            if add > left:
                continue
            v = base[i] + add
            if i and v > acc[-1]:
                continue
            rec(i + 1, left - add, acc + [v])

    rec(0, k, [])
    return {lam: ONE for lam in out}


@criterion(1)
def test_c01_classical_pieri():
    for mu in partitions_upto(6):
        for k in range(1, 4):
            lhs = convert(multiply(SymFunc.basis_element("e", [k]), SymFunc.basis_element("s", mu)), "s")
            oracle = vertical_strips(mu, k)
            assert lhs.coeffs == oracle, (mu, k)
            assert pieri_rhs(mu, k, 0, 1) == oracle, (mu, k)


# 2 ---------------------------------------------------------------------------


@criterion(2)
def test_c02_macdonald_orthogonal_and_unitriangular():
    for d in range(7):
        parts = list(enumerate_partitions(d))
        P = {lam: macdonald_P(lam) for lam in parts}
        for lam in parts:
            coeffs = convert(P[lam], "m").coeffs
            assert coeffs[lam] == ONE
            assert all(dominance_leq(mu, lam) for mu in coeffs), lam
        Pp = {lam: convert(f, "p") for lam, f in P.items()}
        for i, lam in enumerate(parts):
            assert not macdonald_inner(Pp[lam], Pp[lam]).is_zero()
            for mu in parts[i + 1:]:
                assert macdonald_inner(Pp[lam], Pp[mu]).is_zero(), (lam, mu)


@criterion(2)
def test_c02_two_row_coefficient():
    got = convert(macdonald_P([2]), "m").coefficient([1, 1])
    assert got == (1 + q) * (1 - t) / (1 - q * t)


@criterion(2)
def test_c02_nabla_eigenvalues():
    for lam in partitions_upto(6):
        n_lam = sum(i * p for i, p in enumerate(lam))
        n_conj = sum(p * (p - 1) // 2 for p in lam)
        eig = q ** n_conj * t ** (-n_lam)
        assert nabla_eigenvalue(lam) == eig
        M = macdonald_M(lam)
        assert convert(nabla(convert(M, "s")), "M") == M.scale(eig), lam


# 3 ---------------------------------------------------------------------------

P1 = SymFunc.basis_element("p", [1])


@criterion(3)
def test_c03_unit_kernel_is_p1_multiplication():
    A, B = KernelAction(UnitKernel()), MultiplyBy(P1)
    for mu in partitions_upto(5):
        assert A.on_basis(mu) == B.on_basis(mu), mu


@criterion(3, companion=True)
def test_c03_unit_kernel_up_to_constant():
    A, B = KernelAction(UnitKernel()), MultiplyBy(P1)
    c = (q - t) / (q - 1)
    for mu in partitions_upto(5):
        b = B.on_basis(mu)
        assert A.on_basis(mu) == {lam: v * c for lam, v in b.items()}, mu


@criterion(3, companion=True)
def test_c03_slope_zero_kernel_is_p1_multiplication():
    A, B = KernelAction(ShuffleKernel("P", 1, 0, 1)), MultiplyBy(P1)
    for mu in partitions_upto(5):
        assert A.on_basis(mu) == B.on_basis(mu), mu


# 4 ---------------------------------------------------------------------------


@criterion(4)
@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 3), (-1, 2)])
@pytest.mark.parametrize("k", [1, 2])
def test_c04_norm_map(m, n, k):
    for fam, want in (("P", ONE), ("E", ONE if k == 1 else ZERO)):
        K = ShuffleKernel(fam, k, m, n)
        assert phi_norm_kernel(K, "fast") == want
        assert phi_norm_kernel(K, "reference") == want


# 5 ---------------------------------------------------------------------------


@criterion(5)
@pytest.mark.parametrize("m,n,k", [(1, 2, 1), (1, 3, 1), (2, 3, 1), (1, 2, 2)])
def test_c05_hook_evaluation(m, n, k):
    K = ShuffleKernel("P", k, m, n)
    for l in range(1, n * k + 1):
        want = eval_hook(k, m, n, l)
        assert sym_evaluate(K, hook(k, n, l), "fast") == want, l
        assert sym_evaluate(K, hook(k, n, l), "reference") == want, l


# 6 ---------------------------------------------------------------------------


@criterion(6)
def test_c06_wheel_conditions():
    cases = suite_wheel(RunConfig())
    sizes = {c["case"] for c in cases}
    assert len(sizes) == len(cases) > 30
    assert any(c["case"].startswith("corrupted") for c in cases)
    assert failing(cases) == []


# 7 ---------------------------------------------------------------------------


@criterion(7)
@pytest.mark.parametrize("m", [-1, 1, 2])
@pytest.mark.parametrize("k", [1, 2])
def test_c07_integer_slope_pieri(m, k):
    kern, nab = e_operator(k, m, 1, "kernel"), e_operator(k, m, 1, "nabla")
    for mu in partitions_upto(5):
        assert kern.on_basis(mu) == nab.on_basis(mu), mu
        rhs = pieri_rhs(mu, k, m, 1)
        src = stable_integer_slope(mu, m)
        assert expand_in_stable(kern.apply(src), m) == rhs, mu
        assert expand_in_stable(nab.apply(src), m) == rhs, mu


# 8 ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def scans():
    return {(m, n, k): degree_scan(m, n, k, 8) for m, n in [(1, 2), (1, 3)] for k in (1, 2)}


@criterion(8)
def test_c08_degree_bounds(scans):
    for key, rep in scans.items():
        assert rep.bound_violations == 0, key
        assert rep.equality_violations == 0, key
        assert any(r["covered"] for r in rep.records)


@criterion(8)
def test_c08_highest_degree_formula(scans):
    bad = {key: rep.hd_mismatches for key, rep in scans.items() if rep.hd_mismatches}
    assert bad == {}


@criterion(8, companion=True)
def test_c08_highest_degree_formula_with_sign(scans):
    for key, rep in scans.items():
        assert rep.hd_corrected_mismatches == 0, key
        assert sum(1 for r in rep.records if "hd" in r) == sum(1 for r in rep.records if r["covered"])


# 9 ---------------------------------------------------------------------------


@criterion(9)
@pytest.mark.parametrize("m,n,k", [(1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 1), (1, 3, 2)])
def test_c09_dlambda_top_term(m, n, k):
    image = e_operator(k, m, n).on_basis(Partition())
    covered = 0
    for lam in enumerate_partitions(k * n):
        strip = cover_vertical_strip(SkewShape(lam), n, k)
        if strip is None:
            continue
        covered += 1
        d = image.get(lam, ZERO)
        assert not d.is_zero(), lam
        assert hd_ratio(d) == dlambda_formula(lam, strip, m, n), lam
    assert covered


# 10 --------------------------------------------------------------------------


def hook_slopes():
    return [(m, n) for n in range(1, 5) for m in range(-5, 6) if gcd(m, n) == 1]


def _q_exp(m, n, i):
    return sum(-((-m * j) // n) for j in range(1, i))


def _t_exp(m, n, i):
    return sum((m * j) // n for j in range(1, n - i + 1))


@criterion(10)
def test_c10_hook_expansion():
    bad = []
    for m, n in hook_slopes():
        rhs = pieri_rhs([], 1, m, n)
        for i in range(1, n + 1):
            lam = Partition([i] + [1] * (n - i))
            want = q ** _q_exp(m, n, i) * (-t) ** _t_exp(m, n, i)
            if rhs.get(lam, ZERO) != want:
                bad.append((m, n, lam))
    assert bad == []


@criterion(10, companion=True)
def test_c10_hook_expansion_inverted_t_with_height_sign():
    for m, n in hook_slopes():
        rhs = pieri_rhs([], 1, m, n)
        want = {Partition([i] + [1] * (n - i)):
                q ** _q_exp(m, n, i) * (-1) ** (n - i) * t ** (-_t_exp(m, n, i))
                for i in range(1, n + 1)}
        assert rhs == want, (m, n)


# 11 --------------------------------------------------------------------------


@criterion(11)
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m", [0, 1])
def test_c11_llt_ratio_and_symmetry(m, n):
    (case,) = suite_llt(RunConfig(m=m, n=n, max=12, vars=3))
    assert case["shapes"] > 0
    assert case["failures"] == 0, case["witnesses"]


@criterion(11, companion=True)
@pytest.mark.parametrize("n", [2, 3])
def test_c11_slope_zero_is_spin_series_at_s_equal_one(n):
    # theta_0 is the bare height sign, so G^{0/n} is the spin series at q = t
    shapes = 0
    for sh in _llt_shapes(n, 12):
        if not realizable_tilings(sh, n):
            continue
        shapes += 1
        G, Gc = llt_G(sh, n, 0, 3), llt_classic(sh, n, 3)
        assert G.is_symmetric(), sh
        for nu in set(G.coeffs) | set(Gc.coeffs):
            assert G.coefficient(nu).is_constant(), sh
            assert G.coefficient(nu).to_fraction() == eval_qt(Gc.coefficient(nu), 4, 4), (sh, nu)
    assert shapes > 100


# 12 --------------------------------------------------------------------------


@criterion(12)
@pytest.mark.parametrize("n", [2, 3])
def test_c12_collapse_graph(n):
    (case,) = suite_collapse(RunConfig(m=1, n=n, max=12))
    assert case["shapes"] > 0
    assert case["pass"], case["witnesses"]


# 13 --------------------------------------------------------------------------


def skew_shapes(maxsize):
    for size in range(1, maxsize + 1):
        for lam in enumerate_partitions(size):
            for mu in enumerate_subpartitions(lam):
                if mu != lam:
                    yield SkewShape(lam, mu)


@criterion(13)
@pytest.mark.parametrize("n", [2, 3])
def test_c13_bubble_game_decides_cover(n):
    checked = 0
    for sh in skew_shapes(10):
        if sh.size % n:
            continue
        checked += 1
        assert bubble_game(sh, n) == (cover_vertical_strip(sh, n) is not None), sh
    assert checked > 500


@criterion(13)
@pytest.mark.parametrize("n", [2, 3])
def test_c13_cover_unique(n):
    for sh in skew_shapes(10):
        if sh.size % n or sh.size > 8:
            continue
        k = sh.size // n
        single_layer = [T for T in enumerate_tilings(sh, n) if (k,) in tableau_weights(sh, T)]
        cover = cover_vertical_strip(sh, n)
        assert len(single_layer) <= 1, sh
        if cover is None:
            assert not single_layer, sh
        else:
            assert single_layer == [frozenset(cover.ribbons)], sh


# 14 --------------------------------------------------------------------------


@criterion(14)
def test_c14_heisenberg_and_adjoint():
    cases = suite_heisenberg(RunConfig(max=4, seed=0))
    assert len(cases) == 8
    assert failing(cases) == []


# 15 --------------------------------------------------------------------------


@criterion(15)
def test_c15_variable_inversion():
    cases = suite_inverse(RunConfig(seed=0))
    assert cases and all(c["generic_points"] == 20 for c in cases)
    assert failing(cases) == []


@criterion(15)
def test_c15_coproduct_factorization():
    cases = suite_coproduct(RunConfig(seed=0))
    assert len(cases) >= 5
    assert any(Fraction(c["limit"]) != 0 for c in cases)
    assert failing(cases) == []


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"] + sys.argv[1:]))
