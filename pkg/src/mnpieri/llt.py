"""Ribbon-tableau generating series weighted by the m/n Pieri coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .qt import ONE, ZERO, QTRational, s
from .ribbons import (RibbonTableau, collapse_edges, connected_components, enumerate_tilings,
                      minimal_tableau, tableau_weights)
from .shapes import Partition, SkewShape
from .stable import pieri_rhs, strip_coefficient, theta

__all__ = [
    "theta",
    "tableau_theta",
    "realizable_tilings",
    "iterated_pieri",
    "LLTSeries",
    "llt_G",
    "llt_classic",
    "NonConstantRatio",
    "gamma_ratio",
    "connectivity_report",
    "ConnectivityReport",
]


class NonConstantRatio(ArithmeticError):
    """theta_m(T) / (-s)^ht(T) differs between two tableaux of one shape."""


def _ribbons(T):
    return T.ribbons() if isinstance(T, RibbonTableau) else list(T)


def tableau_theta(T, m: int, n: int) -> QTRational:
    """Product of ``theta_m`` over the ribbons of a tableau or tiling."""
    return strip_coefficient(_ribbons(T), m, n)


def _height(T) -> int:
    return sum(B.height for B in _ribbons(T))


def realizable_tilings(sh: SkewShape, n: int) -> list[tuple[frozenset, dict]]:
    """Tilings underlying at least one ribbon tableau, with their tableau counts per weight."""
    out = []
    for tiling in enumerate_tilings(sh, n):
        w = tableau_weights(sh, tiling)
        if w:
            out.append((tiling, w))
    return out


def iterated_pieri(mu, nu, m: int, n: int) -> dict[Partition, QTRational]:
    """``e_{nu_1} ... e_{nu_t} s_mu`` in the slope ``m/n`` stable basis, one Pieri layer at a time."""
    cur = {Partition(mu): ONE}
    for k in reversed(tuple(nu)):
        nxt: dict[Partition, QTRational] = {}
        for kappa, c in cur.items():
            if k == 0:
                nxt[kappa] = nxt.get(kappa, ZERO) + c
                continue
            for lam, a in pieri_rhs(kappa, k, m, n).items():
                nxt[lam] = nxt.get(lam, ZERO) + c * a
        cur = {lam: c for lam, c in nxt.items() if not c.is_zero()}
    return cur


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class LLTSeries:
    shape: SkewShape
    n: int
    m: int | None
    numvars: int
    coeffs: dict = field(default_factory=dict)

    def coefficient(self, nu) -> QTRational:
        return self.coeffs.get(tuple(nu), ZERO)

    def is_symmetric(self) -> bool:
        return all(self.coefficient(p) == c for nu, c in self.coeffs.items()
                   for p in set(permutations(nu)))

    def __eq__(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)


def _series(sh: SkewShape, n: int, t_vars: int, weight) -> dict:
    if sh.size % n:
        raise ValueError(f"shape of size {sh.size} is not a union of {n}-ribbons")
    by_weight: dict[tuple, QTRational] = {}
    for tiling, counts in realizable_tilings(sh, n):
        w = weight(tiling)
        for nu, c in counts.items():
            by_weight[nu] = by_weight.get(nu, ZERO) + w * c
    out = {}
    for nu in _compositions(sh.size // n, t_vars):
        c = by_weight.get(tuple(p for p in nu if p), ZERO)
        if not c.is_zero():
            out[nu] = c
    return out


def llt_G(sh: SkewShape, n: int, m: int, t_vars: int) -> LLTSeries:
    """``sum_nu x^nu sum_{T of weight nu} theta_m(T)`` in ``t_vars`` variables."""
    return LLTSeries(sh, n, m, t_vars, _series(sh, n, t_vars, lambda T: tableau_theta(T, m, n)))


def llt_classic(sh: SkewShape, n: int, t_vars: int) -> LLTSeries:
    """The same series weighted by ``(-s)^ht(T)`` with ``s = (t/q)^(1/2)``."""
    return LLTSeries(sh, n, None, t_vars, _series(sh, n, t_vars, lambda T: (-s) ** _height(T)))


def gamma_ratio(sh: SkewShape, n: int, m: int) -> QTRational:
    """The common value of ``theta_m(T) / (-s)^ht(T)`` over every tableau of ``sh``."""
    tilings = realizable_tilings(sh, n)
    if not tilings:
        raise ValueError(f"{sh} admits no {n}-ribbon tableau")
    ref = None
    for tiling, _ in tilings:
        r = tableau_theta(tiling, m, n) / (-s) ** _height(tiling)
        if ref is None:
            ref = r
        elif r != ref:
            raise NonConstantRatio(f"{sh}: ratio {r} differs from {ref}")
    return ref


@dataclass
class ConnectivityReport:
    shape: str
    n: int
    vertices: int
    edges: int
    components: int
    minimal_in_component: bool | None
    per_weight: dict = field(default_factory=dict)
    bad_edges: list = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return self.components <= 1


def connectivity_report(sh: SkewShape, n: int, m: int = 1, drop_edges: int = 0) -> ConnectivityReport:
    """Collapse graph over the tilings of all tableaux of ``sh``.

    ``drop_edges`` removes that many edges before counting components; it
    exists as a sanity check of the counting.  Every kept edge is also
    checked to change ``theta_m`` by exactly ``t/q`` and the height by 2.
    """
    tilings = realizable_tilings(sh, n)
    verts, edges = collapse_edges([t for t, _ in tilings])
    edges = edges[drop_edges:]
    labels = connected_components(len(verts), edges)
    ncomp = len(set(labels))
    bad = []
    t_over_q = s ** 2
    for i, j in edges:
        lo, hi = (i, j) if _height(verts[i]) < _height(verts[j]) else (j, i)
        gap = _height(verts[hi]) - _height(verts[lo])
        ratio = tableau_theta(verts[hi], m, n) / tableau_theta(verts[lo], m, n)
        if gap != 2 or ratio != t_over_q:
            bad.append((i, j))
    minimal = minimal_tableau(sh, n)
    in_comp = None
    if minimal is not None and verts:
        key = minimal.tiling()
        in_comp = key in verts and ncomp == 1
    per_weight = {}
    index = {v: i for i, v in enumerate(verts)}
    weights = sorted({nu for _, c in tilings for nu in c})
    for nu in weights:
        members = [index[t] for t, c in tilings if nu in c]
        keep = set(members)
        sub = [(a, b) for a, b in edges if a in keep and b in keep]
        lab = connected_components(len(verts), sub)
        per_weight[nu] = len({lab[i] for i in members})
    return ConnectivityReport(f"{sh.outer}/{sh.inner}", n, len(verts), len(edges), ncomp,
                              in_comp, per_weight, bad)
