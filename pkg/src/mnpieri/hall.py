"""Operators of the elliptic Hall algebra acting on symmetric functions.

Every operator works in the basis ``M_lambda`` of renormalized Macdonald
polynomials: it is described by its image of each basis element, computed
lazily and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .kernels import ShuffleKernel, omega, sym_evaluate
from .qt import ONE, ZERO, QTRational, q, s, t
from .shapes import Partition, SkewShape, box_weight, enumerate_partitions, enumerate_skew_over
from .symfunc import (DegreeBoundExceeded, SymFunc, _mac_norm_M, convert, default_ring,
                      multiply, nabla_eigenvalue)

__all__ = [
    "HallOperator",
    "UnitKernel",
    "KernelAction",
    "MultiplyBy",
    "NablaConjugate",
    "Adjoint",
    "DiagonalInfinity",
    "Compose",
    "Combination",
    "act",
    "kernel_coefficient",
    "p_operator",
    "e_operator",
    "p_action",
    "e_action",
    "negative_p_operator",
    "negative_e_operator",
    "negative_e_action",
    "commutator_check",
    "infinity_eigenvalue",
]


class HallOperator:
    """A linear operator on the degree-truncated ring, shifting degree by ``shift``."""

    shift: int = 0

    def __init__(self):
        self._cache: dict[Partition, dict[Partition, QTRational]] = {}

    def _image(self, mu: Partition) -> dict[Partition, QTRational]:
        raise NotImplementedError

    def on_basis(self, mu) -> dict[Partition, QTRational]:
        """``op(M_mu)`` as a map ``lambda -> coefficient of M_lambda``."""
        mu = Partition(mu)
        hit = self._cache.get(mu)
        if hit is None:
            if mu.size + self.shift < 0:
                hit = {}
            else:
                hit = {k: v for k, v in self._image(mu).items() if not v.is_zero()}
            self._cache[mu] = hit
        return hit

    def apply(self, f: SymFunc) -> SymFunc:
        fm = convert(f, "M")
        out: dict[Partition, QTRational] = {}
        for mu, c in fm.coeffs.items():
            for lam, a in self.on_basis(mu).items():
                out[lam] = out.get(lam, ZERO) + c * a
        return SymFunc("M", out)

    __call__ = apply

    def __matmul__(self, other: "HallOperator") -> "Compose":
        return Compose([self, other])

    def __add__(self, other: "HallOperator") -> "Combination":
        return Combination([(ONE, self), (ONE, other)])

    def __sub__(self, other: "HallOperator") -> "Combination":
        return Combination([(ONE, self), (-ONE, other)])

    def scaled(self, c) -> "Combination":
        return Combination([(c if isinstance(c, QTRational) else QTRational.from_fraction(c), self)])


def _check_bound(d: int):
    bound = default_ring().degree_bound
    if d > bound:
        raise DegreeBoundExceeded(f"degree {d} exceeds the configured bound {bound}")


@dataclass(frozen=True)
class UnitKernel:
    """The one-variable shuffle element ``R(z_1) = 1``."""

    N: int = 1
    M: int = 0

    def __str__(self):
        return "1"


@lru_cache(maxsize=None)
def _kernel_value(K, lam: Partition, mu: Partition) -> QTRational:
    if isinstance(K, UnitKernel):
        return ONE
    return sym_evaluate(K, SkewShape(lam, mu))


@lru_cache(maxsize=None)
def _shape_factor(lam: Partition, mu: Partition) -> QTRational:
    """``prod_{new boxes} (t - q chi) prod_{old boxes} omega(chi_new / chi_old)``."""
    old = [box_weight(b) for b in mu.boxes()]
    out = ONE
    for b in SkewShape(lam, mu).boxes():
        x = box_weight(b)
        out = out * (t - q * x)
        for y in old:
            out = out * omega(x / y)
    return out


def kernel_coefficient(K, lam, mu) -> QTRational:
    """Coefficient of ``M_lam`` in ``K . M_mu``."""
    lam, mu = Partition(lam), Partition(mu)
    return _kernel_value(K, lam, mu) * _shape_factor(lam, mu)


class KernelAction(HallOperator):
    """The action of a shuffle element, adding ``K.N`` boxes."""

    def __init__(self, kernel):
        super().__init__()
        self.kernel = kernel
        self.shift = kernel.N

    def _image(self, mu):
        _check_bound(mu.size + self.shift)
        out = {}
        for sh in enumerate_skew_over(mu, self.shift):
            c = kernel_coefficient(self.kernel, sh.outer, mu)
            if not c.is_zero():
                out[sh.outer] = c
        return out

    def __repr__(self):
        return f"KernelAction({self.kernel})"


class MultiplyBy(HallOperator):
    def __init__(self, g: SymFunc):
        super().__init__()
        degs = g.degrees()
        if len(degs) != 1:
            raise ValueError("multiplication operators need a homogeneous factor")
        self.g = g
        self.shift = degs.pop()

    def _image(self, mu):
        _check_bound(mu.size + self.shift)
        return convert(multiply(SymFunc.basis_element("M", mu), self.g), "M").coeffs


class NablaConjugate(HallOperator):
    """``nabla^r o base o nabla^-r``."""

    def __init__(self, base: HallOperator, r: int):
        super().__init__()
        self.base, self.r = base, r
        self.shift = base.shift

    def _image(self, mu):
        scale = nabla_eigenvalue(mu) ** (-self.r)
        return {lam: c * scale * nabla_eigenvalue(lam) ** self.r
                for lam, c in self.base.on_basis(mu).items()}


class Adjoint(HallOperator):
    """``scalar * base^dagger`` for the Macdonald inner product."""

    def __init__(self, base: HallOperator, scalar=ONE):
        super().__init__()
        self.base, self.scalar = base, scalar
        self.shift = -base.shift

    def _image(self, lam):
        d = lam.size - self.base.shift
        if d < 0:
            return {}
        nl = _mac_norm_M(lam)
        out = {}
        for mu in enumerate_partitions(d):
            a = self.base.on_basis(mu).get(lam)
            if a is not None:
                out[mu] = self.scalar * a * nl / _mac_norm_M(mu)
        return out


def infinity_eigenvalue(lam, origin: int = 1) -> QTRational:
    """Regularized ``sum_i q^(lam_i - 1) t^-i`` with the tail summed as a geometric series.

    ``origin`` is the index of the first part (1 or 0).
    """
    lam = Partition(lam)
    ell = len(lam)
    acc = ZERO
    for i, part in enumerate(lam, start=origin):
        acc = acc + q ** (part - 1) * t ** (-i)
    first_empty = ell + origin
    return acc + q ** (-1) * t ** (-first_empty) / (1 - t ** (-1))


class DiagonalInfinity(HallOperator):
    def __init__(self, k: int, origin: int = 1):
        super().__init__()
        self.k, self.origin = k, origin
        self.shift = 0

    def _image(self, mu):
        return {mu: infinity_eigenvalue(mu, self.origin)}


class Compose(HallOperator):
    """``ops[0] o ops[1] o ...`` (rightmost applied first)."""

    def __init__(self, ops):
        super().__init__()
        self.ops = list(ops)
        self.shift = sum(o.shift for o in self.ops)

    def _image(self, mu):
        cur = {mu: ONE}
        for op in reversed(self.ops):
            nxt: dict[Partition, QTRational] = {}
            for nu, c in cur.items():
                for lam, a in op.on_basis(nu).items():
                    nxt[lam] = nxt.get(lam, ZERO) + c * a
            cur = nxt
        return cur


class Combination(HallOperator):
    """``sum c_i op_i`` over operators of equal shift."""

    def __init__(self, terms):
        super().__init__()
        self.terms = [(c, op) for c, op in terms]
        shifts = {op.shift for _, op in self.terms}
        if len(shifts) > 1:
            raise ValueError("cannot add operators of different degree shifts")
        self.shift = shifts.pop() if shifts else 0

    def _image(self, mu):
        out: dict[Partition, QTRational] = {}
        for c, op in self.terms:
            for lam, a in op.on_basis(mu).items():
                out[lam] = out.get(lam, ZERO) + c * a
        return out


def act(op: HallOperator, f: SymFunc) -> SymFunc:
    return op.apply(f)


# --------------------------------------------------------------------------
# generators


def _power_sum(k: int) -> SymFunc:
    return SymFunc.basis_element("p", [k])


def _elementary(k: int) -> SymFunc:
    return SymFunc.basis_element("e", [k])


@lru_cache(maxsize=None)
def p_operator(k: int, m: int, n: int, route: str = "kernel") -> HallOperator:
    """``p_k^{m/n}``; ``route="nabla"`` (only for n = 1) conjugates multiplication by ``p_k``."""
    if route == "kernel":
        return KernelAction(ShuffleKernel("P", k, m, n))
    if route == "nabla":
        if n != 1:
            raise ValueError("the nabla route needs an integer slope")
        return NablaConjugate(MultiplyBy(_power_sum(k)), m)
    raise ValueError(f"unknown route {route!r}")


@lru_cache(maxsize=None)
def e_operator(k: int, m: int, n: int, route: str = "kernel") -> HallOperator:
    if route == "kernel":
        return KernelAction(ShuffleKernel("E", k, m, n))
    if route == "nabla":
        if n != 1:
            raise ValueError("the nabla route needs an integer slope")
        return NablaConjugate(MultiplyBy(_elementary(k)), m)
    raise ValueError(f"unknown route {route!r}")


def p_action(k, m, n, f: SymFunc, route: str = "kernel") -> SymFunc:
    return p_operator(k, m, n, route).apply(f)


def e_action(k, m, n, f: SymFunc, route: str = "kernel") -> SymFunc:
    return e_operator(k, m, n, route).apply(f)


def negative_scalar(k: int, n: int, printed: bool = False) -> QTRational:
    """Scalar turning ``(p_k^{-m/n})^dagger`` into ``p_{-k}^{m/n}``.

    ``p_{-kn,-km} = -(p_{kn,-km})^dagger (s/q)^(kn)`` and
    ``p_{-k}^{m/n} = p_{-kn,-km} * (-s^(+-k) (1 - t^k) / (1 - q^-k))``.
    The default uses ``s^-k``; ``printed=True`` uses ``s^k``.
    """
    sk = s ** k if printed else s ** (-k)
    return (s / q) ** (k * n) * sk * (1 - t ** k) / (1 - q ** (-k))


@lru_cache(maxsize=None)
def negative_p_operator(k: int, m: int, n: int, printed: bool = False) -> HallOperator:
    return Adjoint(KernelAction(ShuffleKernel("P", k, -m, n)), negative_scalar(k, n, printed))


@lru_cache(maxsize=None)
def negative_e_operator(k: int, m: int, n: int, printed: bool = False) -> HallOperator:
    """``e_{-k}^{m/n}``: the polynomial expressing ``e_k`` in power sums, applied to ``p_{-j}``."""
    ek = convert(_elementary(k), "p")
    terms = []
    for rho, c in ek.items():
        terms.append((c, Compose([negative_p_operator(j, m, n, printed) for j in rho])))
    return Combination(terms)


def negative_e_action(k, m, n, f: SymFunc, printed: bool = False) -> SymFunc:
    return negative_e_operator(k, m, n, printed).apply(f)


def commutator_check(op1: HallOperator, op2: HallOperator, d: int, expected=ZERO) -> bool:
    """``[op1, op2] M_lam == expected * M_lam`` for every ``|lam| <= d``."""
    expected = expected if isinstance(expected, QTRational) else QTRational.from_fraction(expected)
    for size in range(d + 1):
        for lam in enumerate_partitions(size):
            a = Compose([op1, op2]).on_basis(lam)
            b = Compose([op2, op1]).on_basis(lam)
            diff = {k: a.get(k, ZERO) - b.get(k, ZERO) for k in set(a) | set(b)}
            want = {lam: expected} if not expected.is_zero() else {}
            got = {k: v for k, v in diff.items() if not v.is_zero()}
            if got != want:
                return False
    return True
