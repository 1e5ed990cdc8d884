"""Shuffle-algebra kernels and their evaluation at box weights.

A kernel ``R(z_1..z_N)`` is the symmetrization (plain sum over ``S_N``) of a
single product.  Kernels are never expanded symbolically; they are only
evaluated.

Two independent routes evaluate a kernel at the box weights of a skew shape,
where individual terms of the symmetrization have poles:

* ``reference``: weights are deformed by ``eps^row``, every one of the ``N!``
  terms is expanded as a Laurent series in ``eps - 1`` and the sum is reduced
  with :func:`~mnpieri.qt.limit_at_one`.
* ``fast``: all terms are written over the common denominator
  ``V(z) D(z)`` (Vandermonde times ``prod_{i!=j}(t z_j - q z_i)``), so only the
  antisymmetrized numerator has to be summed.  Arrangements that put a box
  before its right neighbour vanish identically and are never visited; the
  Taylor coefficients in ``d = eps - 1`` are integer polynomials in ``q`` and
  ``u = 1/t``.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .qt import ONE, ZERO, EpsRational, PoleAtTarget, QTRational, limit_at_one, q, t
from .shapes import Partition, SkewShape

__all__ = [
    "ShuffleKernel",
    "EvaluationPoint",
    "omega",
    "kernel_term",
    "sym_evaluate",
    "wheel_check",
    "phi_norm_kernel",
    "phi_exponent2",
    "coproduct_limit",
    "xi_degree",
    "invert_check",
    "eval_hook",
    "hook",
    "evaluate_generic",
    "evaluate_cleared",
    "antisymmetric_numerator",
    "invert_check_generic",
    "shuffle_product_eval",
    "parse_kernel",
]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class ShuffleKernel:
    """``P_k^{m/n}`` (family ``"P"``) or ``E_k^{m/n}`` (family ``"E"``).

    ``corrupt`` raises the exponent of ``q`` in the numerator factor
    ``(1 - xq)`` of every ``omega``.  It exists only to build deliberately
    broken kernels for negative controls.
    """

    family: str
    k: int
    m: int
    n: int
    corrupt: int = 0

    def __post_init__(self):
        if self.family not in ("P", "E"):
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.n < 1 or self.k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        if math.gcd(self.m, self.n) != 1:
            raise ValueError(f"gcd({self.m}, {self.n}) != 1")

    @property
    def N(self) -> int:
        return self.k * self.n

    @property
    def M(self) -> int:
        return self.k * self.m

    def r(self, i: int) -> int:
        """Exponent of ``z_i`` (1-based) in the monomial prefactor."""
        m, n = self.m, self.n
        return _ceil_div(m * i, n) - _ceil_div(m * (i - 1), n)

    def with_slope(self, m: int) -> "ShuffleKernel":
        return ShuffleKernel(self.family, self.k, m, self.n)

    def __str__(self):
        return f"{self.family}[k={self.k},m={self.m},n={self.n}]"


_DESC_RE = re.compile(r"^\s*([PE])\s*\[\s*k\s*=\s*(\d+)\s*,\s*m\s*=\s*(-?\d+)\s*,\s*n\s*=\s*(\d+)\s*\]\s*$")


def parse_kernel(text: str) -> ShuffleKernel:
    mt = _DESC_RE.match(text)
    if not mt:
        raise ValueError(f"bad kernel descriptor {text!r}; expected like E[k=2,m=1,n=2]")
    fam, k, m, n = mt.groups()
    return ShuffleKernel(fam, int(k), int(m), int(n))


# --------------------------------------------------------------------------
# evaluation points


@dataclass(frozen=True)
class EvaluationPoint:
    """Rows of boxes; row ``i`` has weights ``q^a t^b * q^j`` for ``j < length``.

    ``rows`` holds ``(a, b, length)`` with integer exponents ``a, b``.
    ``eps`` gives the deformation exponent of each row (default: its index).
    """

    rows: tuple
    eps: tuple | None = None

    def __post_init__(self):
        rows = tuple((int(a), int(b), int(l)) for a, b, l in self.rows if int(l) > 0)
        object.__setattr__(self, "rows", rows)
        eps = tuple(range(len(rows))) if self.eps is None else tuple(int(e) for e in self.eps)
        if len(eps) != len(rows):
            raise ValueError("one deformation exponent per row is required")
        if len(set(eps)) != len(eps):
            raise ValueError("deformation exponents must be injective on rows")
        object.__setattr__(self, "eps", eps)
        ws = self.weight_exponents()
        if len(set(ws)) != len(ws):
            raise ValueError("evaluation point repeats a box weight")

    @classmethod
    def from_shape(cls, sh, eps: Sequence[int] | None = None) -> "EvaluationPoint":
        """Rows of a skew shape; row ``y`` is deformed by ``eps^y`` by default."""
        if not isinstance(sh, SkewShape):
            sh = SkewShape(Partition(sh))
        rows, es = [], []
        for y in range(len(sh.outer)):
            lo, hi = sh.inner.part(y), sh.outer.part(y)
            if hi > lo:
                rows.append((lo, -y, hi - lo))
                es.append(y)
        if eps is not None:
            es = list(eps)
        return cls(tuple(rows), tuple(es))

    @classmethod
    def single_row(cls, length: int) -> "EvaluationPoint":
        return cls(((0, 0, length),))

    @property
    def size(self) -> int:
        return sum(l for _, _, l in self.rows)

    def weight_exponents(self) -> list[tuple[int, int]]:
        return [(a + j, b) for a, b, l in self.rows for j in range(l)]

    def weights(self) -> list[QTRational]:
        return [QTRational.monomial(2 * a, 2 * b) for a, b in self.weight_exponents()]

    def boxes(self) -> list[tuple[int, int, int, int]]:
        """``(qexp, texp, row_index, eps_exponent)`` per box."""
        return [(a + j, b, i, self.eps[i])
                for i, (a, b, l) in enumerate(self.rows) for j in range(l)]

    def permuted(self, order: Sequence[int]) -> "EvaluationPoint":
        return EvaluationPoint(tuple(self.rows[i] for i in order), tuple(self.eps[i] for i in order))

    def scaled(self, a: int, b: int) -> "EvaluationPoint":
        return EvaluationPoint(tuple((x + a, y + b, l) for x, y, l in self.rows), self.eps)

    def __str__(self):
        return ";".join(f"q^{a}t^{b}x{l}" for a, b, l in self.rows)


# --------------------------------------------------------------------------
# the kernel formula, generic over the coefficient domain


def omega(x, qv=q, tv=t, corrupt: int = 0):
    """``(1 - xq)(t - x) / ((1 - x)(t - xq))``."""
    one = qv ** 0
    return (one - x * qv ** (1 + corrupt)) * (tv - x) / ((one - x) * (tv - x * qv))


def _qint(x: int, tv):
    """``[x]_t = t^(1-x) - t``."""
    return tv ** (1 - x) - tv


def _prefactor(K: ShuffleKernel, qv, tv):
    one = qv ** 0
    c = ((one - tv) * (one - qv) / (tv - qv)) ** K.N
    if K.family == "E":
        fact = one
        for x in range(1, K.k + 1):
            fact = fact * _qint(x, tv)
        return c / fact
    return c / (one - tv ** K.k)


def kernel_term(K: ShuffleKernel, zs: Sequence, qv=q, tv=t):
    """The summand of the symmetrization at ``z_i = zs[i-1]``.

    ``zs``, ``qv`` and ``tv`` may live in any field (QTRational, Fraction,
    Laurent series ...) that supports ``+ - * /`` and integer powers.
    """
    N, n, k = K.N, K.n, K.k
    if len(zs) != N:
        raise ValueError(f"{K} takes {N} variables, got {len(zs)}")
    one = qv ** 0
    z = [None] + list(zs)
    val = _prefactor(K, qv, tv)
    for i in range(1, N + 1):
        e = K.r(i)
        if e:
            val = val * z[i] ** e
    if K.family == "E":
        for i in range(1, k):
            val = val * (one - z[i * n] / (qv * tv ** (i - 1) * z[i * n + 1]))
    else:
        acc = None
        for i in range(k):
            term = (tv / qv) ** i
            for a in range(1, i + 1):
                term = term * z[a * n] / z[a * n + 1]
            acc = term if acc is None else acc + term
        val = val * acc
    for i in range(1, N):
        val = val / (one - tv * z[i] / (qv * z[i + 1]))
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            val = val * omega(z[i] / z[j], qv, tv, K.corrupt)
    return val


def _numerator_term(K: ShuffleKernel, zs: Sequence, qv, tv):
    """``G(z)``: one term of the numerator over ``V(z) * D(z)``.

    ``R = sum_sigma sgn(sigma) G(z_sigma) / (V(z) D(z))`` with
    ``V = prod_{i<j}(z_j - z_i)`` and ``D = prod_{i != j}(t z_j - q z_i)``.
    Only ring operations and inverses of the ``z_i`` are used.
    """
    N, n, k = K.N, K.n, K.k
    one = qv ** 0
    z = [None] + list(zs)
    val = _prefactor(K, qv, tv) * (-one) ** (N - 1) * qv ** (N - 1)
    for i in range(1, N + 1):
        e = K.r(i) + (1 if i >= 2 else 0)
        if e:
            val = val * z[i] ** e
    if K.family == "E":
        for i in range(1, k):
            val = val * (qv * tv ** (i - 1) * z[i * n + 1] - z[i * n]) / (qv * tv ** (i - 1)) / z[i * n + 1]
    else:
        acc = None
        for i in range(k):
            term = (tv / qv) ** i
            for a in range(1, i + 1):
                term = term * z[a * n] / z[a * n + 1]
            acc = term if acc is None else acc + term
        val = val * acc
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            val = val * (z[j] - qv ** (1 + K.corrupt) * z[i]) * (tv * z[j] - z[i])
            if j != i + 1:
                val = val * (tv * z[i] - qv * z[j])
    return val


def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _vandermonde(zs):
    v = zs[0] ** 0
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            v = v * (zs[j] - zs[i])
    return v


def _d_product(zs, qv, tv):
    v = zs[0] ** 0
    for i in range(len(zs)):
        for j in range(len(zs)):
            if i != j:
                v = v * (tv * zs[j] - qv * zs[i])
    return v


def antisymmetric_numerator(K: ShuffleKernel, zs: Sequence, qv, tv):
    """``A(z) = sum_sigma sgn(sigma) G(z_sigma)``; a Laurent polynomial in ``z``."""
    acc = None
    for p in itertools.permutations(range(len(zs))):
        g = _numerator_term(K, [zs[i] for i in p], qv, tv)
        if _perm_sign(p) < 0:
            g = -g
        acc = g if acc is None else acc + g
    return acc


def evaluate_generic(K: ShuffleKernel, zs: Sequence, qv=q, tv=t):
    """``R(zs)`` by direct summation; ``zs`` must avoid every pole of every term."""
    acc = None
    for p in itertools.permutations(range(len(zs))):
        v = kernel_term(K, [zs[i] for i in p], qv, tv)
        acc = v if acc is None else acc + v
    return acc


def evaluate_cleared(K: ShuffleKernel, zs: Sequence, qv=q, tv=t):
    """``R(zs) = A(zs) / (V D)``; valid wherever ``V D`` is nonzero."""
    return antisymmetric_numerator(K, zs, qv, tv) / (_vandermonde(list(zs)) * _d_product(list(zs), qv, tv))


# --------------------------------------------------------------------------
# reference route: Laurent series in d = eps - 1 with QTRational coefficients


class _DSeries:
    """``d^val * (c[0] + c[1] d + ...)`` truncated to ``len(c)`` terms; ``c[0] != 0``."""

    __slots__ = ("val", "c")

    def __init__(self, val: int, c: list):
        self.val, self.c = val, c

    @classmethod
    def from_eps(cls, f: EpsRational, prec: int) -> "_DSeries":
        if not f.num:
            return cls(0, [])
        v, c = f.laurent_at_one(prec)
        return cls(v, c)

    def is_zero(self) -> bool:
        return not self.c

    def _prec(self) -> int:
        return len(self.c)

    def __mul__(self, o):
        if not isinstance(o, _DSeries):
            o = _DSeries(0, [_as_qt(o)] + [ZERO] * (self._prec() - 1))
        if self.is_zero() or o.is_zero():
            return _DSeries(0, [])
        L = min(len(self.c), len(o.c))
        out = [ZERO] * L
        for i in range(L):
            a = self.c[i]
            if a.is_zero():
                continue
            for j in range(L - i):
                if not o.c[j].is_zero():
                    out[i + j] = out[i + j] + a * o.c[j]
        return _DSeries(self.val + o.val, out)

    __rmul__ = __mul__

    def inverse(self) -> "_DSeries":
        if self.is_zero():
            raise ZeroDivisionError("series is zero to working precision")
        c = self.c
        inv0 = c[0].inverse()
        out = []
        for k in range(len(c)):
            acc = ONE if k == 0 else ZERO
            for j in range(1, k + 1):
                acc = acc - c[j] * out[k - j]
            out.append(acc * inv0)
        return _DSeries(-self.val, out)

    def __truediv__(self, o):
        if not isinstance(o, _DSeries):
            return self * _as_qt(o).inverse()
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = _DSeries(0, [ONE] + [ZERO] * (self._prec() - 1))
        for _ in range(e):
            out = out * self
        return out

    def __neg__(self):
        return _DSeries(self.val, [-x for x in self.c])

    def __add__(self, o):
        if not isinstance(o, _DSeries):
            o = _DSeries(0, [_as_qt(o)] + [ZERO] * (self._prec() - 1))
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        lo = min(self.val, o.val)
        hi = min(self.val + len(self.c), o.val + len(o.c))
        coeffs = [ZERO] * (hi - lo)
        for s in (self, o):
            for i, x in enumerate(s.c):
                if s.val + i < hi:
                    coeffs[s.val + i - lo] = coeffs[s.val + i - lo] + x
        k = 0
        while k < len(coeffs) and coeffs[k].is_zero():
            k += 1
        if k == len(coeffs):
            return _DSeries(0, [])
        # relative precision shrinks by the cancellation
        return _DSeries(lo + k, coeffs[k:])

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-o if isinstance(o, _DSeries) else -_as_qt(o))

    def __rsub__(self, o):
        return (-self) + o


def _as_qt(x) -> QTRational:
    return x if isinstance(x, QTRational) else QTRational.from_fraction(Fraction(x))


def _diag_pairs(boxes) -> int:
    """Ordered pairs ``(a, b)`` with ``chi_b = q chi_a / t``."""
    s = {(x, y) for x, y, *_ in boxes}
    return sum(1 for x, y, *_ in boxes if (x + 1, y - 1) in s)


def _reference_precision(boxes) -> int:
    """Relative precision that survives every cancellation inside one term.

    Only factors pairing diagonal (pole) or vertical (zero) neighbours vanish
    at eps = 1; each such factor costs one coefficient.
    """
    s = {(x, y) for x, y, *_ in boxes}
    vert = sum(1 for x, y, *_ in boxes if (x, y - 1) in s)
    return 2 * _diag_pairs(boxes) + vert + 2


def _sym_evaluate_reference(K: ShuffleKernel, pt: EvaluationPoint) -> QTRational:
    boxes = pt.boxes()
    N = len(boxes)
    prec = _reference_precision(boxes)
    zs = [_DSeries.from_eps(EpsRational.eps_monomial(QTRational.monomial(2 * a, 2 * b), e), prec)
          for a, b, _, e in boxes]
    qs = _DSeries(0, [q] + [ZERO] * (prec - 1))
    ts = _DSeries(0, [t] + [ZERO] * (prec - 1))
    total = _DSeries(0, [])
    for p in itertools.permutations(range(N)):
        total = total + kernel_term(K, [zs[i] for i in p], qs, ts)
    if total.is_zero():
        return ZERO
    if total.val > 0:
        return ZERO
    # package sum_{j<=0} c_j d^j as an eps-rational over (eps - 1)^K
    order = -total.val
    num = [ZERO]
    for j in range(order + 1):
        cj = total.c[j] if j < len(total.c) else None
        if cj is None:
            raise ArithmeticError("insufficient precision in reference evaluation")
        term = [cj]
        for _ in range(j):
            term = _poly_mul(term, [-ONE, ONE])
        num = _poly_add(num, term)
    den = [ONE]
    for _ in range(order):
        den = _poly_mul(den, [-ONE, ONE])
    return limit_at_one(EpsRational(num, den))


def _poly_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)]


# --------------------------------------------------------------------------
# fast route: integer polynomials in q and u = 1/t


_ZCTX = flint.fmpz_mpoly_ctx.get(("q", "u"), "lex")
_Z0 = _ZCTX.from_dict({})
_Z1 = _ZCTX.from_dict({(0, 0): 1})


def _zmono(a: int, b: int, c: int = 1):
    return _ZCTX.from_dict({(a, b): c})


def _smul(a: list, b: list, L: int) -> list:
    out = [_Z0] * L
    for i in range(min(len(a), L)):
        x = a[i]
        if x.is_zero():
            continue
        for j in range(min(len(b), L - i)):
            y = b[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _to_qt(p) -> QTRational:
    """``q^a u^b -> q^a t^-b``."""
    return QTRational.from_terms({(2 * int(m[0]), -2 * int(m[1])): int(c) for m, c in zip(p.monoms(), p.coeffs())})


class _FastEvaluator:
    """Evaluates ``R`` at the (shifted, nonnegative) box weights of a point."""

    def __init__(self, K: ShuffleKernel, boxes: list):
        self.K = K
        self.N = len(boxes)
        self.boxes = boxes                      # (a, b, row, eps) with a, b >= 0 in (q, u)
        self.v = _diag_pairs([(a, -b) for a, b, _, _ in boxes])
        self.L = self.v + 1
        self.chi = [_zmono(a, b) for a, b, _, _ in boxes]
        self.eps = [e for *_, e in boxes]
        N, n, k = self.N, K.n, K.k
        exps = [K.r(i) + (1 if i >= 2 else 0) for i in range(1, N + 1)]
        self.special = {a * n + 1: a for a in range(1, k)}   # 1-based positions
        for p in self.special:
            exps[p - 1] -= 1
        self.K_shift = max(0, -min(exps))
        self.exps = [e + self.K_shift for e in exps]
        # a box placed at position p needs its right neighbour in the same row placed first
        idx = {(a, row): i for i, (a, b, row, _) in enumerate(boxes)}
        self.right = [idx.get((a + 1, row)) for a, b, row, _ in boxes]
        self._pair_cache: dict = {}
        self._mono_cache: dict = {}

    # series of simple factors ------------------------------------------
    def _lin(self, ca, i, cb, j):
        """``ca*z_i - cb*z_j`` as ``(val, unit)`` or None when zero to precision."""
        key = (ca, i, cb, j)
        hit = self._pair_cache.get(key)
        if hit is not None or key in self._pair_cache:
            return hit
        A = _zmono(*ca) * self.chi[i]
        B = _zmono(*cb) * self.chi[j]
        ei, ej = self.eps[i], self.eps[j]
        coeffs = [A * math.comb(ei, d) - B * math.comb(ej, d) for d in range(self.L)]
        res = None
        for s, c in enumerate(coeffs):
            if not c.is_zero():
                res = (s, coeffs[s:])
                break
        self._pair_cache[key] = res
        return res

    def _mono(self, i, e):
        key = (i, e)
        hit = self._mono_cache.get(key)
        if hit is None:
            base = self.chi[i] ** e
            hit = [base * math.comb(e * self.eps[i], d) for d in range(self.L)]
            self._mono_cache[key] = hit
        return hit

    def _f_series(self, order, L):
        """The P-family geometric-sum numerator at the arrangement ``order``."""
        n, k = self.K.n, self.K.k
        acc = [_Z0] * L
        for i in range(k):
            s = [_zmono(k - 1 - i, k - 1 - i)] + [_Z0] * (L - 1)
            for a in range(1, i + 1):
                s = _smul(s, self._mono(order[a * n - 1], 1), L)
            for a in range(i + 1, k):
                s = _smul(s, self._mono(order[a * n], 1), L)
            acc = [x + y for x, y in zip(acc, s)]
        return acc

    # main loop ----------------------------------------------------------
    def numerator(self) -> list:
        """Coefficients ``[d^0 .. d^v]`` of ``sum_sigma sgn(sigma) G~(z_sigma)``."""
        N, L, v = self.N, self.L, self.v
        total = [_Z0] * L
        placed = [False] * N
        order: list[int] = []
        q1, u1, qu = (1, 0), (0, 1), (1, 1)
        E = self.K.family == "E"

        def rec(val, unit, sign):
            p = len(order) + 1          # 1-based position being filled
            if p > N:
                series = unit
                if not E:
                    f = self._f_series(order, L - val)
                    series = _smul(unit, f, L - val)
                for j, c in enumerate(series):
                    if not c.is_zero():
                        total[val + j] = total[val + j] + (c if sign > 0 else -c)
                return
            for b in range(N):
                if placed[b]:
                    continue
                r = self.right[b]
                if r is not None and not placed[r]:
                    continue
                nval = val
                U = _smul(unit, self._mono(b, self.exps[p - 1]), L - val)
                ok = True
                facs = []
                for pos, a in enumerate(order, start=1):
                    facs.append(self._lin((0, 0), b, q1, a))          # z_p - q z_i
                    facs.append(self._lin((0, 0), b, u1, a))          # z_p - u z_i
                    if pos < p - 1:
                        facs.append(self._lin((0, 0), a, qu, b))      # z_i - q u z_p
                if E and p in self.special:
                    lvl = self.special[p]
                    facs.append(self._lin(q1, b, (0, lvl - 1), order[-1]))
                for f in facs:
                    if f is None:
                        ok = False
                        break
                    nval += f[0]
                    if nval > v:
                        ok = False
                        break
                if not ok:
                    continue
                for f in facs:
                    U = _smul(U, f[1], L - nval)
                inv = sum(1 for a in order if a > b)
                placed[b] = True
                order.append(b)
                rec(nval, U[: L - nval], -sign if inv % 2 else sign)
                order.pop()
                placed[b] = False

        rec(0, [_Z1] + [_Z0] * (L - 1), 1)
        return total

    def denominator(self) -> list:
        """Coefficients of ``V(z) * D~(z)`` with ``D~ = prod_{i!=j}(z_j - q u z_i)``."""
        N, L = self.N, self.L
        val, U = 0, [_Z1] + [_Z0] * (L - 1)
        for i in range(N):
            for j in range(N):
                facs = []
                if i < j:
                    facs.append(self._lin((0, 0), j, (0, 0), i))
                if i != j:
                    facs.append(self._lin((0, 0), j, (1, 1), i))
                for f in facs:
                    if f is None:
                        raise PoleAtTarget("repeated box weight")
                    val += f[0]
                    if val <= self.v:
                        U = _smul(U, f[1], L - val)
        if val != self.v:
            raise ArithmeticError("unexpected pole order")
        return U

    def constant(self) -> QTRational:
        K, N = self.K, self.N
        c = _prefactor(K, q, t) * (-q / t) ** (N - 1)
        if K.family == "E":
            c = c * q ** (-(K.k - 1))
        else:
            c = c * (t / q) ** (K.k - 1)
        if self.K_shift:
            prod = ONE
            for x in self.chi:
                prod = prod * _to_qt(x)
            c = c / prod ** self.K_shift
        return c

    def evaluate(self) -> QTRational:
        num = self.numerator()
        for j in range(self.v):
            if not num[j].is_zero():
                raise PoleAtTarget(f"pole of order {self.v - j} at the target weights")
        den = self.denominator()
        return self.constant() * _to_qt(num[self.v]) / _to_qt(den[0])


def _sym_evaluate_fast(K: ShuffleKernel, pt: EvaluationPoint) -> QTRational:
    if K.corrupt:
        raise ValueError("the fast route only handles genuine kernels")
    boxes = pt.boxes()
    # to (q, u) exponents, then shift everything into the positive quadrant
    raw = [(a, -b, row, e) for a, b, row, e in boxes]
    sa = -min(a for a, *_ in raw)
    sb = -min(b for _, b, *_ in raw)
    se = -min(e for *_, e in raw)
    shifted = [(a + sa, b + sb, row, e + se) for a, b, row, e in raw]
    val = _FastEvaluator(K, shifted).evaluate()
    # undo the scaling z -> q^sa u^sb z, homogeneous of degree M
    return val * (q ** (-sa) * t ** sb) ** K.M


def sym_evaluate(K: ShuffleKernel, pt, method: str = "fast") -> QTRational:
    """``R(lambda/mu)``: the kernel at the box weights of ``pt``.

    ``pt`` may be an :class:`EvaluationPoint`, a :class:`SkewShape` or a
    partition.  ``method`` is ``"fast"`` or ``"reference"``.
    """
    if not isinstance(pt, EvaluationPoint):
        pt = EvaluationPoint.from_shape(pt)
    if pt.size != K.N:
        raise ValueError(f"{K} needs {K.N} boxes, the point has {pt.size}")
    if method == "fast":
        return _sym_evaluate_fast(K, pt)
    if method == "reference":
        return _sym_evaluate_reference(K, pt)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# checks and derived quantities


def _rand_frac(rng: random.Random) -> Fraction:
    while True:
        f = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
        if f not in (0, 1, -1):
            return f


WHEELS = ((lambda z, qv, tv: (z, z / qv, tv * z / qv)),
          (lambda z, qv, tv: (z, z / tv, qv * z / tv)))


def wheel_check(K: ShuffleKernel, trials: int = 20, seed: int = 0) -> bool:
    """Randomized exact test of the wheel conditions for the cleared numerator.

    ``q``, ``t`` and the free variables are random rationals.  Since
    ``r = R * D`` and ``R = A / (V D)``, ``r`` vanishes exactly when the
    antisymmetric numerator ``A`` does (``V`` is nonzero at distinct points).
    Each trial tests both wheels; degenerate draws are redrawn, not skipped.
    """
    if K.N < 3:
        return True
    rng = random.Random(seed)

    def draw():
        f = _rand_frac(rng)
        return flint.fmpq(f.numerator, f.denominator)

    done = 0
    while done < trials:
        qv, tv = draw(), draw()
        if qv == tv:
            continue
        points = []
        for wheel in WHEELS:
            zs = list(wheel(draw(), qv, tv)) + [draw() for _ in range(K.N - 3)]
            points.append(zs)
        if any(len(set(zs)) < len(zs) for zs in points):
            continue
        if any(antisymmetric_numerator(K, zs, qv, tv) != 0 for zs in points):
            return False
        done += 1
    return True


def phi_exponent2(K: ShuffleKernel) -> int:
    """Twice the exponent ``-(MN - M + N - k)/2`` of ``q`` in the normalizer."""
    M, N = K.M, K.N
    return -(M * N - M + N - K.k)


def phi_norm_kernel(K: ShuffleKernel, method: str = "fast") -> QTRational:
    val = sym_evaluate(K, EvaluationPoint.single_row(K.N), method)
    norm = QTRational.monomial(phi_exponent2(K), 0)
    for i in range(1, K.N + 1):
        norm = norm * (t - q ** i) / (1 - q ** i)
    return val * norm


def _leading(f: QTRational) -> tuple[Fraction, Fraction]:
    """Degree in ``q`` and leading coefficient of a rational function of ``q`` alone."""
    nt, dt = f.num_terms(), f.den_terms()
    if f.is_zero():
        return Fraction(-10 ** 9), Fraction(0)
    nd = max(e for e, _ in nt)
    dd = max(e for e, _ in dt)
    return Fraction(nd - dd, 2), nt[(nd, 0)] / dt[(dd, 0)]


def _xi_value(K: ShuffleKernel, zs, scaled: int, qv: Fraction, tv: Fraction) -> QTRational:
    """``R`` with the first ``scaled`` variables multiplied by ``xi``, as a function of ``xi``.

    ``xi`` is carried by the ``q`` variable of QTRational.
    """
    xi = q
    vals = [xi * z if i < scaled else QTRational.from_fraction(z) for i, z in enumerate(zs)]
    qq, tt = QTRational.from_fraction(qv), QTRational.from_fraction(tv)
    return evaluate_cleared(K, vals, qq, tt)


def xi_degree(K: ShuffleKernel, scaled: int, zs: Sequence[Fraction], qv: Fraction, tv: Fraction) -> Fraction:
    """Growth degree in ``xi`` after scaling the first ``scaled`` variables."""
    return _leading(_xi_value(K, zs, scaled, qv, tv))[0]


def coproduct_limit(K: ShuffleKernel, l: int, left: Sequence[Fraction], right: Sequence[Fraction],
                    qv: Fraction, tv: Fraction) -> Fraction:
    """``lim_{xi -> oo} R(xi*left, right) / xi^(m l)`` at numeric ``q, t``.

    Raises ``ArithmeticError`` when the limit is infinite.
    """
    if not 0 < l < K.k:
        raise ValueError("need 0 < l < k")
    if len(left) != l * K.n or len(right) != (K.k - l) * K.n:
        raise ValueError("left/right sizes must be l*n and (k-l)*n")
    f = _xi_value(K, list(left) + list(right), len(left), qv, tv)
    deg, lead = _leading(f)
    target = K.m * l
    if deg > target:
        raise ArithmeticError(f"xi-degree {deg} exceeds {target}")
    return lead if deg == target else Fraction(0)


def invert_check(K: ShuffleKernel, pt: EvaluationPoint, method: str = "fast") -> bool:
    """``R_m`` at inverted weights equals ``R_{-m}`` at the weights."""
    inv = EvaluationPoint(tuple((-a - l + 1, -b, l) for a, b, l in pt.rows), pt.eps)
    return sym_evaluate(K, inv, method) == sym_evaluate(K.with_slope(-K.m), pt, method)


def invert_check_generic(K: ShuffleKernel, zs: Sequence[Fraction], qv: Fraction, tv: Fraction) -> bool:
    """The same identity at generic numeric points."""
    lhs = evaluate_cleared(K, [1 / z for z in zs], qv, tv)
    rhs = evaluate_cleared(K.with_slope(-K.m), list(zs), qv, tv)
    return lhs == rhs


def hook(k: int, n: int, l: int) -> Partition:
    return Partition([n * k - l + 1] + [1] * (l - 1))


def eval_hook(k: int, m: int, n: int, l: int) -> QTRational:
    """Closed form for ``P_k^{m/n}`` at the hook ``(nk-l+1, 1^(l-1))``."""
    if not 1 <= l <= k * n or math.gcd(m, n) != 1 or n < 1 or k < 1:
        raise ValueError("need 1 <= l <= kn, n, k >= 1 and gcd(m, n) = 1")
    N = n * k
    s = ZERO
    for i in range(n):
        qe = sum((m * j + i) // n for j in range(1, N - l + 1))
        te = -sum(_ceil_div(m * j - i, n) for j in range(1, l))
        s = s + QTRational.monomial(2 * qe, 2 * te)
    c = (1 - q ** (-k)) / (1 - t / q)
    for i in range(1, N - l + 1):
        c = c * (1 - q ** (-i)) / (1 - q ** (-i - 1) * t)
    for i in range(1, l):
        c = c * (1 - t ** i) / (1 - t ** (i + 1) / q)
    return s * c


def shuffle_product_eval(K1: ShuffleKernel, K2: ShuffleKernel, pt, method: str = "fast") -> QTRational:
    """``(R1 * R2)`` at ``pt``, summing over splits of the boxes.

    Each split ``S1 | S2`` occurs ``N1! N2!`` times in the symmetrization.
    Individual splits may be singular, so the splits are combined on the
    deformed weights as Laurent series.
    """
    if not isinstance(pt, EvaluationPoint):
        pt = EvaluationPoint.from_shape(pt)
    N1, N2 = K1.N, K2.N
    boxes = pt.boxes()
    if len(boxes) != N1 + N2:
        raise ValueError("box count must be N1 + N2")
    prec = _reference_precision(boxes) + _diag_pairs(boxes)
    zs = [_DSeries.from_eps(EpsRational.eps_monomial(QTRational.monomial(2 * a, 2 * b), e), prec)
          for a, b, _, e in boxes]
    qs = _DSeries(0, [q] + [ZERO] * (prec - 1))
    ts = _DSeries(0, [t] + [ZERO] * (prec - 1))
    total = _DSeries(0, [])
    for S1 in itertools.combinations(range(N1 + N2), N1):
        S2 = [i for i in range(N1 + N2) if i not in S1]
        term = evaluate_generic(K1, [zs[i] for i in S1], qs, ts) * evaluate_generic(K2, [zs[i] for i in S2], qs, ts)
        for i in S1:
            for j in S2:
                term = term * omega(zs[i] / zs[j], qs, ts)
        total = total + term
    total = total * (math.factorial(N1) * math.factorial(N2))
    if total.is_zero() or total.val > 0:
        return ZERO
    if total.val < 0:
        raise PoleAtTarget("shuffle product is singular at the point")
    return total.c[0]
