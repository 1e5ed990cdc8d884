"""Exact arithmetic in Q(q, t) with half-integer exponents.

Values are stored as ``Q^a T^b * num / den`` where ``Q = q^(1/2)`` and
``T = t^(1/2)``, ``num`` and ``den`` are coprime polynomials in ``Q, T`` that
are not divisible by either variable, and ``den`` has leading coefficient 1
in lex order.  This makes the representation unique, so equality and hashing
are structural.
"""

from __future__ import annotations

import re
from math import comb
from fractions import Fraction
from functools import reduce
from typing import Iterable

import flint

__all__ = [
    "QTRational",
    "EpsRational",
    "PoleAtTarget",
    "q",
    "t",
    "s",
    "ONE",
    "ZERO",
    "deg_se",
    "deg_nw",
    "hd",
    "ld",
    "limit_at_one",
    "eval_qt",
    "parse_qt",
]

_CTX = flint.fmpq_mpoly_ctx.get(("Q", "T"), "lex")
_Q, _T = _CTX.gens()
_P1 = _CTX.constant(1)
_P0 = _CTX.constant(0)


class PoleAtTarget(ArithmeticError):
    """Raised when an evaluation or limit hits a genuine pole."""


def _monoms(p) -> list[tuple[int, int]]:
    return [(int(i), int(j)) for i, j in p.monoms()]


def _terms(p):
    return [((int(m[0]), int(m[1])), c) for m, c in p.terms()]


def _mono(a: int, b: int):
    return _CTX.from_dict({(a, b): 1})


def _min_exps(p) -> tuple[int, int]:
    ms = _monoms(p)
    return min(m[0] for m in ms), min(m[1] for m in ms)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _coerce(x) -> "QTRational":
    if isinstance(x, QTRational):
        return x
    if isinstance(x, (int, Fraction)):
        return QTRational.from_fraction(Fraction(x))
    if isinstance(x, str):
        return parse_qt(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to QTRational")


class QTRational:
    """An element of Q(q^(1/2), t^(1/2)), immutable and canonically normalized."""

    __slots__ = ("_n", "_d", "_a", "_b", "_hash")

    def __init__(self, num=None, den=None, a: int = 0, b: int = 0, *, _raw: bool = False):
        if num is None:
            num = _P0
        if den is None:
            den = _P1
        if _raw:
            self._n, self._d, self._a, self._b = num, den, a, b
        else:
            self._n, self._d, self._a, self._b = _normalize(num, den, a, b)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def from_fraction(cls, c: Fraction) -> "QTRational":
        if c == 0:
            return ZERO
        return cls(_CTX.constant(flint.fmpq(c.numerator, c.denominator)), _P1, 0, 0, _raw=True)

    @classmethod
    def monomial(cls, qexp2: int, texp2: int, coeff=1) -> "QTRational":
        """``coeff * q^(qexp2/2) t^(texp2/2)``."""
        c = Fraction(coeff)
        if c == 0:
            return ZERO
        return cls(_CTX.constant(flint.fmpq(c.numerator, c.denominator)), _P1, qexp2, texp2, _raw=True)

    @classmethod
    def qt_monomial(cls, qe, te, coeff=1) -> "QTRational":
        """``coeff * q^qe t^te`` with ``qe, te`` integers or halves."""
        return cls.monomial(_double(qe), _double(te), coeff)

    @classmethod
    def from_terms(cls, terms: dict, den_terms: dict | None = None) -> "QTRational":
        """Build from maps ``(qexp2, texp2) -> coefficient``."""
        n, na, nb = _laurent_to_poly(terms)
        if den_terms is None:
            return cls(n, _P1, na, nb)
        d, da, db = _laurent_to_poly(den_terms)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        return cls(n, d, na - da, nb - db)

    # structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self._n.is_zero()

    def __bool__(self) -> bool:
        return not self._n.is_zero()

    def is_polynomial(self) -> bool:
        """True when the value is a Laurent polynomial."""
        return self._d.is_one()

    def is_constant(self) -> bool:
        return self._d.is_one() and self._a == 0 and self._b == 0 and self._n.total_degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        if self._n.is_zero():
            return Fraction(0)
        return _to_fraction(self._n.leading_coefficient())

    def num_terms(self) -> dict[tuple[int, int], Fraction]:
        """Numerator as a Laurent map ``(qexp2, texp2) -> coeff`` (shift included)."""
        return {(m[0] + self._a, m[1] + self._b): _to_fraction(c) for m, c in _terms(self._n)}

    def den_terms(self) -> dict[tuple[int, int], Fraction]:
        return {tuple(m): _to_fraction(c) for m, c in _terms(self._d)}

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        if not o._n:
            return self
        if not self._n:
            return o
        a, b = min(self._a, o._a), min(self._b, o._b)
        x = self._n * _mono(self._a - a, self._b - b)
        y = o._n * _mono(o._a - a, o._b - b)
        if self._d == o._d:
            return QTRational(x + y, self._d, a, b)
        return QTRational(x * o._d + y * self._d, self._d * o._d, a, b)

    __radd__ = __add__

    def __neg__(self):
        return QTRational(-self._n, self._d, self._a, self._b, _raw=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        if not self._n or not o._n:
            return ZERO
        a, b = self._a + o._a, self._b + o._b
        if self._d.is_one() and o._d.is_one():
            return QTRational(self._n * o._n, _P1, a, b, _raw=True)
        # cross-cancel before multiplying keeps the gcd cheap
        g1 = self._n.gcd(o._d)
        g2 = o._n.gcd(self._d)
        n = (self._n / g1) * (o._n / g2)
        d = (self._d / g2) * (o._d / g1)
        return QTRational(n, d, a, b, _raw=True)

    __rmul__ = __mul__

    def inverse(self) -> "QTRational":
        if not self._n:
            raise ZeroDivisionError("division by zero in Q(q,t)")
        return QTRational(self._d, self._n, -self._a, -self._b)

    def __truediv__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return ONE
        return QTRational(self._n ** e, self._d ** e, self._a * e, self._b * e, _raw=True)

    # comparison / hashing -------------------------------------------------
    def _key(self):
        return (self._a, self._b, str(self._n), str(self._d))

    def __eq__(self, other):
        if isinstance(other, QTRational):
            return (self._a == other._a and self._b == other._b
                    and self._n == other._n and self._d == other._d)
        try:
            return self == _coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    # substitution ---------------------------------------------------------
    def eval_half(self, u: Fraction, v: Fraction) -> Fraction:
        """Evaluate at ``q^(1/2) = u``, ``t^(1/2) = v``."""
        u, v = Fraction(u), Fraction(v)
        den = _peval(self._d, u, v)
        if den == 0 or (u == 0 and self._a < 0) or (v == 0 and self._b < 0):
            raise PoleAtTarget(f"pole of {self} at q^(1/2)={u}, t^(1/2)={v}")
        return _peval(self._n, u, v) * u ** self._a * v ** self._b / den

    def subs_inverse(self) -> "QTRational":
        """The image under ``q -> 1/q, t -> 1/t``."""
        n = self.num_terms()
        d = self.den_terms()
        return QTRational.from_terms({(-i, -j): c for (i, j), c in n.items()},
                                     {(-i, -j): c for (i, j), c in d.items()})

    def __repr__(self):
        return f"QTRational('{self}')"

    def __str__(self):
        return serialize(self)


def _double(x) -> int:
    f = Fraction(x) * 2
    if f.denominator != 1:
        raise ValueError(f"exponent {x} is not a half-integer")
    return int(f)


def _peval(p, u: Fraction, v: Fraction) -> Fraction:
    total = Fraction(0)
    for (i, j), c in _terms(p):
        total += _to_fraction(c) * u ** i * v ** j
    return total


def _laurent_to_poly(terms: dict):
    terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
    if not terms:
        return _P0, 0, 0
    a = min(k[0] for k in terms)
    b = min(k[1] for k in terms)
    p = _CTX.from_dict({(i - a, j - b): flint.fmpq(c.numerator, c.denominator)
                        for (i, j), c in terms.items()})
    return p, a, b


def _normalize(num, den, a, b):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return _P0, _P1, 0, 0
    if not den.is_one():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    i, j = _min_exps(num)
    if i or j:
        num = num / _mono(i, j)
        a += i
        b += j
    i, j = _min_exps(den)
    if i or j:
        den = den / _mono(i, j)
        a -= i
        b -= j
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den, a, b


ZERO = QTRational(_P0, _P1, 0, 0, _raw=True)
ONE = QTRational(_P1, _P1, 0, 0, _raw=True)
q = QTRational.monomial(2, 0)
t = QTRational.monomial(0, 2)
s = QTRational.monomial(-1, 1)


# --------------------------------------------------------------------------
# diagonal degrees


def _diag_extremes(p, sign):
    vals = [m[0] + m[1] for m in _monoms(p)]
    return max(vals) if sign > 0 else min(vals)


def deg_se(f: QTRational) -> Fraction:
    """Largest total degree of the numerator minus that of the denominator."""
    f = _coerce(f)
    if f.is_zero():
        raise ValueError("deg_se of zero")
    return Fraction(_diag_extremes(f._n, 1) + f._a + f._b - _diag_extremes(f._d, 1), 2)


def deg_nw(f: QTRational) -> Fraction:
    f = _coerce(f)
    if f.is_zero():
        raise ValueError("deg_nw of zero")
    return Fraction(_diag_extremes(f._n, -1) + f._a + f._b - _diag_extremes(f._d, -1), 2)


def _extreme_part(f: QTRational, sign: int) -> QTRational:
    f = _coerce(f)
    if f.is_zero():
        raise ValueError("leading part of zero")
    if not f.is_polynomial():
        raise ValueError(f"{f} is not a Laurent polynomial")
    terms = f.num_terms()
    target = (max if sign > 0 else min)(i + j for i, j in terms)
    return QTRational.from_terms({k: c for k, c in terms.items() if k[0] + k[1] == target})


def hd(f: QTRational) -> QTRational:
    """Sum of the terms of a Laurent polynomial of top total degree."""
    return _extreme_part(f, 1)


def ld(f: QTRational) -> QTRational:
    return _extreme_part(f, -1)


def hd_ratio(f: QTRational) -> QTRational:
    """Top-degree part of a rational function: hd(num)/hd(den)."""
    f = _coerce(f)
    num = QTRational.from_terms(f.num_terms())
    den = QTRational.from_terms(f.den_terms())
    return hd(num) / hd(den)


# --------------------------------------------------------------------------
# evaluation


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    from math import isqrt
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def eval_qt(f, q0, t0) -> Fraction:
    """Exact value of ``f`` at ``q = q0``, ``t = t0``.

    Half-integer exponents need perfect-square arguments.
    """
    f = _coerce(f)
    q0, t0 = Fraction(q0), Fraction(t0)
    odd_q = f._a % 2 or any(m[0] % 2 for m in _monoms(f._n)) or any(m[0] % 2 for m in _monoms(f._d))
    odd_t = f._b % 2 or any(m[1] % 2 for m in _monoms(f._n)) or any(m[1] % 2 for m in _monoms(f._d))
    if odd_q:
        u = _sqrt_fraction(q0)
        if u is None:
            raise ValueError(f"q0={q0} is not a square but {f} has half-integer q exponents")
        fu = lambda e: u ** e
    else:
        fu = lambda e: q0 ** (e // 2)
    if odd_t:
        v = _sqrt_fraction(t0)
        if v is None:
            raise ValueError(f"t0={t0} is not a square but {f} has half-integer t exponents")
        fv = lambda e: v ** e
    else:
        fv = lambda e: t0 ** (e // 2)

    def ev(p, a=0, b=0):
        tot = Fraction(0)
        for (i, j), c in _terms(p):
            i2, j2 = i + a, j + b
            if (q0 == 0 and i2 < 0) or (t0 == 0 and j2 < 0):
                raise PoleAtTarget(f"pole of {f} at q={q0}, t={t0}")
            tot += _to_fraction(c) * fu(i2) * fv(j2)
        return tot

    den = ev(f._d)
    if den == 0:
        raise PoleAtTarget(f"pole of {f} at q={q0}, t={t0}")
    return ev(f._n, f._a, f._b) / den


# --------------------------------------------------------------------------
# serialization


def _fmt_exp(e2: int) -> str:
    return str(e2 // 2) if e2 % 2 == 0 else f"{e2}/2"


def _fmt_poly(terms: dict) -> str:
    if not terms:
        return "0"
    out = []
    for (i, j) in sorted(terms):
        c = terms[(i, j)]
        mono = ""
        if i:
            mono += f"q^{{{_fmt_exp(i)}}}"
        if j:
            mono += f"t^{{{_fmt_exp(j)}}}"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def serialize(f: QTRational) -> str:
    f = _coerce(f)
    num = _fmt_poly(f.num_terms())
    if f._d.is_one():
        return num
    return f"({num}) / ({_fmt_poly(f.den_terms())})"


_TERM_RE = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*((?:[qt](?:\^(?:\{\s*-?\d+(?:/2)?\s*\}|-?\d+))?\s*)*)"
)
_FACTOR_RE = re.compile(r"([qt])(?:\^(?:\{\s*(-?\d+(?:/2)?)\s*\}|(-?\d+)))?")


def _parse_poly(text: str) -> dict:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    terms: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse term at {text[pos:]!r}")
        sign, coeff, mono = m.group(1), m.group(2), m.group(3)
        if sign is None and not first:
            raise ValueError(f"missing operator before {text[pos:]!r}")
        if coeff is None and not mono.strip():
            raise ValueError(f"empty term in {text!r}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        qe = te = 0
        for f in _FACTOR_RE.finditer(mono):
            e = f.group(2) or f.group(3) or "1"
            e2 = _double(Fraction(e))
            if f.group(1) == "q":
                qe += e2
            else:
                te += e2
        terms[(qe, te)] = terms.get((qe, te), Fraction(0)) + c
        pos = m.end()
        first = False
    return terms


def parse_qt(text: str) -> QTRational:
    """Parse the string form produced by :func:`serialize` (or any equivalent)."""
    text = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", text, flags=re.S)
    if m and m.group(1).count("(") == 0 and m.group(2).count("(") == 0:
        return QTRational.from_terms(_parse_poly(m.group(1)), _parse_poly(m.group(2)))
    if text.startswith("(") and text.endswith(")") and text.count("(") == 1:
        text = text[1:-1]
    return QTRational.from_terms(_parse_poly(text))


# --------------------------------------------------------------------------
# auxiliary variable epsilon


def _trim(cs: list) -> list:
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _poly_at_one(cs: list) -> QTRational:
    return reduce(lambda x, y: x + y, cs, ZERO)


def _div_eps_minus_one(cs: list) -> list:
    """Exact synthetic division by (eps - 1); caller ensures the root."""
    out = [ZERO] * (len(cs) - 1)
    acc = ZERO
    for i in range(len(cs) - 1, 0, -1):
        acc = acc + cs[i]
        out[i - 1] = acc
    return out


class EpsRational:
    """A rational function in an auxiliary variable eps over Q(q, t).

    Coefficient lists run from the constant term upward.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable, den: Iterable = (ONE,)):
        self.num = _trim(_coerce(c) for c in num)
        self.den = _trim(_coerce(c) for c in den)
        if not self.den:
            raise ZeroDivisionError("zero denominator in eps")

    @classmethod
    def constant(cls, c) -> "EpsRational":
        return cls([c])

    @classmethod
    def eps_monomial(cls, c, k: int) -> "EpsRational":
        """``c * eps^k``, k may be negative."""
        if k >= 0:
            return cls([ZERO] * k + [c])
        return cls([c], [ZERO] * (-k) + [ONE])

    def __add__(self, other: "EpsRational") -> "EpsRational":
        return EpsRational(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                           _pmul(self.den, other.den))

    def __mul__(self, other: "EpsRational") -> "EpsRational":
        return EpsRational(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __neg__(self):
        return EpsRational([-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __truediv__(self, other: "EpsRational") -> "EpsRational":
        if not other.num:
            raise ZeroDivisionError("division by zero in eps")
        return EpsRational(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def times_eps_minus_one(self, k: int) -> "EpsRational":
        """Multiply numerator and denominator by (eps - 1)^k (value unchanged)."""
        f = [ONE]
        for _ in range(k):
            f = _pmul(f, [-ONE, ONE])
        return EpsRational(_pmul(self.num, f), _pmul(self.den, f))

    def limit_at_one(self) -> QTRational:
        return limit_at_one(self)

    def laurent_at_one(self, prec: int) -> tuple[int, list]:
        """Expansion in ``d = eps - 1``: ``(v, c)`` with value ``d^v * sum c[i] d^i``.

        ``c`` holds ``prec`` coefficients and ``c[0] != 0``.
        """
        if not self.num:
            raise ValueError("zero has no Laurent expansion")
        n, nv = _strip_low(_taylor_shift(self.num))
        d, dv = _strip_low(_taylor_shift(self.den))
        return nv - dv, _series_div(n, d, prec)


def _padd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)]


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _taylor_shift(cs: list) -> list:
    """Coefficients of ``p(1 + d)`` in ``d``."""
    out = [ZERO] * len(cs)
    for i, c in enumerate(cs):
        if c.is_zero():
            continue
        for j in range(i + 1):
            out[j] = out[j] + c * comb(i, j)
    return out


def _strip_low(cs: list) -> tuple[list, int]:
    v = 0
    while v < len(cs) and cs[v].is_zero():
        v += 1
    return cs[v:], v


def _series_div(a: list, b: list, prec: int) -> list:
    inv0 = b[0].inverse()
    out = []
    for k in range(prec):
        acc = a[k] if k < len(a) else ZERO
        for j in range(1, min(k, len(b) - 1) + 1):
            acc = acc - b[j] * out[k - j]
        out.append(acc * inv0)
    return out


def limit_at_one(f: EpsRational) -> QTRational:
    """Value at eps = 1 after cancelling common (eps - 1) factors."""
    num, den = list(f.num), list(f.den)
    while True:
        dv = _poly_at_one(den)
        if not dv.is_zero():
            return _poly_at_one(num) / dv
        if not num:
            return ZERO
        if not _poly_at_one(num).is_zero():
            raise PoleAtTarget("denominator vanishes at eps = 1 after cancellation")
        num = _trim(_div_eps_minus_one(num))
        den = _trim(_div_eps_minus_one(den))
