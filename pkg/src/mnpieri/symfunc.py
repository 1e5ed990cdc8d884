"""The ring of symmetric functions over Q(q, t), truncated by degree.

Every basis is stored through its expansion in monomial symmetric functions,
computed per degree and kept in a :class:`SymRing`.  Macdonald polynomials come
from Gram-Schmidt in the monomial basis and can be persisted to a JSON cache.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial
from pathlib import Path
from typing import Callable, Mapping

from .qt import ONE, ZERO, QTRational, parse_qt, q, t
from .shapes import Partition, arm_leg, box_weight, enumerate_partitions, parse_partition

__all__ = [
    "BASES",
    "SymFunc",
    "SymRing",
    "DegreeBoundExceeded",
    "CacheError",
    "BasisCache",
    "default_ring",
    "set_default_ring",
    "convert",
    "hall_inner",
    "macdonald_inner",
    "macdonald_P",
    "macdonald_M",
    "nabla",
    "norm_phi",
    "multiply",
    "adjoint",
    "adjoint_mult",
    "z_lambda",
    "macdonald_norm_factor",
    "nabla_eigenvalue",
]

BASES = ("m", "p", "e", "h", "s", "P", "M")
_BASIS_NAMES = {
    "monomial": "m", "powersum": "p", "elementary": "e", "homogeneous": "h",
    "schur": "s", "macp": "P", "macm": "M",
}


class DegreeBoundExceeded(ValueError):
    pass


class CacheError(RuntimeError):
    pass


def _basis(b: str) -> str:
    if b in BASES:
        return b
    key = b.lower().replace("_", "").replace("-", "")
    if key in _BASIS_NAMES:
        return _BASIS_NAMES[key]
    raise ValueError(f"unknown basis {b!r}")


def _qt(c) -> QTRational:
    return c if isinstance(c, QTRational) else QTRational.from_fraction(Fraction(c))


class SymFunc:
    """A finite linear combination of basis elements indexed by partitions."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str, coeffs: Mapping | None = None):
        self.basis = _basis(basis)
        out: dict[Partition, QTRational] = {}
        for lam, c in (coeffs or {}).items():
            c = _qt(c)
            if not c.is_zero():
                lam = Partition(lam)
                out[lam] = out.get(lam, ZERO) + c
                if out[lam].is_zero():
                    del out[lam]
        self.coeffs = out

    @classmethod
    def basis_element(cls, basis: str, lam) -> "SymFunc":
        return cls(basis, {Partition(lam): ONE})

    @classmethod
    def one(cls, basis: str = "m") -> "SymFunc":
        return cls(basis, {Partition(): ONE})

    @classmethod
    def zero(cls, basis: str = "m") -> "SymFunc":
        return cls(basis, {})

    def degrees(self) -> set[int]:
        return {lam.size for lam in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, lam) -> QTRational:
        return self.coeffs.get(Partition(lam), ZERO)

    def _same(self, other: "SymFunc") -> "SymFunc":
        if other.basis == self.basis:
            return other
        return convert(other, self.basis)

    def __add__(self, other: "SymFunc") -> "SymFunc":
        other = self._same(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, ZERO) + c
        return SymFunc(self.basis, out)

    def __neg__(self):
        return SymFunc(self.basis, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymFunc":
        c = _qt(c)
        return SymFunc(self.basis, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, SymFunc):
            return NotImplemented
        if other.basis != self.basis:
            other = convert(other, self.basis)
        return self.coeffs == other.coeffs

    __hash__ = None

    def to(self, basis: str) -> "SymFunc":
        return convert(self, basis)

    def items(self):
        def key(kv):
            lam = kv[0]
            return (lam.size, tuple(-v for v in lam))
        return sorted(self.coeffs.items(), key=key)

    def to_dict(self) -> dict[str, str]:
        return {str(lam): str(c) for lam, c in self.items()}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{self.basis}{lam}" for lam, c in self.items())


# --------------------------------------------------------------------------
# combinatorial transition counts


def z_lambda(lam: Partition) -> int:
    out = 1
    for part in set(lam):
        mult = lam.count(part)
        out *= part ** mult * factorial(mult)
    return out


@lru_cache(maxsize=None)
def _p_to_m_coeff(rho: tuple, mu: tuple) -> int:
    """Coefficient of x^mu in p_rho: ways to send each part of rho to a variable."""
    if not rho:
        return 1 if all(v == 0 for v in mu) else 0
    first, rest = rho[0], rho[1:]
    total = 0
    for j, v in enumerate(mu):
        if v >= first:
            nxt = mu[:j] + (v - first,) + mu[j + 1:]
            total += _p_to_m_coeff(rest, nxt)
    return total


@lru_cache(maxsize=None)
def _matrix_count(rows: tuple, cols: tuple, binary: bool) -> int:
    """Number of 0-1 (or N) matrices with the given row and column sums."""
    if not rows:
        return 1 if all(c == 0 for c in cols) else 0
    r, rest = rows[0], rows[1:]
    total = 0

    def place(j: int, left: int, acc: tuple):
        nonlocal total
        if j == len(cols):
            if left == 0:
                total += _matrix_count(rest, tuple(sorted(acc, reverse=True)), binary)
            return
        hi = min(cols[j], left, 1 if binary else left)
        for v in range(hi + 1):
            place(j + 1, left - v, acc + (cols[j] - v,))

    place(0, r, ())
    return total


def _fraction_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# --------------------------------------------------------------------------
# per-degree data


def macdonald_norm_factor(lam: Partition) -> QTRational:
    """``prod (t^-l - q^(a+1))`` over the boxes of ``lam``; ``M = P / factor``."""
    out = ONE
    for b in Partition(lam).boxes():
        a, l = arm_leg(lam, b)
        out = out * (t ** (-l) - q ** (a + 1))
    return out


def nabla_eigenvalue(lam: Partition) -> QTRational:
    out = ONE
    for b in Partition(lam).boxes():
        out = out * box_weight(b)
    return out


def _z_qt(rho: Partition) -> QTRational:
    out = QTRational.from_fraction(Fraction(z_lambda(rho)))
    for part in rho:
        out = out * (1 - q ** part) / (1 - t ** part)
    return out


class _Degree:
    """Transition data for one homogeneous degree."""

    def __init__(self, d: int):
        self.d = d
        self.parts = list(enumerate_partitions(d))
        self.index = {lam: i for i, lam in enumerate(self.parts)}
        n = len(self.parts)
        P = self.parts
        self.to_m: dict[str, list[list]] = {}
        self.from_m: dict[str, list[list]] = {}
        pm = [[Fraction(_p_to_m_coeff(tuple(r), tuple(mu))) for mu in P] for r in P]
        self.to_m["p"] = pm
        self.to_m["e"] = [[Fraction(_matrix_count(tuple(l), tuple(mu), True)) for mu in P] for l in P]
        self.to_m["h"] = [[Fraction(_matrix_count(tuple(l), tuple(mu), False)) for mu in P] for l in P]
        self.to_m["m"] = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for b in ("p", "e", "h", "m"):
            self.from_m[b] = _fraction_inverse(self.to_m[b])
        # Gram matrices in the m basis: G = A diag(z) A^T with m_lam = sum_rho A[lam][rho] p_rho
        A = self.from_m["p"]
        self.m_to_p = A
        z = [Fraction(z_lambda(r)) for r in P]
        self.hall_gram = [[sum(A[i][k] * A[j][k] * z[k] for k in range(n)) for j in range(n)]
                          for i in range(n)]
        s_rows = _gram_schmidt(n, lambda i, j: self.hall_gram[i][j], Fraction(1), Fraction(0))
        self.to_m["s"] = s_rows
        self.from_m["s"] = _fraction_inverse(s_rows)
        self._qt_gram = None
        self._qt_lock = threading.Lock()
        self.mac_to_m = None
        self.mac_from_m = None
        self.mac_norms = None

    def qt_gram(self) -> list[list[QTRational]]:
        if self._qt_gram is None:
            n = len(self.parts)
            A = self.m_to_p
            zq = [_z_qt(r) for r in self.parts]
            g = [[ZERO] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    acc = ZERO
                    for k in range(n):
                        c = A[i][k] * A[j][k]
                        if c:
                            acc = acc + zq[k] * QTRational.from_fraction(c)
                    g[i][j] = g[j][i] = acc
            self._qt_gram = g
        return self._qt_gram

    def set_macdonald(self, rows: list[list[QTRational]]):
        n = len(self.parts)
        self.mac_to_m = rows
        # unitriangular inverse: rows[i] has support on j >= i (later = lower)
        inv = [[ZERO] * n for _ in range(n)]
        for i in range(n - 1, -1, -1):
            inv[i][i] = ONE
            for j in range(i + 1, n):
                c = rows[i][j]
                if c.is_zero():
                    continue
                for k in range(j, n):
                    if not inv[j][k].is_zero():
                        inv[i][k] = inv[i][k] - c * inv[j][k]
        self.mac_from_m = inv

    def compute_macdonald(self) -> list[list[QTRational]]:
        g = self.qt_gram()
        n = len(self.parts)
        return _gram_schmidt(n, lambda i, j: g[i][j], ONE, ZERO)


def _gram_schmidt(n: int, gram: Callable, one, zero) -> list[list]:
    """Orthogonalize m-basis vectors from the bottom of reverse-lex order upwards.

    Row ``i`` of the result is the expansion of the ``i``-th orthogonal vector,
    equal to ``m_i`` plus terms later in the order.
    """
    rows: list[list | None] = [None] * n
    norms: list = [None] * n
    for i in range(n - 1, -1, -1):
        vec = [zero] * n
        vec[i] = one
        for j in range(i + 1, n):
            pj = rows[j]
            ip = zero
            for k in range(j, n):
                if pj[k]:
                    ip = ip + pj[k] * gram(i, k)
            if ip:
                c = ip / norms[j]
                for k in range(j, n):
                    if pj[k]:
                        vec[k] = vec[k] - c * pj[k]
        # the lower terms are orthogonal to vec, so <vec, vec> = <vec, m_i>
        nrm = zero
        for k in range(i, n):
            if vec[k]:
                nrm = nrm + vec[k] * gram(i, k)
        rows[i] = vec
        norms[i] = nrm
    return rows


# --------------------------------------------------------------------------
# cache


CACHE_VERSION = 1


def _checksum(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


class BasisCache:
    """Macdonald expansions persisted as JSON with a version field and checksum."""

    FILENAME = "macdonald.json"

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory else None

    @property
    def path(self) -> Path | None:
        return self.directory / self.FILENAME if self.directory else None

    def load(self) -> dict[int, dict[str, dict[str, str]]]:
        if not self.path or not self.path.exists():
            return {}
        try:
            doc = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"unreadable cache {self.path}: {exc}") from exc
        if doc.get("version") != CACHE_VERSION:
            raise CacheError(f"cache version {doc.get('version')} != {CACHE_VERSION}")
        if _checksum(doc.get("degrees")) != doc.get("checksum"):
            raise CacheError(f"checksum mismatch in {self.path}")
        return {int(k): v for k, v in doc["degrees"].items()}

    def store(self, degrees: dict[int, dict[str, dict[str, str]]]):
        if not self.path:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = {str(k): degrees[k] for k in sorted(degrees)}
        doc = {"version": CACHE_VERSION, "checksum": _checksum(payload), "degrees": payload}
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True, indent=1))
        tmp.replace(self.path)

    def clear(self) -> bool:
        if self.path and self.path.exists():
            self.path.unlink()
            return True
        return False


# --------------------------------------------------------------------------
# the ring


class SymRing:
    """Degree-truncated symmetric functions with lazily built transition data."""

    def __init__(self, degree_bound: int = 8, cache_dir: str | os.PathLike | None = None):
        self.degree_bound = degree_bound
        self.cache = BasisCache(cache_dir)
        self._deg: dict[int, _Degree] = {}
        self._lock = threading.RLock()
        self._loaded: dict[int, dict] | None = None

    def degree(self, d: int) -> _Degree:
        if d > self.degree_bound:
            raise DegreeBoundExceeded(f"degree {d} exceeds the bound {self.degree_bound}")
        with self._lock:
            if d not in self._deg:
                self._deg[d] = _Degree(d)
            return self._deg[d]

    def macdonald_degree(self, d: int) -> _Degree:
        D = self.degree(d)
        if D.mac_to_m is not None:
            return D
        with self._lock:
            if D.mac_to_m is not None:
                return D
            rows = self._from_cache(D)
            if rows is None:
                rows = D.compute_macdonald()
                self._to_cache(D, rows)
            D.set_macdonald(rows)
        return D

    def _from_cache(self, D: _Degree):
        if self.cache.path is None:
            return None
        if self._loaded is None:
            self._loaded = self.cache.load()
        entry = self._loaded.get(D.d)
        if entry is None:
            return None
        n = len(D.parts)
        rows = [[ZERO] * n for _ in range(n)]
        for lam_s, exp in entry.items():
            i = D.index[parse_partition(lam_s)]
            for mu_s, c in exp.items():
                rows[i][D.index[parse_partition(mu_s)]] = parse_qt(c)
        return rows

    def _to_cache(self, D: _Degree, rows):
        if self.cache.path is None:
            return
        if self._loaded is None:
            self._loaded = self.cache.load()
        self._loaded[D.d] = {
            str(lam): {str(D.parts[j]): str(c) for j, c in enumerate(rows[i]) if not c.is_zero()}
            for i, lam in enumerate(D.parts)
        }
        self.cache.store(self._loaded)

    def build_cache(self, upto: int):
        for d in range(upto + 1):
            self.macdonald_degree(d)

    def verify_cache(self) -> list[int]:
        """Recompute every cached degree from scratch; returns mismatching degrees."""
        stored = self.cache.load()
        bad = []
        for d, entry in sorted(stored.items()):
            D = _Degree(d)
            rows = D.compute_macdonald()
            fresh = {str(lam): {str(D.parts[j]): str(c) for j, c in enumerate(rows[i]) if not c.is_zero()}
                     for i, lam in enumerate(D.parts)}
            if fresh != entry:
                bad.append(d)
        return bad

    # basis rows --------------------------------------------------------------
    def row_to_m(self, basis: str, lam: Partition) -> dict[Partition, QTRational]:
        D = self.macdonald_degree(lam.size) if basis in "PM" else self.degree(lam.size)
        i = D.index[lam]
        if basis in "PM":
            row = D.mac_to_m[i]
            scale = ONE if basis == "P" else macdonald_norm_factor(lam).inverse()
            return {D.parts[j]: c * scale for j, c in enumerate(row) if not c.is_zero()}
        row = D.to_m[basis][i]
        return {D.parts[j]: QTRational.from_fraction(c) for j, c in enumerate(row) if c}

    def row_from_m(self, basis: str, mu: Partition) -> dict[Partition, QTRational]:
        D = self.macdonald_degree(mu.size) if basis in "PM" else self.degree(mu.size)
        i = D.index[mu]
        if basis in "PM":
            row = D.mac_from_m[i]
            out = {}
            for j, c in enumerate(row):
                if c.is_zero():
                    continue
                lam = D.parts[j]
                out[lam] = c if basis == "P" else c * macdonald_norm_factor(lam)
            return out
        row = D.from_m[basis][i]
        return {D.parts[j]: QTRational.from_fraction(c) for j, c in enumerate(row) if c}

    def convert(self, f: SymFunc, target: str) -> SymFunc:
        target = _basis(target)
        if f.basis == target:
            return f
        acc: dict[Partition, QTRational] = {}
        if f.basis == "m":
            mexp = f.coeffs
        else:
            mexp = {}
            for lam, c in f.coeffs.items():
                for mu, v in self.row_to_m(f.basis, lam).items():
                    mexp[mu] = mexp.get(mu, ZERO) + c * v
        if target == "m":
            return SymFunc("m", mexp)
        for mu, c in mexp.items():
            if c.is_zero():
                continue
            for lam, v in self.row_from_m(target, mu).items():
                acc[lam] = acc.get(lam, ZERO) + c * v
        return SymFunc(target, acc)


_DEFAULT: SymRing | None = None


def default_ring() -> SymRing:
    global _DEFAULT
    if _DEFAULT is None:
        bound = int(os.environ.get("MNPIERI_DEGREE_BOUND", "8"))
        _DEFAULT = SymRing(bound, os.environ.get("MNPIERI_CACHE_DIR") or None)
    return _DEFAULT


def set_default_ring(ring: SymRing):
    global _DEFAULT
    _DEFAULT = ring


# --------------------------------------------------------------------------
# module-level operations


def convert(f: SymFunc, target: str, ring: SymRing | None = None) -> SymFunc:
    return (ring or default_ring()).convert(f, target)


def _pairing(f: SymFunc, g: SymFunc, weight: Callable[[Partition], QTRational]) -> QTRational:
    fp, gp = convert(f, "p"), convert(g, "p")
    acc = ZERO
    for lam, c in fp.coeffs.items():
        d = gp.coeffs.get(lam)
        if d is not None:
            acc = acc + c * d * weight(lam)
    return acc


def hall_inner(f: SymFunc, g: SymFunc) -> QTRational:
    return _pairing(f, g, lambda lam: QTRational.from_fraction(Fraction(z_lambda(lam))))


@lru_cache(maxsize=None)
def _z_qt_cached(lam: Partition) -> QTRational:
    return _z_qt(lam)


def macdonald_inner(f: SymFunc, g: SymFunc) -> QTRational:
    return _pairing(f, g, _z_qt_cached)


def macdonald_P(lam, ring: SymRing | None = None) -> SymFunc:
    lam = Partition(lam)
    return SymFunc("m", (ring or default_ring()).row_to_m("P", lam))


def macdonald_M(lam, ring: SymRing | None = None) -> SymFunc:
    lam = Partition(lam)
    return SymFunc("m", (ring or default_ring()).row_to_m("M", lam))


def nabla(f: SymFunc, r: int = 1) -> SymFunc:
    """Apply the r-th power of the operator diagonal on M with eigenvalue prod(chi)."""
    src = f.basis
    fm = convert(f, "M")
    out = SymFunc("M", {lam: c * nabla_eigenvalue(lam) ** r for lam, c in fm.coeffs.items()})
    return out if src == "M" else convert(out, src)


def norm_phi(f: SymFunc) -> QTRational:
    """The ring map sending every power sum p_k to 1."""
    acc = ZERO
    for c in convert(f, "p").coeffs.values():
        acc = acc + c
    return acc


def multiply(f: SymFunc, g: SymFunc, ring: SymRing | None = None) -> SymFunc:
    ring = ring or default_ring()
    fp, gp = ring.convert(f, "p"), ring.convert(g, "p")
    out: dict[Partition, QTRational] = {}
    for a, c in fp.coeffs.items():
        for b, d in gp.coeffs.items():
            lam = Partition(sorted(a + b, reverse=True))
            if lam.size > ring.degree_bound:
                raise DegreeBoundExceeded(f"product degree {lam.size} exceeds {ring.degree_bound}")
            out[lam] = out.get(lam, ZERO) + c * d
    return ring.convert(SymFunc("p", out), f.basis)


@lru_cache(maxsize=None)
def _mac_norm_M(lam: Partition) -> QTRational:
    """<M_lam, M_lam> under the Macdonald inner product."""
    P = macdonald_P(lam)
    return macdonald_inner(P, P) / macdonald_norm_factor(lam) ** 2


def adjoint(op: Callable[[SymFunc], SymFunc], shift: int) -> Callable[[SymFunc], SymFunc]:
    """Adjoint of a linear map raising degree by ``shift`` for the Macdonald product.

    The M basis is orthogonal, so the adjoint matrix is the transpose rescaled by
    the diagonal Gram entries.
    """

    def adj(g: SymFunc) -> SymFunc:
        gm = convert(g, "M")
        out: dict[Partition, QTRational] = {}
        for lam, c in gm.coeffs.items():
            d = lam.size - shift
            if d < 0:
                continue
            nl = _mac_norm_M(lam)
            for mu in enumerate_partitions(d):
                image = convert(op(SymFunc.basis_element("M", mu)), "M")
                a = image.coeffs.get(lam)
                if a is not None:
                    out[mu] = out.get(mu, ZERO) + c * a * nl / _mac_norm_M(mu)
        return SymFunc("M", out)

    return adj


def adjoint_mult(f: SymFunc) -> Callable[[SymFunc], SymFunc]:
    """The adjoint of multiplication by a homogeneous ``f``."""
    degs = f.degrees()
    if len(degs) != 1:
        raise ValueError("adjoint_mult expects a homogeneous symmetric function")
    return adjoint(lambda g: multiply(g, f), degs.pop())
