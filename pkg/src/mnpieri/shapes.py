"""Partitions, boxes and skew shapes.

Boxes are addressed by the coordinates ``(x, y)`` of their south-west corner
(French convention: row ``y`` of a partition holds ``parts[y]`` boxes).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

from .qt import QTRational

__all__ = [
    "Partition",
    "Box",
    "SkewShape",
    "BoundaryPoint",
    "box_weight",
    "content",
    "arm_leg",
    "corners",
    "boundary_points",
    "dominance_leq",
    "containment_leq",
    "enumerate_partitions",
    "enumerate_subpartitions",
    "enumerate_skew_over",
    "shape_stats",
    "parse_partition",
    "parse_skew",
]


class Box(NamedTuple):
    x: int
    y: int


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        return self[i] if 0 <= i < len(self) else 0

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition([sum(1 for p in self if p > j) for j in range(self[0])])

    def boxes(self) -> list[Box]:
        return [Box(x, y) for y, p in enumerate(self) for x in range(p)]

    def __contains__(self, b) -> bool:
        if isinstance(b, tuple) and len(b) == 2 and not isinstance(b, Partition):
            x, y = b
            return x >= 0 and y >= 0 and x < self.part(y)
        return super().__contains__(b)

    def __repr__(self):
        return "[" + ",".join(map(str, self)) + "]"

    __str__ = __repr__


@dataclass(frozen=True)
class SkewShape:
    """The boxes of ``outer`` that are not in ``inner``."""

    outer: Partition
    inner: Partition = Partition()

    def __post_init__(self):
        object.__setattr__(self, "outer", Partition(self.outer))
        object.__setattr__(self, "inner", Partition(self.inner))
        if not containment_leq(self.inner, self.outer):
            raise ValueError(f"{self.inner} is not contained in {self.outer}")

    @property
    def size(self) -> int:
        return self.outer.size - self.inner.size

    def boxes(self) -> list[Box]:
        mu = self.inner
        return [Box(x, y) for y, p in enumerate(self.outer) for x in range(mu.part(y), p)]

    def __contains__(self, b) -> bool:
        return b in self.outer and b not in self.inner

    def __str__(self):
        return f"{self.outer}/{self.inner}"

    __repr__ = __str__


def box_weight(b) -> QTRational:
    """``q^x t^-y``."""
    x, y = b
    return QTRational.monomial(2 * x, -2 * y)


def content(b) -> int:
    x, y = b
    return x - y


def arm_leg(lam: Partition, b) -> tuple[int, int]:
    x, y = b
    if b not in Partition(lam):
        raise ValueError(f"box {tuple(b)} is not in {lam}")
    lam = Partition(lam)
    return lam.part(y) - x - 1, lam.conjugate().part(x) - y - 1


class BoundaryPoint(NamedTuple):
    """A lattice point on the boundary path of a partition.

    ``kind`` is ``inner`` (addable position), ``outer`` (north-east corner of a
    removable box), ``vertical`` or ``horizontal`` (straight stretch).
    """

    x: int
    y: int
    kind: str


def boundary_points(lam: Partition, lo: int, hi: int) -> dict[int, BoundaryPoint]:
    """The boundary point of every diagonal ``lo <= content <= hi``.

    Walking the boundary from the far north to the far east, every step moves
    one unit south or east, so each diagonal is met exactly once.
    """
    lam = Partition(lam)
    x, y = 0, max(len(lam), -lo) + 1
    prev = "S"
    out: dict[int, BoundaryPoint] = {}
    while x - y <= hi:
        step = "S" if y > 0 and (x, y - 1) not in lam else "E"
        kind = {("S", "E"): "inner", ("E", "S"): "outer",
                ("S", "S"): "vertical", ("E", "E"): "horizontal"}[(prev, step)]
        if x - y >= lo:
            out[x - y] = BoundaryPoint(x, y, kind)
        if step == "S":
            y -= 1
        else:
            x += 1
        prev = step
    return out


def corners(lam: Partition) -> tuple[list[QTRational], list[QTRational]]:
    """Inner and outer corner weights, ordered by increasing content."""
    lam = Partition(lam)
    pts = boundary_points(lam, -len(lam) - 1, (lam[0] if lam else 0) + 1)
    inner = [box_weight((p.x, p.y)) for c, p in sorted(pts.items()) if p.kind == "inner"]
    outer = [box_weight((p.x, p.y)) for c, p in sorted(pts.items()) if p.kind == "outer"]
    return inner, outer


def corner_boxes(lam: Partition) -> tuple[list[Box], list[Box]]:
    """Like :func:`corners` but returning the lattice points themselves."""
    lam = Partition(lam)
    pts = boundary_points(lam, -len(lam) - 1, (lam[0] if lam else 0) + 1)
    inner = [Box(p.x, p.y) for c, p in sorted(pts.items()) if p.kind == "inner"]
    outer = [Box(p.x, p.y) for c, p in sorted(pts.items()) if p.kind == "outer"]
    return inner, outer


def dominance_leq(mu: Partition, lam: Partition) -> bool:
    if sum(mu) != sum(lam):
        raise ValueError("dominance compares partitions of the same size")
    a = b = 0
    for i in range(max(len(mu), len(lam))):
        a += mu[i] if i < len(mu) else 0
        b += lam[i] if i < len(lam) else 0
        if a > b:
            return False
    return True


def containment_leq(mu: Partition, lam: Partition) -> bool:
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


@lru_cache(maxsize=None)
def _partitions(n: int, maxpart: int) -> tuple[Partition, ...]:
    if n == 0:
        return (Partition(),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return iter(_partitions(n, n))


def enumerate_subpartitions(lam: Partition) -> Iterator[Partition]:
    """All partitions contained in ``lam``, grouped by decreasing size."""
    lam = Partition(lam)
    found: list[Partition] = []

    def rec(i: int, bound: int, acc: list):
        if i == len(lam):
            found.append(Partition(acc))
            return
        for v in range(min(bound, lam[i]), -1, -1):
            rec(i + 1, v, acc + [v])
    rec(0, lam[0] if lam else 0, [])
    found.sort(key=lambda p: (-p.size, tuple(-v for v in p)))
    return iter(found)


def enumerate_skew_over(mu: Partition, n: int) -> Iterator[SkewShape]:
    """All ``lam / mu`` with ``|lam| - |mu| = n``, outer shapes in reverse-lex order."""
    mu = Partition(mu)
    for lam in enumerate_partitions(mu.size + n):
        if containment_leq(mu, lam):
            yield SkewShape(lam, mu)


def shape_stats(sh) -> tuple[int, int, int, int]:
    """``(o, min, max, samediag)`` of a skew shape or partition.

    ``min`` and ``max`` are statistics of the outer partition alone.
    """
    if isinstance(sh, SkewShape):
        boxes, lam = sh.boxes(), sh.outer
    else:
        lam = Partition(sh)
        boxes = lam.boxes()
    o = sum(content(b) for b in boxes)
    arms = legs = 0
    for b in lam.boxes():
        a, l = arm_leg(lam, b)
        arms += a
        legs += l
    counts: dict[int, int] = {}
    for b in boxes:
        counts[content(b)] = counts.get(content(b), 0) + 1
    same = sum(c * (c - 1) // 2 for c in counts.values())
    return o, -legs, lam.size + arms, same


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ("", "[]", "()", "∅"):
        return Partition()
    inner = text.strip("[]() ")
    if not inner:
        return Partition()
    return Partition(int(v) for v in inner.split(",") if v.strip())


def parse_skew(text: str) -> SkewShape:
    if "/" in text:
        a, b = text.split("/", 1)
        return SkewShape(parse_partition(a), parse_partition(b))
    return SkewShape(parse_partition(text), Partition())
