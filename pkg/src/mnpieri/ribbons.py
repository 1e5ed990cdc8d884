"""Ribbons, ribbon strips, the bubble game and ribbon tableaux."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .shapes import Box, Partition, SkewShape, box_weight, containment_leq, enumerate_subpartitions

__all__ = [
    "Ribbon",
    "RibbonStrip",
    "RibbonTableau",
    "ribbon_height",
    "ribbon_width",
    "next_to",
    "is_vertical_strip",
    "cover_vertical_strip",
    "cover_horizontal_strip",
    "bubble_game",
    "enumerate_tilings",
    "enumerate_ribbon_tableaux",
    "tableau_weights",
    "collapse_edges",
    "connected_components",
    "minimal_tableau",
    "partition_minus",
]


@dataclass(frozen=True)
class Ribbon:
    """A ribbon, with boxes listed from the north-west end to the south-east end."""

    boxes: tuple

    def __post_init__(self):
        bs = tuple(sorted((Box(*b) for b in self.boxes), key=lambda b: (b.x - b.y, b.x)))
        if not bs:
            raise ValueError("empty ribbon")
        for a, b in zip(bs, bs[1:]):
            if (b.x - a.x, b.y - a.y) not in ((1, 0), (0, -1)):
                raise ValueError(f"not a ribbon: {bs}")
        object.__setattr__(self, "boxes", bs)

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    @property
    def height(self) -> int:
        return len({b.y for b in self.boxes}) - 1

    @property
    def width(self) -> int:
        return len({b.x for b in self.boxes}) - 1

    def weights(self):
        return [box_weight(b) for b in self.boxes]

    def transpose(self) -> "Ribbon":
        return Ribbon(tuple(Box(b.y, b.x) for b in self.boxes))

    def to_list(self):
        return [[b.x, b.y] for b in self.boxes]


def ribbon_height(B) -> int:
    if isinstance(B, Ribbon):
        return B.height
    return sum(r.height for r in B)


def ribbon_width(B: Ribbon) -> int:
    return B.width


def _shared_edges(b1: Ribbon, b2: Ribbon) -> list[tuple[int, str]]:
    """Common edges of two disjoint ribbons, keyed by doubled diagonal position."""
    s1, s2 = set(b1.boxes), set(b2.boxes)
    if s1 & s2:
        raise ValueError("next_to expects disjoint ribbons")
    out = []
    for x, y in s1:
        for (dx, dy) in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if (x + dx, y + dy) not in s2:
                continue
            if dx:
                ex = max(x, x + dx)
                out.append((2 * (ex - y) - 1, "V"))
            else:
                ey = max(y, y + dy)
                out.append((2 * (x - ey) + 1, "H"))
    return out


def next_to(b1: Ribbon, b2: Ribbon) -> bool:
    """Whether the first common edge, scanning north-west to south-east, is vertical."""
    edges = _shared_edges(b1, b2)
    if not edges:
        return False
    first = min(k for k, _ in edges)
    return any(k == first and kind == "V" for k, kind in edges)


def is_vertical_strip(ribbons: Sequence[Ribbon]) -> bool:
    return not any(next_to(a, b) for a, b in combinations(ribbons, 2))


@dataclass(frozen=True)
class RibbonStrip:
    ribbons: tuple
    orientation: str = "vertical"

    @property
    def height(self) -> int:
        return sum(r.height for r in self.ribbons)

    def __len__(self):
        return len(self.ribbons)

    def __iter__(self):
        return iter(self.ribbons)


@dataclass(frozen=True)
class RibbonTableau:
    """Layers listed bottom first; layer ``i`` sits on top of the base plus layers before it."""

    base: Partition
    shape: SkewShape
    layers: tuple

    @property
    def weight(self) -> tuple:
        """Layer sizes read top layer first, matching the composition index."""
        return tuple(len(l) for l in reversed(self.layers))

    @property
    def height(self) -> int:
        return sum(l.height for l in self.layers)

    def ribbons(self) -> list[Ribbon]:
        return [r for l in self.layers for r in l]

    def tiling(self) -> frozenset:
        return frozenset(self.ribbons())

    def to_json(self) -> str:
        return json.dumps([[r.to_list() for r in l] for l in self.layers])


# --------------------------------------------------------------------------
# shapes as box sets


def partition_minus(lam: Partition, boxes: Iterable) -> Partition | None:
    """``lam`` with ``boxes`` removed, or None when the result is not a partition."""
    rows = list(lam)
    boxes = [tuple(b) for b in boxes]
    for _, y in boxes:
        if y >= len(rows):
            return None
        rows[y] -= 1
    rest = set((x, y) for y, r in enumerate(lam) for x in range(r)) - set(boxes)
    if len(rest) != sum(rows):
        return None
    for y, r in enumerate(rows):
        if any((x, y) not in rest for x in range(r)):
            return None
    try:
        return Partition(rows)
    except ValueError:
        return None


def _partition_from_boxes(boxes: set) -> Partition | None:
    rows: dict[int, int] = {}
    for x, y in boxes:
        rows[y] = rows.get(y, 0) + 1
    if not rows:
        return Partition()
    h = max(rows) + 1
    parts = [rows.get(y, 0) for y in range(h)]
    for y in range(h):
        if any((x, y) not in boxes for x in range(parts[y])):
            return None
    try:
        return Partition(parts)
    except ValueError:
        return None


# --------------------------------------------------------------------------
# covers


def _nw_box(lam: Partition, mu: Partition) -> Box | None:
    for y in range(len(lam) - 1, -1, -1):
        if lam.part(y) > mu.part(y):
            return Box(mu.part(y), y)
    return None


def _trace_rim(lam: Partition, mu: Partition, start: Box, limit: int | None) -> list[Box]:
    """Follow the outer rim of ``lam`` south-east from ``start`` inside ``lam / mu``."""
    path = [start]
    x, y = start
    while limit is None or len(path) < limit:
        if (x + 1, y) in lam:
            x += 1
        elif y > 0 and (x, y - 1) in lam and (x, y - 1) not in mu:
            y -= 1
        else:
            break
        path.append(Box(x, y))
    return path


def cover_vertical_strip(sh: SkewShape, n: int, k: int | None = None) -> RibbonStrip | None:
    """The unique vertical strip of ``n``-ribbons covering ``sh``, if any."""
    if k is None:
        if sh.size % n:
            return None
        k = sh.size // n
    if sh.size != k * n:
        raise ValueError(f"shape of size {sh.size} cannot hold {k} ribbons of size {n}")
    lam, mu = sh.outer, sh.inner
    peeled: list[Ribbon] = []
    while lam != mu:
        start = _nw_box(lam, mu)
        path = _trace_rim(lam, mu, start, n)
        if len(path) < n:
            return None
        rest = partition_minus(lam, path)
        if rest is None or not containment_leq(mu, rest):
            return None
        rib = Ribbon(tuple(path))
        if any(next_to(rib, o) for o in peeled):
            return None
        peeled.append(rib)
        lam = rest
    return RibbonStrip(tuple(peeled), "vertical")


def cover_horizontal_strip(sh: SkewShape, n: int, k: int | None = None) -> RibbonStrip | None:
    """Horizontal strips are vertical strips of the transposed shape."""
    tr = SkewShape(sh.outer.conjugate(), sh.inner.conjugate())
    strip = cover_vertical_strip(tr, n, k)
    if strip is None:
        return None
    return RibbonStrip(tuple(r.transpose() for r in strip), "horizontal")


# --------------------------------------------------------------------------
# bubble game


def bubble_game(sh: SkewShape, n: int) -> bool:
    """Play the row-bubbling game; True when every box gets removed."""
    lam, mu = sh.outer, sh.inner
    rows: list[tuple[int, int] | None] = []
    for y in range(len(lam) - 1, -1, -1):
        a, b = mu.part(y), lam.part(y)
        rows.append((a, b) if b > a else None)
    while True:
        top = next((i for i, r in enumerate(rows) if r is not None), None)
        if top is None:
            return True
        cur = rows[top]
        rows[top] = None
        idx = top
        while True:
            length = cur[1] - cur[0]
            if length > n:
                return False
            if length == n:
                break
            idx += 1
            if idx >= len(rows) or rows[idx] is None:
                return False
            a, b = cur[0] - 1, cur[1] - 1
            c, d = rows[idx]
            if b < c or d < a:
                return False
            lo, hi = max(a, c), min(b, d)
            rows[idx] = (lo, hi) if hi > lo else None
            cur = (min(a, c), max(b, d))


# --------------------------------------------------------------------------
# tilings and tableaux


def enumerate_tilings(sh: SkewShape, n: int) -> list[frozenset]:
    """Every tiling of ``sh`` by ``n``-ribbons, found by exhaustive search."""
    if sh.size % n:
        return []
    cells = set(sh.boxes())
    order = sorted(cells, key=lambda b: (-b.y, b.x))
    out: list[frozenset] = []

    def paths(start: Box, free: set):
        stack = [[start]]
        while stack:
            p = stack.pop()
            if len(p) == n:
                yield p
                continue
            x, y = p[-1]
            for nb in (Box(x + 1, y), Box(x, y - 1)):
                if nb in free:
                    stack.append(p + [nb])

    def rec(free: set, acc: list):
        if not free:
            out.append(frozenset(acc))
            return
        start = next(b for b in order if b in free)
        for p in paths(start, free - {start}):
            rec(free - set(p), acc + [Ribbon(tuple(p))])

    rec(cells, [])
    return out


def _mask_partitions(mu: Partition, ribbons: list[Ribbon]) -> dict[int, Partition]:
    base = set(mu.boxes())
    ok: dict[int, Partition] = {}
    for mask in range(1 << len(ribbons)):
        boxes = set(base)
        for i, r in enumerate(ribbons):
            if mask >> i & 1:
                boxes.update(r.boxes)
        p = _partition_from_boxes(boxes)
        if p is not None:
            ok[mask] = p
    return ok


def tableau_weights(sh: SkewShape, tiling: Iterable[Ribbon]) -> dict[tuple, int]:
    """Number of ribbon tableaux with the given underlying tiling, per weight."""
    ribbons = sorted(tiling, key=lambda r: r.boxes)
    full = (1 << len(ribbons)) - 1
    shapes = _mask_partitions(sh.inner, ribbons)
    strip_ok = {}

    def vertical(layer: int) -> bool:
        if layer not in strip_ok:
            rs = [ribbons[i] for i in range(len(ribbons)) if layer >> i & 1]
            strip_ok[layer] = is_vertical_strip(rs)
        return strip_ok[layer]

    memo: dict[int, dict[tuple, int]] = {}

    def rec(mask: int) -> dict[tuple, int]:
        # returns counts keyed by the layer sizes still to be placed, bottom first
        if mask == full:
            return {(): 1}
        if mask in memo:
            return memo[mask]
        res: dict[tuple, int] = {}
        rest = full & ~mask
        sub = rest
        while sub:
            nxt = mask | sub
            if nxt in shapes and vertical(sub):
                c = bin(sub).count("1")
                for key, v in rec(nxt).items():
                    kk = (c,) + key
                    res[kk] = res.get(kk, 0) + v
            sub = (sub - 1) & rest
        memo[mask] = res
        return res

    if 0 not in shapes:
        return {}
    return {tuple(reversed(k)): v for k, v in rec(0).items()}


def enumerate_ribbon_tableaux(sh: SkewShape, n: int, nu: Sequence[int]) -> list[RibbonTableau]:
    """All ribbon tableaux of shape ``sh`` and weight ``nu``, built bottom layer (``nu[-1]``) first."""
    nu = tuple(nu)
    if sh.size != n * sum(nu):
        raise ValueError(f"shape of size {sh.size} does not match weight {nu} with n={n}")
    lam, mu = sh.outer, sh.inner
    subs = [p for p in enumerate_subpartitions(lam) if containment_leq(mu, p)]
    out: list[RibbonTableau] = []

    def rec(kappa: Partition, remaining: tuple, layers: list):
        if not remaining:
            if kappa == lam:
                out.append(RibbonTableau(mu, sh, tuple(layers)))
            return
        k = remaining[-1]
        target = kappa.size + k * n
        for nxt in subs:
            if nxt.size != target or not containment_leq(kappa, nxt):
                continue
            strip = cover_vertical_strip(SkewShape(nxt, kappa), n, k) if k else RibbonStrip(())
            if strip is not None:
                rec(nxt, remaining[:-1], layers + [strip])

    rec(mu, nu, [])
    return out


# --------------------------------------------------------------------------
# collapse graph


def _height(tiling) -> int:
    return sum(r.height for r in tiling)


def collapse_edges(tilings: Iterable) -> tuple[list[frozenset], list[tuple[int, int]]]:
    """Vertices and edges of the collapse graph.

    Accepts tableaux or tilings; vertices are the distinct underlying tilings.
    Two tilings are adjacent when they differ in exactly two ribbons covering
    the same boxes and their heights differ by two.
    """
    verts: list[frozenset] = []
    index: dict[frozenset, int] = {}
    for t in tilings:
        key = t.tiling() if isinstance(t, RibbonTableau) else frozenset(t)
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
    buckets: dict[frozenset, list[int]] = {}
    for i, v in enumerate(verts):
        for a, b in combinations(v, 2):
            buckets.setdefault(v - {a, b}, []).append(i)
    edges = set()
    for members in buckets.values():
        for i, j in combinations(members, 2):
            if abs(_height(verts[i]) - _height(verts[j])) == 2:
                edges.add((min(i, j), max(i, j)))
    return verts, sorted(edges)


def connected_components(nverts: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Component label of each vertex (union-find)."""
    parent = list(range(nverts))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(nverts)]


def minimal_tableau(sh: SkewShape, n: int) -> RibbonTableau | None:
    """Tile by repeatedly cutting the outer rim chain into ``n``-ribbons.

    Chains are listed as layers bottom first (the last chain removed is the
    innermost); None when a chain does not split evenly.
    """
    lam, mu = sh.outer, sh.inner
    chains: list[RibbonStrip] = []
    while lam != mu:
        start = _nw_box(lam, mu)
        path = _trace_rim(lam, mu, start, None)
        if len(path) % n:
            return None
        rest = partition_minus(lam, path)
        if rest is None or not containment_leq(mu, rest):
            return None
        chains.append(RibbonStrip(tuple(Ribbon(tuple(path[i:i + n])) for i in range(0, len(path), n)),
                                  "chain"))
        lam = rest
    return RibbonTableau(mu, sh, tuple(reversed(chains)))
