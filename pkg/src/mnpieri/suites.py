"""Named verification suites driven by the command line.

Each suite returns a list of case records: plain dicts with a ``case`` label,
a boolean ``pass`` and exact string witnesses.  Defaults reproduce the
acceptance ranges; :class:`RunConfig` fields override them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .hall import (Adjoint, KernelAction, commutator_check, e_operator, negative_p_operator,
                   p_operator)
from .kernels import (EvaluationPoint, ShuffleKernel, _rand_frac, coproduct_limit,
                      evaluate_cleared, eval_hook, hook, invert_check, invert_check_generic,
                      phi_norm_kernel, sym_evaluate, wheel_check)
from .llt import NonConstantRatio, connectivity_report, gamma_ratio, llt_classic, llt_G, realizable_tilings
from .qt import ONE, ZERO, QTRational, s, serialize
from .shapes import (Partition, SkewShape, enumerate_partitions, enumerate_skew_over,
                     enumerate_subpartitions)
from .stable import degree_scan, expand_in_stable, pieri_rhs, stable_integer_slope
from .symfunc import SymFunc, convert, macdonald_inner, multiply

__all__ = ["RunConfig", "SUITES", "run_suite"]


@dataclass
class RunConfig:
    degree_bound: int = 8
    m: int | None = None
    n: int | None = None
    k: int | None = None
    max: int | None = None
    vars: int | None = None
    cache_dir: str | None = None
    format: str = "text"
    threads: int = 1
    seed: int = 0

    def slopes(self, default):
        if self.m is None and self.n is None:
            return list(default)
        m = self.m if self.m is not None else 1
        n = self.n if self.n is not None else 1
        return [(m, n)]


def _diff(a: dict, b: dict) -> dict:
    keys = set(a) | set(b)
    return {str(k): [serialize(a.get(k, ZERO)), serialize(b.get(k, ZERO))]
            for k in sorted(keys) if a.get(k, ZERO) != b.get(k, ZERO)}


def _partitions_upto(d: int):
    for size in range(d + 1):
        yield from enumerate_partitions(size)


# --------------------------------------------------------------------------


def suite_pieri_classic(cfg: RunConfig) -> list:
    kmax = cfg.k or 3
    out = []
    for mu in _partitions_upto(cfg.max if cfg.max is not None else 6):
        for k in range(1, kmax + 1):
            if mu.size + k > cfg.degree_bound:
                continue
            lhs = convert(multiply(SymFunc.basis_element("e", [k]), SymFunc.basis_element("s", mu)), "s").coeffs
            rhs = pieri_rhs(mu, k, 0, 1)
            out.append({"case": f"e_{k} s{mu}", "pass": lhs == rhs, "diff": _diff(lhs, rhs)})
    return out


def suite_pieri_integer(cfg: RunConfig) -> list:
    ms = [cfg.m] if cfg.m is not None else [-1, 1, 2]
    kmax = cfg.k or 2
    out = []
    for m in ms:
        for k in range(1, kmax + 1):
            for mu in _partitions_upto(cfg.max if cfg.max is not None else 5):
                if mu.size + k > cfg.degree_bound:
                    continue
                a = e_operator(k, m, 1, "kernel").on_basis(mu)
                b = e_operator(k, m, 1, "nabla").on_basis(mu)
                rhs = pieri_rhs(mu, k, m, 1)
                src = stable_integer_slope(mu, m)
                kern = expand_in_stable(e_operator(k, m, 1, "kernel").apply(src), m)
                nab = expand_in_stable(e_operator(k, m, 1, "nabla").apply(src), m)
                ok = a == b and kern == rhs and nab == rhs
                out.append({"case": f"e_{k}^{m}/1 on s{mu}", "pass": ok,
                            "routes_agree": a == b, "diff": _diff(kern, rhs)})
    return out


def suite_hook_eval(cfg: RunConfig) -> list:
    if cfg.m is None and cfg.n is None and cfg.k is None:
        triples = [(1, 2, 1), (1, 3, 1), (2, 3, 1), (1, 2, 2)]
    else:
        (m, n), = cfg.slopes([(1, 2)])
        triples = [(m, n, cfg.k or 1)]
    out = []
    for m, n, k in triples:
        K = ShuffleKernel("P", k, m, n)
        for l in range(1, k * n + 1):
            got = sym_evaluate(K, hook(k, n, l))
            want = eval_hook(k, m, n, l)
            out.append({"case": f"{K} at {hook(k, n, l)}", "pass": got == want,
                        "value": serialize(got), "expected": serialize(want)})
    return out


def suite_degree_scan(cfg: RunConfig) -> list:
    out = []
    ks = [cfg.k] if cfg.k else [1, 2]
    for m, n in cfg.slopes([(1, 2), (1, 3)]):
        for k in ks:
            rep = degree_scan(m, n, k, cfg.max if cfg.max is not None else 8, workers=cfg.threads)
            summ = rep.summary()
            bad = [r for r in rep.records
                   if any(r.get(f) is False for f in ("upper_ok", "lower_ok", "equality_ok", "hd_ok", "dlambda_ok"))]
            ok = not bad
            out.append({"case": f"E_{k}^{m}/{n}", "pass": ok, "summary": summ,
                        "witnesses": bad[:5]})
    return out


def _llt_shapes(n: int, maxsize: int):
    for size in range(1, maxsize + 1):
        for lam in enumerate_partitions(size):
            for mu in enumerate_subpartitions(lam):
                if mu != lam and (lam.size - mu.size) % n == 0:
                    yield SkewShape(lam, mu)


def suite_llt(cfg: RunConfig) -> list:
    ns = [cfg.n] if cfg.n else [2, 3]
    ms = [cfg.m] if cfg.m is not None else [0, 1]
    nvars = cfg.vars or 3
    out = []
    for n in ns:
        for m in ms:
            failures, count = [], 0
            for sh in _llt_shapes(n, cfg.max if cfg.max is not None else 12):
                if not realizable_tilings(sh, n):
                    continue
                count += 1
                try:
                    g = gamma_ratio(sh, n, m)
                except NonConstantRatio as exc:
                    failures.append({"shape": str(sh), "error": str(exc)})
                    continue
                G, Gc = llt_G(sh, n, m, nvars), llt_classic(sh, n, nvars)
                keys = set(G.coeffs) | set(Gc.coeffs)
                if any(G.coefficient(k) != g * Gc.coefficient(k) for k in keys):
                    failures.append({"shape": str(sh), "error": "G != gamma * G~"})
                elif not G.is_symmetric():
                    failures.append({"shape": str(sh), "error": "not symmetric"})
            out.append({"case": f"n={n} m={m}", "pass": not failures, "shapes": count,
                        "failures": len(failures), "witnesses": failures[:5]})
    return out


def suite_collapse(cfg: RunConfig) -> list:
    ns = [cfg.n] if cfg.n else [2, 3]
    m = cfg.m if cfg.m is not None else 1
    out = []
    for n in ns:
        bad, count, split_weights = [], 0, 0
        for sh in _llt_shapes(n, cfg.max if cfg.max is not None else 12):
            if not realizable_tilings(sh, n):
                continue
            count += 1
            rep = connectivity_report(sh, n, m)
            split_weights += any(v > 1 for v in rep.per_weight.values())
            if not rep.connected or rep.bad_edges:
                bad.append({"shape": rep.shape, "components": rep.components, "bad_edges": rep.bad_edges[:3]})
        out.append({"case": f"n={n} m={m}", "pass": not bad, "shapes": count,
                    "shapes_with_split_weight_classes": split_weights, "witnesses": bad[:5]})
    return out


def _wheel_kernels(cfg: RunConfig):
    sizes = [cfg.k * cfg.n] if cfg.k and cfg.n else [3, 4, 6]
    ms = [cfg.m] if cfg.m is not None else [1, -1]
    for N in sizes:
        for n in range(1, N + 1):
            if N % n:
                continue
            for m in ms:
                if gcd(m, n) != 1:
                    continue
                for fam in ("P", "E"):
                    yield ShuffleKernel(fam, N // n, m, n)


def suite_wheel(cfg: RunConfig) -> list:
    out = []
    for K in _wheel_kernels(cfg):
        ok = wheel_check(K, trials=20, seed=cfg.seed)
        out.append({"case": str(K), "pass": ok})
    bad = ShuffleKernel("E", 1, 1, 3, corrupt=1)
    out.append({"case": f"corrupted {bad}", "pass": not wheel_check(bad, trials=20, seed=cfg.seed),
                "note": "negative control: must violate the wheel conditions"})
    return out


def suite_phi(cfg: RunConfig) -> list:
    out = []
    kmax = cfg.k or 2
    for m, n in cfg.slopes([(1, 2), (1, 3), (2, 3), (-1, 2)]):
        for k in range(1, kmax + 1):
            for fam in ("P", "E"):
                K = ShuffleKernel(fam, k, m, n)
                want = ONE if fam == "P" or k == 1 else ZERO
                vals = {meth: phi_norm_kernel(K, meth) for meth in ("fast", "reference")}
                out.append({"case": str(K), "pass": all(v == want for v in vals.values()),
                            **{meth: serialize(v) for meth, v in vals.items()}})
    return out


def _random_symfunc(rng: random.Random, d: int) -> SymFunc:
    return SymFunc("M", {lam: QTRational.from_fraction(Fraction(rng.randint(-3, 3)))
                         for lam in enumerate_partitions(d)})


def suite_heisenberg(cfg: RunConfig) -> list:
    out = []
    d = cfg.max if cfg.max is not None else 4
    rng = random.Random(cfg.seed)
    for m, n in cfg.slopes([(1, 2), (1, 3)]):
        expected = (s ** n - s ** (-n)) / (s - s ** (-1))
        ok = commutator_check(p_operator(1, m, n), negative_p_operator(1, m, n), d, expected)
        out.append({"case": f"[p_1, p_-1] slope {m}/{n}", "pass": ok, "expected": serialize(expected)})
        A = KernelAction(ShuffleKernel("P", 1, m, n))
        Ad = Adjoint(A)
        for trial in range(3):
            deg = rng.randint(0, max(d - 1, 0))
            f, g = _random_symfunc(rng, deg), _random_symfunc(rng, deg + 1)
            lhs = macdonald_inner(convert(A.apply(f), "p"), convert(g, "p"))
            rhs = macdonald_inner(convert(f, "p"), convert(Ad.apply(g), "p"))
            out.append({"case": f"adjoint slope {m}/{n} trial {trial}", "pass": lhs == rhs})
    return out


def suite_inverse(cfg: RunConfig) -> list:
    out = []
    rng = random.Random(cfg.seed)
    kmax = cfg.k or 2
    for m, n in cfg.slopes([(1, 2), (1, 3), (2, 3)]):
        for k in range(1, kmax + 1):
            for fam in ("P", "E"):
                K = ShuffleKernel(fam, k, m, n)
                if K.N > 4:
                    continue
                good = bad = 0
                for _ in range(200):
                    if good + bad == 20:
                        break
                    qv, tv = _rand_frac(rng), _rand_frac(rng)
                    zs = [_rand_frac(rng) for _ in range(K.N)]
                    if qv == tv or len(set(zs)) < len(zs):
                        continue
                    try:
                        ok = invert_check_generic(K, zs, qv, tv)
                    except ZeroDivisionError:
                        continue  # landed on a pole; draw again
                    good, bad = good + ok, bad + (not ok)
                shapes_ok = all(invert_check(K, EvaluationPoint.from_shape(sh))
                                for sh in enumerate_skew_over(Partition(), K.N))
                out.append({"case": str(K), "pass": good == 20 and shapes_ok,
                            "generic_points": good, "shapes_ok": shapes_ok})
    return out


def suite_coproduct(cfg: RunConfig) -> list:
    rng = random.Random(cfg.seed)
    K = ShuffleKernel("E", 2, 1, 2)
    K1 = ShuffleKernel("E", 1, 1, 2)
    out = []
    for trial in range(10):
        qv, tv = _rand_frac(rng), _rand_frac(rng)
        zs = [_rand_frac(rng) for _ in range(4)]
        if qv == tv or len(set(zs)) < 4:
            continue
        left, right = zs[:2], zs[2:]
        lim = coproduct_limit(K, 1, left, right, qv, tv)
        want = evaluate_cleared(K1, left, qv, tv) * evaluate_cleared(K1, right, qv, tv)
        out.append({"case": f"trial {trial}", "pass": lim == want,
                    "limit": str(lim), "expected": str(want)})
    return out


SUITES = {
    "pieri-classic": suite_pieri_classic,
    "pieri-integer": suite_pieri_integer,
    "hook-eval": suite_hook_eval,
    "degree-scan": suite_degree_scan,
    "llt": suite_llt,
    "collapse": suite_collapse,
    "wheel": suite_wheel,
    "phi": suite_phi,
    "heisenberg": suite_heisenberg,
    "inverse": suite_inverse,
    "coproduct": suite_coproduct,
}


def run_suite(name: str, cfg: RunConfig) -> list:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](cfg)
