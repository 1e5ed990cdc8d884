"""Command-line front end.

Settings are resolved as: command-line flag, then environment variable, then
built-in default.  Environment variables: ``MNPIERI_DEGREE_BOUND``,
``MNPIERI_CACHE_DIR``, ``MNPIERI_THREADS``, ``MNPIERI_SEED``, ``MNPIERI_FORMAT``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage and configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from math import gcd

from .hall import (e_operator, negative_e_operator, negative_p_operator, p_operator)
from .kernels import ShuffleKernel, sym_evaluate
from .llt import NonConstantRatio, connectivity_report, gamma_ratio, llt_G
from .qt import PoleAtTarget, QTRational, serialize
from .shapes import parse_partition, parse_skew
from .stable import (StableExpansion, degree_scan, pieri_rhs, validate_stable,
                     verify_pieri_integer_slope, verify_pieri_negative_integer_slope)
from .suites import SUITES, RunConfig, run_suite
from .symfunc import (CacheError, DegreeBoundExceeded, SymFunc, SymRing, convert, nabla,
                      set_default_ring)

SCHEMA = "mnpieri-report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# expressions


_BASES = set("mpehsPM")
_TOKEN = re.compile(r"\s*([A-Za-z_]+)\s*\[([^\]]*)\]\s*")


def _split_args(text: str) -> list[str]:
    depth, cur, out = 0, "", []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [a.strip() for a in out]


def _slope_args(args: str) -> tuple[int, int, int]:
    mt = re.fullmatch(r"\s*(-?\d+)\s*,\s*(-?\d+)\s*/\s*(\d+)\s*", args)
    if not mt:
        raise UsageError(f"expected 'k,m/n', got {args!r}")
    k, m, n = (int(v) for v in mt.groups())
    if n < 1 or gcd(m, n) != 1:
        raise UsageError(f"slope {m}/{n} needs n >= 1 and gcd(m, n) = 1")
    return k, m, n


def parse_operator(text: str):
    """``e[k,m/n]`` or ``p[k,m/n]``; negative ``k`` gives the lowering operators."""
    mt = re.fullmatch(r"\s*([ep])\s*\[([^\]]*)\]\s*", text)
    if not mt:
        raise UsageError(f"unknown operator {text!r}; expected e[k,m/n] or p[k,m/n]")
    fam = mt.group(1)
    k, m, n = _slope_args(mt.group(2))
    if k == 0:
        raise UsageError("k must be nonzero")
    if fam == "e":
        return e_operator(k, m, n) if k > 0 else negative_e_operator(-k, m, n)
    return p_operator(k, m, n) if k > 0 else negative_p_operator(-k, m, n)


def _outer_call(text: str):
    """Split ``head(inner)`` into ``(head, inner)``, or None."""
    text = text.strip()
    if not text.endswith(")"):
        return None
    depth = 0
    for i in range(len(text) - 1, -1, -1):
        ch = text[i]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
            if depth == 0:
                head = text[:i].strip()
                return (head, text[i + 1:-1]) if head else None
    return None


def evaluate_expression(text: str):
    """Evaluate a ``compute`` expression to a QTRational or SymFunc."""
    text = text.strip()
    call = _outer_call(text)
    if call is not None:
        head, inner = call
        if head == "nabla":
            parts = _split_args(inner)
            r = int(parts[1]) if len(parts) > 1 else 1
            return nabla(_as_symfunc(evaluate_expression(parts[0])), r)
        if head == "convert":
            parts = _split_args(inner)
            if len(parts) != 2 or parts[1] not in _BASES:
                raise UsageError("convert(expr, basis) with basis one of m p e h s P M")
            return convert(_as_symfunc(evaluate_expression(parts[0])), parts[1])
        mt = re.fullmatch(r"([PE])\s*\[([^\]]*/[^\]]*)\]", head)
        if mt:
            k, m, n = _slope_args(mt.group(2))
            shape = inner.strip()
            if shape.startswith("shape"):
                shape = shape[len("shape"):]
            return sym_evaluate(ShuffleKernel(mt.group(1), k, m, n), parse_skew(shape.strip()))
        if re.fullmatch(r"[ep]\s*\[[^\]]*/[^\]]*\]", head):
            return parse_operator(head).apply(_as_symfunc(evaluate_expression(inner)))
        raise UsageError(f"unknown function {head!r}")
    mt = re.fullmatch(r"([mpehsPM])\s*\[(.*)\]", text)
    if mt:
        return SymFunc.basis_element(mt.group(1), parse_partition(mt.group(2)))
    if text.strip() in ("1", "one"):
        return SymFunc.one("M")
    raise UsageError(f"cannot parse expression {text!r}")


def _as_symfunc(v) -> SymFunc:
    if not isinstance(v, SymFunc):
        raise UsageError("expected a symmetric function")
    return v


def _format_value(v, expand_atoms: bool = False):
    if isinstance(v, QTRational):
        return serialize(v)
    if expand_atoms:
        v = convert(v, "m")
    return {f"{v.basis}{lam}": serialize(c) for lam, c in v.items()}


# --------------------------------------------------------------------------
# configuration


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{name}={raw!r} is not an integer") from exc


def build_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        degree_bound=ns.degree_bound if ns.degree_bound is not None else _env_int("MNPIERI_DEGREE_BOUND", 8),
        m=ns.m, n=ns.n, k=ns.k, max=ns.max, vars=ns.vars,
        cache_dir=ns.cache_dir if ns.cache_dir is not None else (os.environ.get("MNPIERI_CACHE_DIR") or None),
        format=ns.format or os.environ.get("MNPIERI_FORMAT") or "text",
        threads=ns.threads if ns.threads is not None else _env_int("MNPIERI_THREADS", 1),
        seed=ns.seed if ns.seed is not None else _env_int("MNPIERI_SEED", 0),
    )
    if cfg.format not in ("text", "json"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("--n must be positive")
    if cfg.m is not None and cfg.n is not None and gcd(cfg.m, cfg.n) != 1:
        raise UsageError(f"gcd({cfg.m}, {cfg.n}) != 1")
    if cfg.threads < 1:
        raise UsageError("--threads must be positive")
    return cfg


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("run configuration")
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--max", type=int, help="size limit")
    g.add_argument("--degree-bound", type=int, dest="degree_bound")
    g.add_argument("--vars", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int)
    g.add_argument("--format", choices=("text", "json"))
    g.add_argument("--json", action="store_const", const="json", dest="format")
    g.add_argument("--cache-dir", dest="cache_dir")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mnpieri", description="Exact m/n Pieri rule computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    _common(p)

    p = sub.add_parser("compute", help="evaluate an expression")
    p.add_argument("expression")
    _common(p)

    p = sub.add_parser("act", help="apply an operator to a symmetric function")
    p.add_argument("--op", required=True)
    p.add_argument("--on", required=True)
    _common(p)

    p = sub.add_parser("cache", help="manage the Macdonald cache")
    p.add_argument("action", choices=("build", "verify", "clear"))
    _common(p)

    p = sub.add_parser("stable", help="stable basis expansions")
    p.add_argument("action", choices=("validate", "build"))
    p.add_argument("--file")
    p.add_argument("--r", type=int, default=0, help="integer slope for build")
    _common(p)

    p = sub.add_parser("pieri", help="Pieri rule checks")
    p.add_argument("action", choices=("verify", "rhs"))
    p.add_argument("--mu", default="[]")
    p.add_argument("--negative", action="store_true", help="horizontal-strip rule for e_{-k}")
    _common(p)

    p = sub.add_parser("degree", help="diagonal degree scanner")
    p.add_argument("action", choices=("scan",))
    _common(p)

    p = sub.add_parser("llt", help="ribbon tableau series")
    p.add_argument("action", choices=("series", "gamma", "collapse"))
    p.add_argument("--shape", required=True)
    _common(p)
    return parser


# --------------------------------------------------------------------------
# commands


def _report(cmd: str, cfg: RunConfig, cases: list, extra: dict | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "command": cmd,
        "config": {k: getattr(cfg, k) for k in ("m", "n", "k", "max", "degree_bound", "vars", "seed")},
        "status": "pass" if all(c.get("pass", True) for c in cases) else "fail",
        "cases": cases,
    }
    if extra:
        doc.update(extra)
    return doc


def _emit(doc: dict, cfg: RunConfig, out):
    if cfg.format == "json":
        out.write(json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n")
        return
    out.write(f"{doc['command']}: {doc['status']} (seed {cfg.seed})\n")
    for c in doc["cases"]:
        tag = "PASS" if c.get("pass", True) else "FAIL"
        rest = {k: v for k, v in c.items() if k not in ("case", "pass") and v not in ({}, [], None)}
        line = f"  [{tag}] {c.get('case', '')}"
        if rest:
            line += "  " + json.dumps(rest, sort_keys=True, default=str)
        out.write(line + "\n")
    if "value" in doc:
        val = doc["value"]
        if isinstance(val, dict):
            for k, v in val.items():
                out.write(f"  {k}: {v}\n")
        else:
            out.write(f"  {val}\n")


def cmd_verify(ns, cfg) -> dict:
    return _report(f"verify {ns.suite}", cfg, run_suite(ns.suite, cfg))


def cmd_compute(ns, cfg) -> dict:
    v = evaluate_expression(ns.expression)
    atom = bool(re.fullmatch(r"\s*[PM]\s*\[.*\]\s*", ns.expression))
    return _report("compute", cfg, [], {"expression": ns.expression, "value": _format_value(v, atom)})


def cmd_act(ns, cfg) -> dict:
    op = parse_operator(ns.op)
    f = _as_symfunc(evaluate_expression(ns.on))
    return _report("act", cfg, [], {"operator": ns.op, "on": ns.on, "value": _format_value(op.apply(f))})


def cmd_cache(ns, cfg) -> dict:
    ring = SymRing(cfg.degree_bound, cfg.cache_dir)
    if cfg.cache_dir is None:
        raise UsageError("cache commands need --cache-dir or MNPIERI_CACHE_DIR")
    if ns.action == "build":
        ring.build_cache(cfg.degree_bound)
        return _report("cache build", cfg, [{"case": str(ring.cache.path), "pass": True}])
    if ns.action == "clear":
        removed = ring.cache.clear()
        return _report("cache clear", cfg, [{"case": str(ring.cache.path), "pass": True, "removed": removed}])
    bad = ring.verify_cache()
    return _report("cache verify", cfg, [{"case": str(ring.cache.path), "pass": not bad, "mismatching_degrees": bad}])


def cmd_stable(ns, cfg) -> dict:
    if ns.action == "build":
        E = StableExpansion.integer_slope(ns.r, range(0, (cfg.max if cfg.max is not None else 4) + 1))
        doc = json.loads(E.to_json())
        return _report("stable build", cfg, [], {"value": doc})
    if not ns.file:
        raise UsageError("stable validate needs --file")
    try:
        with open(ns.file) as fh:
            E = StableExpansion.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read expansion: {exc}") from exc
    rep = validate_stable(E)
    cases = [{"case": f"{c['lambda']} <- {c['mu']} {c['condition']}", **{k: v for k, v in c.items()
              if k not in ("lambda", "mu", "condition")}} for c in rep.checks]
    return _report("stable validate", cfg, cases)


def cmd_pieri(ns, cfg) -> dict:
    m = cfg.m if cfg.m is not None else 0
    n = cfg.n if cfg.n is not None else 1
    k = cfg.k if cfg.k is not None else 1
    if ns.action == "rhs":
        mu = parse_partition(ns.mu)
        from .stable import pieri_rhs_negative
        rhs = pieri_rhs_negative(mu, k, m, n) if ns.negative else pieri_rhs(mu, k, m, n)
        return _report("pieri rhs", cfg, [], {"value": {str(l): serialize(c) for l, c in sorted(rhs.items())}})
    if n != 1:
        raise UsageError("operator-side verification needs an integer slope (--n 1)")
    from .shapes import enumerate_partitions
    cases = []
    for size in range((cfg.max if cfg.max is not None else 5) + 1):
        for mu in enumerate_partitions(size):
            if size + k > cfg.degree_bound:
                continue
            if ns.negative:
                if size < k:
                    continue
                ok = verify_pieri_negative_integer_slope(mu, k, m)
            else:
                ok = verify_pieri_integer_slope(mu, k, m) and verify_pieri_integer_slope(mu, k, m, route="nabla")
            cases.append({"case": f"mu={mu}", "pass": ok})
    return _report("pieri verify", cfg, cases)


def cmd_degree(ns, cfg) -> dict:
    m = cfg.m if cfg.m is not None else 1
    n = cfg.n if cfg.n is not None else 2
    k = cfg.k if cfg.k is not None else 1
    rep = degree_scan(m, n, k, cfg.max if cfg.max is not None else 8, workers=cfg.threads)
    cases = []
    for r in rep.records:
        ok = not any(r.get(f) is False for f in ("upper_ok", "lower_ok", "equality_ok", "hd_ok", "dlambda_ok"))
        cases.append({"case": r["shape"], "pass": ok, **{k2: v for k2, v in r.items() if k2 != "shape"}})
    return _report("degree scan", cfg, cases, {"summary": rep.summary()})


def cmd_llt(ns, cfg) -> dict:
    sh = parse_skew(ns.shape)
    n = cfg.n if cfg.n is not None else 2
    m = cfg.m if cfg.m is not None else 1
    if ns.action == "series":
        G = llt_G(sh, n, m, cfg.vars or 3)
        val = {",".join(map(str, nu)): serialize(c) for nu, c in sorted(G.coeffs.items(), reverse=True)}
        return _report("llt series", cfg, [{"case": "symmetry", "pass": G.is_symmetric()}], {"value": val})
    if ns.action == "gamma":
        try:
            g = gamma_ratio(sh, n, m)
        except NonConstantRatio as exc:
            return _report("llt gamma", cfg, [{"case": str(sh), "pass": False, "witness": str(exc)}])
        return _report("llt gamma", cfg, [{"case": str(sh), "pass": True}], {"value": serialize(g)})
    rep = connectivity_report(sh, n, m)
    case = {"case": rep.shape, "pass": rep.connected and not rep.bad_edges, "vertices": rep.vertices,
            "edges": rep.edges, "components": rep.components,
            "minimal_in_component": rep.minimal_in_component,
            "per_weight": {",".join(map(str, k)): v for k, v in rep.per_weight.items()}}
    return _report("llt collapse", cfg, [case])


COMMANDS = {
    "verify": cmd_verify,
    "compute": cmd_compute,
    "act": cmd_act,
    "cache": cmd_cache,
    "stable": cmd_stable,
    "pieri": cmd_pieri,
    "degree": cmd_degree,
    "llt": cmd_llt,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = build_config(ns)
        set_default_ring(SymRing(cfg.degree_bound, cfg.cache_dir))
        doc = COMMANDS[ns.command](ns, cfg)
    except (UsageError, ValueError, DegreeBoundExceeded, CacheError, PoleAtTarget) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(doc, cfg, out)
    return EXIT_OK if doc["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
