"""Command-line front end: exact values, verification grids and cache upkeep.

Verification commands print one record per grid point in grid order, then a
summary line on stderr.  Exit status: 0 when every residual is exactly zero,
1 when something failed, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product

from . import constraints, givental, graphs, lambda_point, pixton, psi
from .errors import CacheParseError, ConsistencyError, TruncationError, ValidationError
from .exact import format_rational, multinomial
from .table import TABLE, IntegralTable
from .targets import descendant, get_target

CACHE_ENV = "LAMBDAG_CACHE"

# supported bounds of the verify grids
MAX_POINT_GENUS = 3
MAX_DEGREE = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    cache: str | None = None
    fmt: str = "text"
    threads: int = 1


def _int_list(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> range:
    """'a..b' (inclusive), 'a:b' or a single integer."""
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            try:
                return range(int(lo), int(hi) + 1)
            except ValueError:
                break
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    return range(k, k + 1)


# --- report records ----------------------------------------------------------

def _record(check, target, indices, residual, nontrivial, ok, **extra) -> dict:
    rec = {
        "check": check,
        "target": target,
        "indices": indices,
        "residual": format_rational(residual),
        "nontrivial_terms": int(nontrivial),
        "status": "ok" if ok else "fail",
    }
    rec.update(extra)
    return rec


def _text_line(rec: dict) -> str:
    idx = " ".join(f"{k}={_compact(v)}" for k, v in rec["indices"].items())
    extra = "".join(f" {k}={_compact(v)}" for k, v in rec.items()
                    if k not in {"check", "target", "indices", "residual", "nontrivial_terms", "status"})
    return (f"{rec['status']:4} {rec['check']} {rec['target']} {idx} "
            f"residual={rec['residual']} nontrivial={rec['nontrivial_terms']}{extra}")


def _compact(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_compact(x) for x in v) + "]"
    return str(v).lower() if isinstance(v, bool) else str(v)


def _emit(cfg: RunConfig, records: list) -> int:
    for rec in records:
        print(json.dumps(rec, sort_keys=False) if cfg.fmt == "json" else _text_line(rec))
    failed = sum(rec["status"] != "ok" for rec in records)
    nontrivial = sum(rec["nontrivial_terms"] > 0 for rec in records)
    print(f"{len(records)} points, {nontrivial} nontrivial, {failed} failed", file=sys.stderr)
    return 1 if failed else 0


def _run_grid(cfg: RunConfig, fn, points) -> list:
    points = list(points)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(fn, points))
    return [fn(p) for p in points]


# --- grids -------------------------------------------------------------------

def _multisets(items, max_order):
    for k in range(max_order + 1):
        yield from combinations_with_replacement(items, k)


def theta_point_grid(genera, ns, ms, max_order):
    for g, n, m in product(genera, ns, ms):
        target = 2 * g - 2 - m - n
        r_max = max(0, target + max_order + 1)
        for derivs in _multisets(range(r_max + 1), max_order):
            q = lambda_point.PointThetaQuery(g, n, m, derivs)
            if q.admissible():
                yield q


def _theta_point_record(q) -> dict:
    ev = lambda_point.theta_point_eval(q)
    idx = {"g": q.g, "n": q.n, "m": q.m, "derivs": list(q.derivs)}
    return _record("theta-point", "point", idx, ev.value, ev.nontrivial, ev.value == 0)


def theta_target_grid(target, ns, ms, max_order, q_max, genus):
    X = get_target(target)
    for n, m, beta, degree in product(ns, ms, range(X.rank), range(q_max + 1)):
        if X.dim == 0 and degree:
            continue
        rhs = (1 - genus) * (X.dim - 3) + 1 - genus + X.c1_degree * degree
        r_max = max(0, rhs - m - n - X.p(beta) + max_order + 1)
        dirs = [(r, a) for r in range(r_max + 1) for a in range(X.rank)]
        for derivs in _multisets(dirs, max_order):
            q = constraints.ThetaQuery(X.name, n, m, beta, derivs, degree)
            if q.admissible(genus):
                yield q


def _indices(q) -> dict:
    return {"n": q.n, "m": q.m, "beta": q.beta, "derivs": [list(d) for d in q.derivs], "degree": q.degree}


def _theta0_record(q) -> dict:
    ev = constraints.theta0_eval(q)
    return _record("theta0", q.target, _indices(q), ev.value, ev.nontrivial, ev.value == 0)


def _theta1_record(q) -> dict:
    rep = constraints.theta1_report(q)
    ok = rep.ratio_ok and rep.value == 0
    return _record("theta1-pixton", q.target, _indices(q), rep.value, rep.nontrivial, ok,
                   ratio_ok=rep.ratio_ok)


def lambda_theorem_grid(g_max, n_max):
    for g in range(g_max + 1):
        for n in range(1, n_max + 1):
            if 2 * g - 2 + n <= 0:
                continue
            total = 2 * g - 3 + n
            for exps in combinations_with_replacement(range(total, -1, -1), n):
                if sum(exps) == total:
                    yield g, exps


def _lambda_record(point) -> dict:
    g, exps = point
    lhs = pixton.hodge_integral(g, exps)
    rhs = lambda_point.lambda_theorem_value(g, exps)
    return _record("lambda-theorem", "point", {"g": g, "exponents": list(exps)}, lhs - rhs,
                   int(lhs != 0), lhs == rhs, value=format_rational(lhs))


# --- commands ----------------------------------------------------------------

def cmd_psi(cfg, ns):
    print(format_rational(psi.psi_integral(ns.g, _int_list(ns.exponents))))
    return 0


def cmd_hodge(cfg, ns):
    print(format_rational(pixton.hodge_integral(ns.g, _int_list(ns.exponents))))
    return 0


def cmd_bg(cfg, ns):
    print(format_rational(lambda_point.b_g(ns.g)))
    return 0


def cmd_dr(cfg, ns):
    tokens = [t for t in ns.rest if t != "--"]
    if len(tokens) != 3:
        raise UsageError("usage: dr g a1,...,an -- k1,...,kn")
    try:
        g = int(tokens[0])
    except ValueError:
        raise UsageError(f"genus must be an integer, got {tokens[0]!r}") from None
    A, K = _int_list(tokens[1]), _int_list(tokens[2])
    if len(A) != len(K):
        raise UsageError("ramification data and psi exponents need the same length")
    print(format_rational(pixton.dr_pairing(g, A, K)))
    return 0


def cmd_graphs(cfg, ns):
    gs = graphs.enumerate_trees(ns.g, ns.n) if ns.trees else graphs.enumerate_graphs(ns.g, ns.n, ns.max_edges)
    for G in gs:
        if cfg.fmt == "json":
            print(json.dumps({"graph": G.dump(), "aut": graphs.aut_order(G)}))
        else:
            print(G.dump())
    return 0


def cmd_verify(cfg, ns):
    if ns.check == "theta-point":
        genera = ns.g if ns.g is not None else range(0, 3)
        if max(genera, default=0) > MAX_POINT_GENUS:
            raise UsageError(f"point grids are supported for g <= {MAX_POINT_GENUS}")
        ns_ = ns.n_range or range(-1, 4)
        ms = ns.m_range or range(0, 4)
        order = 2 if ns.deriv_order is None else ns.deriv_order
        pts = theta_point_grid(genera, ns_, ms, order)
        return _emit(cfg, _run_grid(cfg, _theta_point_record, pts))
    if ns.check in ("theta0", "theta1"):
        target = get_target(ns.target or "P1").name
        q_max = ns.q_max if ns.q_max is not None else (2 if ns.check == "theta0" else 1)
        if q_max > MAX_DEGREE:
            raise UsageError(f"Novikov degree is supported up to {MAX_DEGREE}")
        ns_ = ns.n_range or range(-1, 3)
        ms = ns.m_range or range(0, 3)
        order = 1 if ns.deriv_order is None else ns.deriv_order
        genus = 0 if ns.check == "theta0" else 1
        pts = theta_target_grid(target, ns_, ms, order, q_max, genus)
        fn = _theta0_record if genus == 0 else _theta1_record
        return _emit(cfg, _run_grid(cfg, fn, pts))
    if ns.check == "lambda-theorem":
        g_max = 2 if ns.g_max is None else ns.g_max
        if g_max > MAX_POINT_GENUS:
            raise UsageError(f"supported for g <= {MAX_POINT_GENUS}")
        pts = lambda_theorem_grid(g_max, ns.n_max)
        return _emit(cfg, _run_grid(cfg, _lambda_record, pts))
    raise UsageError(f"unknown check {ns.check!r}")


def cmd_givental(cfg, ns):
    data = givental.load_data(ns.data)
    bad = givental.validate(data)
    if bad:
        for v in bad:
            print(f"violation {v.kind} at order {v.order}: {v.detail}", file=sys.stderr)
        return 1
    res = givental.tree_sum(data, givental.TreeQuery.unit_legs(data, ns.g, ns.n))
    if cfg.fmt == "json":
        print(json.dumps({"g": ns.g, "n": ns.n, "value": format_rational(res.value),
                          "required_order": res.required_order, "trees": res.trees}))
    else:
        print(f"{format_rational(res.value)} required_order={res.required_order} trees={res.trees}")
    return 0


def cmd_cache(cfg, ns):
    if not cfg.cache:
        raise UsageError(f"no cache file: pass --cache or set {CACHE_ENV}")
    if ns.action == "stats":
        stats = TABLE.stats()
        if cfg.fmt == "json":
            print(json.dumps({"path": cfg.cache, "records": len(TABLE), "kinds": dict(sorted(stats.items()))}))
        else:
            print(f"{cfg.cache}: {len(TABLE)} records")
            for kind, count in sorted(stats.items()):
                print(f"  {kind} {count}")
        return 0
    bad = check_cache(TABLE)
    if ns.action == "verify":
        for key, rule in bad:
            print(f"fail {rule} {key}")
        print(f"{len(TABLE)} records, {len(bad)} violations", file=sys.stderr)
        return 1 if bad else 0
    # gc: drop records breaking an invariant and those the dimension gate makes 0
    drop = {key for key, _ in bad}
    keep = [(k, v) for k, v in TABLE.items() if k not in drop and v != 0]
    removed = len(TABLE) - len(keep)
    TABLE.clear()
    for k, v in keep:
        TABLE.put(k, v)
    TABLE.save(cfg.cache)
    print(f"removed {removed}, kept {len(keep)}")
    return 0


def check_cache(table) -> list:
    """Invariant violations over every record kind in the table."""
    bad = psi.check_table(table)
    fresh = IntegralTable()  # b_g must not be read back from the table under test
    for key, value in sorted(table.items()):
        if key[0] == "HODGE":
            _, g, exps = key
            expected = Fraction(0)
            if sum(exps) == 2 * g - 3 + len(exps):
                bg = pixton.hodge_integral(g, (2 * g - 2,), fresh) if g else Fraction(1)
                expected = multinomial(exps) * bg
            if value != expected:
                bad.append((key, "lambda-theorem"))
        elif key[0] == "GW0":
            _, name, degree, ins = key
            rule = _gw0_violation(name, degree, ins, value)
            if rule:
                bad.append((key, rule))
    return bad


def _gw0_violation(name, degree, ins, value):
    X = get_target(name)
    ins = list(ins)
    if (0, 0) in ins:
        rest = list(ins)
        rest.remove((0, 0))
        rhs = sum((descendant(X, degree, rest[:j] + [(k - 1, a)] + rest[j + 1:])
                   for j, (k, a) in enumerate(rest) if k > 0), Fraction(0))
        return "string" if rhs != value else None
    if (1, 0) in ins:
        rest = list(ins)
        rest.remove((1, 0))
        return "dilaton" if (len(rest) - 2) * descendant(X, degree, rest) != value else None
    return None


# --- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=argparse.SUPPRESS, help=f"cache file (overrides ${CACHE_ENV})")
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="lambdag", parents=[common], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("psi", "pure psi integral"), ("hodge", "psi integral against lambda_g")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("g", type=int)
        s.add_argument("exponents", nargs="?", default="")

    s = sub.add_parser("bg", parents=[common], help="one-point constant b_g")
    s.add_argument("g", type=int)

    s = sub.add_parser("dr", parents=[common], help="DR cycle paired with psi monomial: dr g A -- K")
    s.add_argument("rest", nargs=argparse.REMAINDER)

    s = sub.add_parser("graphs", parents=[common], help="stable graphs of genus g with n legs")
    s.add_argument("g", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--trees", action="store_true")
    s.add_argument("--max-edges", type=int, default=None)

    s = sub.add_parser("verify", parents=[common], help="run a verification grid")
    s.add_argument("check", choices=["theta-point", "theta0", "theta1", "lambda-theorem"])
    s.add_argument("--g", type=_range, default=None)
    s.add_argument("--n-range", type=_range, default=None)
    s.add_argument("--m-range", type=_range, default=None)
    s.add_argument("--deriv-order", type=int, default=None)
    s.add_argument("--target", default=None)
    s.add_argument("--q-max", type=int, default=None)
    s.add_argument("--g-max", type=int, default=None)
    s.add_argument("--n-max", type=int, default=4)

    s = sub.add_parser("givental", parents=[common], help="stable-tree sum for semisimple data")
    s.add_argument("--data", required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("cache", parents=[common], help="inspect or rewrite the cache file")
    s.add_argument("action", choices=["stats", "verify", "gc"])
    return p


COMMANDS = {
    "psi": cmd_psi, "hodge": cmd_hodge, "bg": cmd_bg, "dr": cmd_dr, "graphs": cmd_graphs,
    "verify": cmd_verify, "givental": cmd_givental, "cache": cmd_cache,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(
        ns.command,
        cache=getattr(ns, "cache", None) or os.environ.get(CACHE_ENV) or None,
        fmt=getattr(ns, "fmt", "text"),
        threads=max(1, getattr(ns, "threads", 1)),
    )
    try:
        if cfg.cache and os.path.exists(cfg.cache):
            TABLE.load(cfg.cache)
        code = COMMANDS[ns.command](cfg, ns)
        if cfg.cache and TABLE.dirty and ns.command != "cache":
            TABLE.save(cfg.cache)
        return code
    except (CacheParseError, ValidationError, TruncationError, ConsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, argparse.ArgumentTypeError) as exc:
        # UnstableInput, UnsupportedGenus and UnsupportedTarget land here
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
