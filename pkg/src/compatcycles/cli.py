"""Command-line front end.

Exit status is 0 on success, 1 on usage or input errors and 2 when a
verification step fails.  Output is produced in one write at the end.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from pathlib import Path

from . import chy, compat, counting, expand, feyn
from .graphs import GraphError, all_cycles, find_decomposition, edge_union
from .kinematics import KinematicsError, random_kinematics
from .validation import check_cycle, check_graph, check_kinematics

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("error", "verification failed"))
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# output

def _scalar(v):
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True)
    return v


def render(report: dict, fmt: str, rows: list[dict] | None = None) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "plain":
        lines = []
        for k in sorted(report):
            v = report[k]
            if isinstance(v, list) and v and not isinstance(v[0], (list, dict)):
                lines.append(f"{k}:")
                lines.extend(f"  {x}" for x in v)
            else:
                lines.append(f"{k}: {_scalar(v)}")
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    table = rows if rows is not None else [{k: _scalar(v) for k, v in report.items()}]
    fields = sorted({k for r in table for k in r})
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in table:
        w.writerow(r)
    return buf.getvalue()


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# shared helpers

def _solutions(args, kin):
    cache = Path(args.cache_dir) if args.cache_dir else chy.default_cache_dir()
    return chy.cached_solve(kin, chy.GaugeFixing(), args.tol, seed=args.seed, cache_dir=cache,
                            allow_large=kin.n == 8)


def _kin(args):
    if not args.kin:
        raise UsageError("--kin is required")
    return check_kinematics(args.kin)


def _label_set(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad label list {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args):
    G = check_graph(args.graph)
    priority = _label_set(args.priority) if args.priority else None
    try:
        cs = compat.generate(G, verify=args.verify, priority=priority, limit=args.limit)
    except compat.VerificationError as exc:
        raise VerificationFailed({
            "error": "verification failed",
            "graph": G.notation(),
            "failures": [str(c) for c in exc.failures],
        }) from exc
    return cs.to_dict(), [{"cycle": str(c)} for c in cs.cycles]


def cmd_check(args):
    G = check_graph(args.graph)
    C = check_cycle(args.cycle, G.n)
    d = find_decomposition(edge_union(G, C))
    report = {
        "graph": G.notation(),
        "cycle": str(C),
        "compatible": d is not None,
        "decomposition": [str(d[0]), str(d[1])] if d else None,
    }
    return report, None


def cmd_enumerate(args):
    G = check_graph(args.graph)
    cs = compat.enumerate_compatible(G, force=args.force)
    report = {"graph": G.notation(), "count": cs.count, "cycles": [str(c) for c in cs.cycles]}
    return report, [{"cycle": str(c)} for c in cs.cycles]


_COUNTS = {
    "hultman": counting.hultman_formula,
    "bubbles": counting.bubbles_exact_count,
    "super-catalan": counting.super_catalan,
    "orthogonal": counting.orthogonal_count,
}


def cmd_count(args):
    try:
        value = _COUNTS[args.quantity](args.n)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from exc
    return {"quantity": args.quantity, "n_or_s": args.n, "value": str(value)}, None


def cmd_kin(args):
    kin = random_kinematics(args.n, args.seed, bound=args.bound)
    text = json.dumps(kin.to_dict(), sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, out)
    report = {"n": kin.n, "seed": args.seed, "bound": args.bound, "digest": kin.digest(),
              "out": args.out, "s": kin.to_dict()["s"]}
    return report, None


def cmd_amp(args):
    kin = _kin(args)
    if args.kind == "feyn":
        if not (args.alpha and args.beta):
            raise UsageError("amp feyn needs --alpha and --beta")
        a, b = check_cycle(args.alpha, kin.n), check_cycle(args.beta, kin.n)
        value = feyn.partial_amplitude_unsigned(a, b, kin)
        report = {"alpha": str(a), "beta": str(b), "value": str(value), "float": float(value),
                  "trees": len(feyn.common_trees(a, b))}
        return report, None
    if not (args.g1 and args.g2):
        raise UsageError("amp chy needs --g1 and --g2")
    G1, G2 = check_graph(args.g1, kin.n), check_graph(args.g2, kin.n)
    sols = _solutions(args, kin)
    z = chy.pairing(G1, G2, sols)
    report = {"g1": G1.notation(), "g2": G2.notation(), "value": _complex(z), "abs": abs(z),
              "solutions": len(sols), "residual": sols.residual}
    return report, None


def cmd_monodromy(args):
    kin = _kin(args)
    A = _label_set(args.set)
    sols = _solutions(args, kin)
    try:
        res = chy.monodromy_residual(sols, A, args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = {"set": sorted(A), "a": args.a, "b": args.b, "residuals": [float(r) for r in res],
              "max": float(res.max()), "threshold": args.threshold}
    if report["max"] > args.threshold:
        report["error"] = "monodromy residual above threshold"
        raise VerificationFailed(report)
    return report, [{"solution": i, "residual": float(r)} for i, r in enumerate(res)]


def cmd_expand(args):
    kin = _kin(args)
    G = check_graph(args.graph, kin.n)
    sols = _solutions(args, kin)
    if args.find_basis:
        search = expand.find_compatible_basis(G, sols, tol=args.rank_tol, shuffle_seed=args.shuffle)
        report = search.to_dict()
        if not search.complete:
            report["error"] = "no full-rank compatible basis found"
            raise VerificationFailed(report)
        return report, [{"cycle": c} for c in report["cycles"]]
    probes = list(compat.iter_generate(G))
    if args.shuffle is not None:
        random.Random(args.shuffle).shuffle(probes)
    basis = expand.standard_basis(kin.n)
    try:
        result = expand.expansion_coefficients(G, basis, probes, sols, rank_tol=args.rank_tol)
    except expand.RankDeficientError as exc:
        raise VerificationFailed({
            "error": "probe matrix is rank deficient",
            "graph": G.notation(),
            "rank": exc.rank,
            "needed": exc.needed,
            "condition": exc.condition if math.isfinite(exc.condition) else None,
        }) from exc
    report = result.to_dict()
    rows = [{"basis": str(c), "re": z.real, "im": z.imag} for c, z in zip(basis, result.coefficients)]
    return report, rows


def cmd_rank(args):
    kin = _kin(args)
    if args.n is not None and args.n != kin.n:
        raise UsageError(f"--n {args.n} does not match kinematics with n={kin.n}")
    sel = args.items
    if sel == ["all"]:
        items = list(all_cycles(kin.n))
    elif sel == ["kk"]:
        items = expand.kleiss_kuijf_orderings(kin.n)
    elif len(sel) == 2 and sel[0] == "file":
        lines = Path(sel[1]).read_text().splitlines()
        items = [check_graph(ln.strip(), kin.n) for ln in lines if ln.strip() and not ln.startswith("#")]
    else:
        raise UsageError("--items takes 'all', 'kk' or 'file PATH'")
    if not items:
        raise UsageError("no items to rank")
    sols = _solutions(args, kin)
    rep = expand.numerical_rank(items, sols, args.rank_tol)
    report = rep.to_dict()
    if args.subsets:
        k = math.factorial(kin.n - 3)
        report["subset_size"] = k
        report["subsets"] = math.comb(len(items), k)
        report["full_rank_subsets"] = expand.count_full_rank_subsets(items, sols, k, args.rank_tol)
    rows = [{"index": i, "singular_value": s} for i, s in enumerate(rep.singular_values)]
    return report, rows


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--seed", type=int, default=0, help="random seed (solver start, kinematics)")
    common.add_argument("--tol", type=float, default=1e-12, help="solver residual tolerance")
    common.add_argument("--cache-dir", default=None,
                        help="solution cache directory (default: $COMPATCYCLES_CACHE_DIR)")

    p = _Parser(prog="compatcycles", description="Compatible cycles, counts and scattering amplitudes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", parents=[common], help="construct compatible cycles")
    s.add_argument("--graph", required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--limit", type=int, default=None)
    s.add_argument("--priority", default=None, help="vertex priority order, e.g. '3,1,2,4'")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check", parents=[common], help="test one cycle for compatibility")
    s.add_argument("--graph", required=True)
    s.add_argument("--cycle", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("enumerate", parents=[common], help="all compatible cycles by brute force")
    s.add_argument("--graph", required=True)
    s.add_argument("--force", action="store_true", help="allow n above the default cap")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("count", parents=[common], help="closed-form counts")
    s.add_argument("quantity", choices=sorted(_COUNTS))
    s.add_argument("--n", type=int, required=True, help="n, or s for hultman")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("kin", parents=[common], help="kinematic points")
    s.add_argument("action", choices=("random",))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", type=int, default=9)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_kin)

    s = sub.add_parser("amp", parents=[common], help="partial amplitudes")
    s.add_argument("kind", choices=("feyn", "chy"))
    s.add_argument("--kin", required=True)
    s.add_argument("--alpha")
    s.add_argument("--beta")
    s.add_argument("--g1")
    s.add_argument("--g2")
    s.set_defaults(func=cmd_amp)

    s = sub.add_parser("monodromy", parents=[common], help="cross-ratio identity residuals")
    s.add_argument("--kin", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--threshold", type=float, default=1e-9)
    s.set_defaults(func=cmd_monodromy)

    s = sub.add_parser("expand", parents=[common], help="expand a graph vector in the standard basis")
    s.add_argument("--graph", required=True)
    s.add_argument("--kin", required=True)
    s.add_argument("--shuffle", type=int, default=None, help="shuffle probes with this seed")
    s.add_argument("--rank-tol", type=float, default=1e-9)
    s.add_argument("--find-basis", action="store_true", help="search for a full-rank compatible basis instead")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("rank", parents=[common], help="numerical rank of cycle vectors")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--items", nargs="+", default=["all"], metavar="ITEMS")
    s.add_argument("--kin", required=True)
    s.add_argument("--rank-tol", type=float, default=1e-9)
    s.add_argument("--subsets", action="store_true", help="also count full-rank (n-3)!-subsets")
    s.set_defaults(func=cmd_rank)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, rows = args.func(args)
        status = EXIT_OK
    except VerificationFailed as exc:
        report, rows, status = exc.report, None, EXIT_VERIFY
    except (UsageError, GraphError, KinematicsError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        sys.stderr.write(f"compatcycles: error: {exc}\n")
        return EXIT_USAGE
    except chy.SolverError as exc:
        report, rows, status = {"error": f"solver failed: {exc}"}, None, EXIT_VERIFY
    sys.stdout.write(render(report, args.format, rows))
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
