"""Command-line front end.

Exit codes: 0 success, 1 a certified inequality or bound is violated,
2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bounds, graphs, projconst
from .eigen import eigenvalues
from .parallel import default_workers
from .tolerances import ToleranceProfile

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1
    tol: ToleranceProfile = ToleranceProfile()
    workers: int = 1
    fmt: str = "json"


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--g6", help="graph6 string (n <= 62)")
    src.add_argument("--edges", type=Path, help="edge-list file: first line n, then 'i j' per line")
    src.add_argument("--family", help="cliques:k,m | icosahedron | paley9 | complete:m")
    p.add_argument("--blowup", type=int, default=1, metavar="T",
                   help="closed blowup factor applied to the graph (default 1)")


def _load_graph(args) -> graphs.Graph:
    try:
        if args.g6 is not None:
            g = graphs.parse_graph6(args.g6)
        elif args.edges is not None:
            g = graphs.parse_edge_list(args.edges.read_text())
        else:
            return graphs.family(args.family, args.blowup)
        return graphs.closed_blowup(g, args.blowup) if args.blowup != 1 else g
    except OSError as exc:
        raise UsageError(f"cannot read edge list: {exc}") from None
    except (graphs.GraphError, graphs.Graph6Error) as exc:
        raise UsageError(str(exc)) from None


def _emit(cfg: RunConfig, payload: dict, rows: list[dict] | None, pretty: str, out) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        rows = rows if rows is not None else [{k: v for k, v in payload.items()
                                               if not isinstance(v, (dict, list))}]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(pretty.rstrip("\n") + "\n")


def cmd_spectrum(args, cfg: RunConfig, out) -> int:
    g = _load_graph(args)
    w = [float(x) for x in eigenvalues(graphs.adjacency_matrix(g), cfg.tol)]
    payload = {"schema_version": SCHEMA_VERSION, "n": g.n, "graph6": _g6_or_none(g),
               "eigenvalues": w}
    rows = [{"index": i + 1, "eigenvalue": x} for i, x in enumerate(w)]
    pretty = "\n".join(f"lambda_{i + 1:<3d} {x: .12f}" for i, x in enumerate(w))
    _emit(cfg, payload, rows, pretty, out)
    return EXIT_OK


def _g6_or_none(g):
    return graphs.to_graph6(g) if g.n <= graphs.GRAPH6_MAX_N else None


def _require_k(g, k):
    if k < 2 or k > g.n:
        raise UsageError(f"need 2 <= k <= n, got k={k}, n={g.n}")


def cmd_bound_check(args, cfg: RunConfig, out) -> int:
    g = _load_graph(args)
    _require_k(g, args.k)
    if args.source == "custom" and args.constant is None:
        raise UsageError("--source custom needs --constant")
    rep = bounds.check_graph(g, args.k, args.source, args.constant, cfg.tol)
    payload = rep.to_dict()
    pretty = (f"lambda_{rep.k} = {rep.lambda_k:.12f}\nbound    = {rep.bound_value:.12f} "
              f"({rep.constant_source})\nslack    = {rep.slack:.3e}\n"
              f"equality = {rep.equality}\nviolation = {rep.violation}")
    _emit(cfg, payload, None, pretty, out)
    return EXIT_VIOLATION if rep.violation else EXIT_OK


def cmd_mu(args, cfg: RunConfig, out) -> int:
    if not 1 <= args.r <= args.n:
        raise UsageError(f"need 1 <= r <= n, got r={args.r}, n={args.n}")
    try:
        if args.method == "exhaustive":
            est = projconst.mu_exhaustive(args.r, args.n, workers=cfg.workers, tol=cfg.tol)
        else:
            est = projconst.mu_alternating(args.r, args.n, starts=args.starts, seed=cfg.seed,
                                           workers=cfg.workers, tol=cfg.tol)
    except projconst.EnumerationCapError as exc:
        raise UsageError(str(exc)) from None
    payload = est.to_dict()
    upper = "-" if est.upper is None else f"{est.upper:.12f}"
    pretty = (f"mu({est.r},{est.N}) in [{est.lower:.12f}, {upper}]  "
              f"method={est.method} exact={est.exact}\nsign pattern {est.sign_pattern.bits}")
    _emit(cfg, payload, None, pretty, out)
    return EXIT_OK


def cmd_certify(args, cfg: RunConfig, out) -> int:
    g = _load_graph(args)
    _require_k(g, args.k)
    cert = bounds.certify_graph(g, args.k, cfg.tol)
    payload = cert.to_dict()
    slacks = {**{f"chain.{k}": v for k, v in cert.chain.slacks.items()}, **cert.slacks}
    rows = [{"step": k, "slack": v, "ok": v >= -cfg.tol.certificate} for k, v in slacks.items()]
    pretty = "\n".join(f"{r['step']:<30s} {r['slack']: .3e}  {'ok' if r['ok'] else 'FAIL'}"
                       for r in rows)
    _emit(cfg, payload, rows, pretty, out)
    return EXIT_OK if cert.ok else EXIT_VIOLATION


def cmd_search(args, cfg: RunConfig, out) -> int:
    if not 2 <= args.k <= args.n:
        raise UsageError(f"need 2 <= k <= n, got k={args.k}, n={args.n}")
    if args.n > bounds.BRUTE_FORCE_MAX_N:
        raise UsageError(f"n={args.n} exceeds the brute-force cap {bounds.BRUTE_FORCE_MAX_N}")
    res = bounds.brute_force_M(args.n, args.k, args.edge_filter, cfg.workers, cfg.tol)
    pretty = f"M_{res.k}({res.n}) = {res.max_lambda_k:.12f}  witness {res.witness}  ({res.graphs_scanned} graphs)"
    _emit(cfg, res.to_dict(), None, pretty, out)
    return EXIT_OK


def cmd_bounds_table(args, cfg: RunConfig, out) -> int:
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    rows = []
    for k in args.k:
        if k < 2:
            raise UsageError("k must be >= 2")
        for n in range(max(args.n_min, k), args.n_max + 1):
            row = {"k": k, "n": n}
            for src in ("known_lambda", "sivashankar", "nikiforov"):
                row[src] = bounds.eigenvalue_bound(k, n, src)
            rows.append(row)
    if not rows:
        raise UsageError("empty n range")
    payload = {"schema_version": SCHEMA_VERSION, "rows": rows}
    pretty = "\n".join(f"k={r['k']} n={r['n']:<4d} known={r['known_lambda']:.6f} "
                       f"siva={r['sivashankar']:.6f} nik={r['nikiforov']:.6f}" for r in rows)
    _emit(cfg, payload, rows, pretty, out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--workers", type=int, default=None,
                        help="parallel workers (default: $PROJBOUND_WORKERS or CPU count)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a tolerance, e.g. --tol equality=1e-6")

    p = _Parser(prog="projbound", description="Graph eigenvalue bounds via projection constants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="adjacency spectrum, descending")
    _add_graph_source(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("bound-check", parents=[common], help="compare lambda_k with the bound")
    _add_graph_source(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--source", choices=bounds.SOURCES, default="known_lambda")
    sp.add_argument("--constant", type=float, help="projection constant for --source custom")
    sp.set_defaults(func=cmd_bound_check)

    sp = sub.add_parser("mu", parents=[common], help="quasimaximal projection constant mu(r, N)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("exhaustive", "alternating"), default="alternating")
    sp.add_argument("--starts", type=int, default=16)
    sp.set_defaults(func=cmd_mu)

    sp = sub.add_parser("certify", parents=[common], help="evaluate the proof chain on a graph")
    _add_graph_source(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("search", parents=[common], help="brute-force M_k(n) for n <= 7")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--edge-filter", type=int, default=None, help="only graphs with at most this many edges")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("bounds-table", parents=[common], help="bound values over a range of n")
    sp.add_argument("--k", type=int, action="append", required=True)
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, required=True)
    sp.set_defaults(func=cmd_bounds_table)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        try:
            tol = ToleranceProfile.from_pairs(args.tol)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        workers = default_workers() if args.workers is None else args.workers
        if workers < 1:
            raise UsageError("--workers must be positive")
        cfg = RunConfig(seed=args.seed, tol=tol, workers=workers, fmt=args.fmt)
        return args.func(args, cfg, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
