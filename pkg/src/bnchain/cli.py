"""Command-line front end (``bnchain``)."""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import bounds as bd
from .bn_core import GrdParams, eh_dimension, eh_exists, rho
from .chain_search import ChainError, ChainSpec, Verdict, search
from .sweep import run_case, sweep_cases

EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2

STATUS_TEXT = {"exists": "Exists", "not_exists": "NotExists", "undetermined": "Undetermined"}


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _pair(text: str) -> tuple[int, int]:
    vals = _ints(text)
    if len(vals) != 2:
        raise UsageError(f"expected g1,g2 but got {text!r}")
    return vals


def parse_tcbe(text: str) -> ChainSpec:
    """Shorthand ``g1=..,g2=..,t=..[,n=..]``; n defaults to 2."""
    fields: dict[str, int] = {}
    for item in text.replace(" ", "").split(","):
        key, sep, val = item.partition("=")
        if not sep or key not in ("g1", "g2", "n", "t") or key in fields:
            raise ChainError(f"bad --tcbe field {item!r}")
        try:
            fields[key] = int(val)
        except ValueError as exc:
            raise ChainError(f"bad --tcbe value {item!r}") from exc
    missing = {"g1", "g2", "t"} - fields.keys()
    if missing:
        raise ChainError(f"--tcbe is missing {', '.join(sorted(missing))}")
    return ChainSpec.tcbe(fields["g1"], fields["g2"], fields["t"], fields.get("n", 2))


def parse_chain(text: str) -> ChainSpec:
    """Either the explicit grammar ``tail:<g>(,ell:<t>)+,tail:<g>`` or ``--tcbe ...`` shorthand."""
    text = text.strip()
    if text.startswith("--tcbe"):
        return parse_tcbe(text[len("--tcbe") :].lstrip(" ="))
    return ChainSpec.parse(text)


def _emit(payload) -> None:
    if isinstance(payload, str):
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=False) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_rho(args) -> int:
    value = rho(args.g, args.r, args.d)
    if args.format == "json":
        _emit({"g": args.g, "r": args.r, "d": args.d, "rho": value})
    else:
        _emit(str(value))
    return EXIT_OK


def cmd_eh(args) -> int:
    alpha = _ints(args.alpha)
    ok = eh_exists(args.g, args.r, args.d, alpha)
    dim = eh_dimension(args.g, args.r, args.d, alpha)
    if args.format == "json":
        _emit({"g": args.g, "r": args.r, "d": args.d, "alpha": list(alpha), "exists": ok, "dimension": dim})
    else:
        _emit(f"exists={ok} adjusted_rho={dim}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    g, r, d, g1, g2 = args.g, args.r, args.d, args.g1, args.g2
    if g1 is None or g2 is None:
        g1, g2 = bd.balanced_split(g)
    ex = bd.existence_range(g, r, d, g1, g2)
    thr = bd.nonexistence_threshold(g, r, d, g1, g2)
    out = {
        "locus": bd.LocusId(g, r, d).label(),
        "rho": rho(g, r, d),
        "g1": g1,
        "g2": g2,
        "existence": ex.describe(),
        "existence_values": ex.values(),
        "threshold": thr,
    }
    if r >= 2:
        out["existence_extended"] = bd.existence_range_sk(g, r, d, g1, g2).describe()
    if args.format == "json":
        _emit(out)
    else:
        lines = [f"{out['locus']} (rho={out['rho']}) on Δ({g1},{g2};2,t)"]
        lines.append(f"existence {out['existence']}")
        if "existence_extended" in out:
            lines.append(f"existence (extended) {out['existence_extended']}")
        lines.append(f"threshold {thr}")
        _emit("\n".join(lines))
    return EXIT_OK


def _verdict_text(chain: ChainSpec, r: int, d: int, v: Verdict) -> str:
    head = f"{chain} g^{r}_{d} rho={rho(chain.genus, r, d)}: {STATUS_TEXT[v.status]} ({v.mode}, {v.criterion})"
    lines = [head]
    if v.reason:
        lines.append(f"  reason: {v.reason}")
    for label, w in (("witness", v.witness), ("candidate", v.candidate)):
        if w is None:
            continue
        lines.append(f"  {label}:")
        lines.append(f"    tail g={w.chain.g1}: {w.tail_left.values}")
        for i, b in enumerate(w.bridges, start=1):
            lines.append(f"    E{i}: {b.seq_left.values} -> {b.seq_right.values}  k={b.k}")
        lines.append(f"    tail g={w.chain.g2}: {w.tail_right.values}")
    return "\n".join(lines)


def cmd_search(args) -> int:
    if bool(args.tcbe) == bool(args.chain):
        raise UsageError("give exactly one of --tcbe or --chain")
    chain = parse_tcbe(args.tcbe) if args.tcbe else ChainSpec.parse(args.chain)
    GrdParams(chain.genus, args.r, args.d)
    start = time.perf_counter()
    v = search(
        chain,
        args.r,
        args.d,
        args.mode,
        args.criterion,
        reduce=not args.no_reduce,
        jobs=args.jobs,
        max_candidates=args.max_candidates,
        time_budget=args.time_budget,
    )
    print(f"search took {time.perf_counter() - start:.3f}s", file=sys.stderr)
    if args.format == "json":
        payload = {"chain": chain.render(), "family": str(chain), "r": args.r, "d": args.d}
        payload.update(v.to_dict())
        _emit(payload)
    else:
        _emit(_verdict_text(chain, args.r, args.d, v))
    return EXIT_UNDETERMINED if v.undetermined else EXIT_OK


def cmd_sweep(args) -> int:
    rhos = _ints(args.rho)
    start = time.perf_counter()
    rows, violations = [], 0
    for case in sweep_cases(args.g_max, args.r_max, rhos, above_only=not args.all_t):
        res = run_case(case, args.criterion, args.jobs)
        violations += res.violation
        rows.append(res)
    print(f"sweep: {len(rows)} instances, {violations} violations, {time.perf_counter() - start:.2f}s", file=sys.stderr)
    if args.format == "json":
        _emit(
            [
                {
                    "g1": x.case.g1,
                    "g2": x.case.g2,
                    "r": x.case.r,
                    "d": x.case.d,
                    "t": x.case.t,
                    "rho": x.case.rho,
                    "threshold": x.case.threshold,
                    "verdict": x.verdict.status,
                    "violation": x.violation,
                }
                for x in rows
            ]
        )
    else:
        lines = ["g1,g2,r,d,rho,t,threshold,verdict,violation"]
        for x in rows:
            c = x.case
            lines.append(f"{c.g1},{c.g2},{c.r},{c.d},{c.rho},{c.t},{c.threshold},{x.verdict.status},{int(x.violation)}")
        _emit("\n".join(lines))
    return EXIT_ERROR if violations else EXIT_OK


def cmd_table34(args) -> int:
    pairs = [_pair(p) for p in args.pair] if args.pair else [(16, 16), (17, 15)]
    if args.format in ("md", "csv"):
        _emit(bd.render_tables(args.g, pairs, args.format))
        return EXIT_OK
    _emit(
        [
            {
                "locus": row.locus.label(),
                "r": row.locus.r,
                "d": row.locus.d,
                "rho": row.locus.rho,
                "g1": row.g1,
                "g2": row.g2,
                "existence": row.existence.describe(),
                "existence_values": row.existence.values(),
                "threshold": row.threshold,
            }
            for row in bd.table_rows(args.g, pairs)
        ]
    )
    return EXIT_OK


def cmd_relations(args) -> int:
    pairs = [(args.g1, args.g2)] + [_pair(p) for p in args.pair]
    reports = {pair: {rel.t: rel for rel in bd.relation_report(args.g, *pair)} for pair in pairs}
    unions = []
    for spec in args.union:
        members = []
        for item in spec.split(";"):
            g1, g2, t = _ints(item)
            if (g1, g2) not in reports:
                reports[(g1, g2)] = {rel.t: rel for rel in bd.relation_report(args.g, g1, g2)}
            if t not in reports[(g1, g2)]:
                raise UsageError(f"t={t} outside the reported range for ({g1},{g2})")
            members.append(reports[(g1, g2)][t])
        unions.append(members)
    if args.format == "json":
        payload = {
            "per_t": [
                {
                    "g1": rel.g1,
                    "g2": rel.g2,
                    "t": rel.t,
                    "in": [x.label() for x in rel.inside],
                    "out": [x.label() for x in rel.outside],
                    "gap": [x.label() for x in rel.gap],
                    "statement": rel.statement(),
                }
                for pair in pairs
                for rel in reports[pair].values()
                if rel.informative
            ],
            "unions": [bd.union_statement(m) for m in unions],
        }
        _emit(payload)
        return EXIT_OK
    lines = []
    for pair in pairs:
        for rel in reports[pair].values():
            if rel.informative:
                lines.append(rel.statement())
    lines.append("")
    lines.append("grouped:")
    for pair in pairs:
        for ts, _ in bd.group_relations(reports[pair].values()):
            lines.append(bd.union_statement([reports[pair][t] for t in ts]))
    if unions:
        lines.append("")
        lines.append("unions:")
        lines.extend(bd.union_statement(m) for m in unions)
    _emit("\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import check_agreement

    start = time.perf_counter()
    reports = [check_agreement(t, args.d_max, args.samples, args.seed) for t in args.t]
    print(f"oracle took {time.perf_counter() - start:.2f}s", file=sys.stderr)
    if args.format == "json":
        _emit([r.to_dict() for r in reports])
    else:
        lines = []
        for r in reports:
            lines.append(f"t={r.t}: {r.curve}")
            lines.append(
                f"  dim cells {r.dim_cells} mismatches {len(r.dim_mismatches)}; "
                f"pair cells {r.pair_cells} mismatches {len(r.pair_mismatches)}; "
                f"realized {r.realized} failures {len(r.realize_failures)}"
            )
        _emit("\n".join(lines))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_ERROR


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bnchain", description="Limit linear series on elliptic chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def grd(p, need_g=True):
        if need_g:
            p.add_argument("--g", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("rho", help="Brill-Noether number")
    grd(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("eh", help="one-pointed existence criterion for a general curve")
    grd(p)
    p.add_argument("--alpha", required=True, help="ramification sequence, e.g. 0,1,1")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eh)

    p = sub.add_parser("bounds", help="existence range and nonexistence threshold")
    grd(p)
    p.add_argument("--g1", type=int)
    p.add_argument("--g2", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="decide existence of a limit g^r_d on a chain")
    p.add_argument("--tcbe", help="g1=..,g2=..,t=..[,n=..]")
    p.add_argument("--chain", help="tail:<g>,ell:<t>,...,tail:<g>")
    grd(p, need_g=False)
    p.add_argument("--mode", choices=("crude", "refined"), default="crude")
    p.add_argument("--criterion", choices=("auto", "sufficient", "necessary"), default="auto")
    p.add_argument("--no-reduce", action="store_true", help="run the unreduced crude necessary search")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-candidates", type=int, default=500_000)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", help="search every small instance above the threshold")
    p.add_argument("--g-max", type=int, default=14)
    p.add_argument("--r-max", type=int, default=2)
    p.add_argument("--rho", default="-1,-2")
    p.add_argument("--all-t", action="store_true", help="include t below the threshold (no check there)")
    p.add_argument("--criterion", choices=("auto", "sufficient", "necessary"), default="necessary")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table34", help="existence ranges and thresholds for genus-g loci")
    p.add_argument("--g", type=int, default=34)
    p.add_argument("--pair", action="append", default=[], help="g1,g2 (repeatable)")
    p.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.set_defaults(func=cmd_table34)

    p = sub.add_parser("relations", help="locus memberships implied for each torsion order")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--g1", type=int, required=True)
    p.add_argument("--g2", type=int, required=True)
    p.add_argument("--pair", action="append", default=[], help="extra g1,g2 family (repeatable)")
    p.add_argument("--union", action="append", default=[], help="g1,g2,t;g1,g2,t;... (repeatable)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("oracle", help="compare the elliptic model with finite-field Riemann-Roch")
    p.add_argument("--t", type=int, nargs="+", default=[3, 4, 5])
    p.add_argument("--d-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"bnchain {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - report, never traceback to the user
        print(f"bnchain {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
