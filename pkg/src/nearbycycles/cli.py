"""Command-line entry point.

Every subcommand reads an optional JSON config, applies flag overrides and
writes a deterministic document to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import groth, nearby
from .config import FORMATS, ConfigError, RunConfig, load_config, parse_suites
from .exactlin import format_scalar
from .nearby import ChainMapError, NotAComplexError
from .spectral import WeightOffsets, full_page, purity_report, semistable_demo_fiber, semistable_e1_page
from .strata import FiberModel, ModelError, StalkPoint, concentrated_model, load_fiber
from .suites import coefficient_rows, run_suites


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# rendering


def _cell(v: Any) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def _columns(rows: Sequence[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render(doc: dict, rows_key: str, fmt: str) -> str:
    """JSON renders the whole document; CSV and table render ``doc[rows_key]``."""
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    rows = doc.get(rows_key, [])
    cols = _columns(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()
    cells = [cols] + [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
    lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
    if cols:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_coeff_table(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.k is not None and cfg.l1 is not None and cfg.l2 is not None:
        k, l1, l2 = cfg.k, cfg.l1, cfg.l2
        c, b = nearby.coefficient(k, l1, l2), nearby.coefficient_bruteforce(k, l1, l2)
        rows = [{"k": k, "l1": l1, "l2": l2, "coefficient": c, "bruteforce": b,
                 "window": len(nearby.index_window(k, l1, l2)), "diff": c - b}]
    else:
        rows = coefficient_rows(cfg.n if cfg.n is not None else cfg.coeff_n)
    mismatches = sum(1 for r in rows if r["diff"] or r["window"] != r["coefficient"])
    return {"rows": rows, "mismatches": mismatches}, int(bool(mismatches))


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    reports = run_suites(cfg)
    records = [r.to_json() for rep in reports for r in rep.records]
    summary = {
        rep.suite: {"checks": len(rep), "failures": len(rep.failures)} for rep in reports
    }
    failures = sum(len(rep.failures) for rep in reports)
    doc = {"seed": cfg.seed, "suites": list(cfg.suites), "summary": summary, "failures": failures,
           "ok": failures == 0, "records": records}
    return doc, int(failures > 0)


def _fiber_for_page(cfg: RunConfig) -> FiberModel | None:
    if cfg.fiber:
        return load_fiber(cfg.fiber)
    kind = cfg.complex or "concentrated"
    n = cfg.n if cfg.n is not None else 2
    if kind == "semistable-demo":
        return None
    if kind == "concentrated":
        return concentrated_model(n)
    if kind == "symbolic":
        return FiberModel(n=n, m1=cfg.n1 or n, m2=cfg.n2 or n)
    raise UsageError(f"--model must be concentrated, symbolic or semistable-demo, got {kind!r}")


def cmd_e1_page(cfg: RunConfig) -> tuple[dict, int]:
    offsets = WeightOffsets(cfg.m_xi, cfg.t_xi)
    f = _fiber_for_page(cfg)
    if f is None or not f.product:
        f = semistable_demo_fiber() if f is None else f
        rows = [e.row() for e in semistable_e1_page(f, offsets)]
        return {"model": "semistable", "n": f.n, "rows": rows}, 0
    pages = full_page(f, offsets)
    if cfg.p is not None:
        pages = [pg for pg in pages if pg.p == cfg.p and (cfg.q is None or pg.q == cfg.q)]
    rows = [r for pg in pages for r in pg.rows()]
    doc: dict[str, Any] = {"model": "product", "n": f.n, "symbolic": f.cohomology is None, "rows": rows}
    if f.cohomology is not None:
        rep = purity_report(f, offsets)
        doc["pure"] = rep.ok
        target = f.dimension
        for r in rows:
            r["pure"] = rep.ok and r["m"] == target
    return doc, 0


def cmd_build(cfg: RunConfig) -> tuple[dict, int]:
    name = cfg.complex or "L"
    k = cfg.k if cfg.k is not None else 1
    n1 = cfg.n1 if cfg.n1 is not None else (cfg.n if cfg.n is not None else 3)
    n2 = cfg.n2 if cfg.n2 is not None else n1
    builders = {
        "L": lambda: nearby.build_L(k, n1, n2),
        "P": lambda: nearby.build_P(k, n1, n2),
        "R": lambda: nearby.build_R(k, n1, n2),
        "semistable": lambda: nearby.build_semistable_resolution(k, n1),
        "S": lambda: nearby.build_product_summand(cfg.l1 or 0, cfg.l2 or 0, n1, n2),
    }
    maps = {
        "Nbar": lambda: nearby.build_Nbar(k, n1, n2),
        "incl": lambda: nearby.build_P_inclusion(k, n1, n2),
        "proj": lambda: nearby.build_R_projection(k, n1, n2),
        "alt": lambda: nearby.build_alternating_kernel_map(k, n1, n2),
    }
    if name in builders:
        cx = builders[name]()
        doc = {"kind": "complex", "complex": cx.to_json()}
        if cfg.r is not None:
            pt = StalkPoint(cfg.r, cfg.s if cfg.s is not None else 1)
            realized = nearby.realize(cx, pt)
            doc["stalk"] = {"r": pt.r, "s": pt.s, "dims": {str(d): v for d, v in realized.dims().items()},
                            "homology": {str(d): v for d, v in nearby.stalk_homology(cx, pt).items()}}
        return doc, 0
    if name in maps:
        try:
            f = maps[name]()
        except ChainMapError as exc:
            return {"kind": "map", "error": str(exc), "location": exc.location}, 1
        return {"kind": "map", "map": f.to_json()}, 0
    raise UsageError(f"unknown complex {name!r}; choose from {', '.join([*builders, *maps])}")


def cmd_collapse(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.S is not None and cfg.s is not None:
        n = cfg.n if cfg.n is not None else cfg.s
        cells = [(cfg.S, cfg.s, n)]
    else:
        top = cfg.n if cfg.n is not None else cfg.collapse_max
        cells = [(S, s, n) for s in range(1, top + 1) for S in range(1, s + 1) for n in range(s, top + 1)]
    rows = []
    for S, s, n in cells:
        v = groth.collapse_sum(S, s, n)
        rows.append({"S": S, "s": s, "n": n, "value": v, "delta": int(S == s)})
    bad = sum(1 for r in rows if r["value"] != r["delta"])
    return {"rows": rows, "mismatches": bad}, int(bool(bad))


def _segment_data(cfg: RunConfig) -> groth.SegmentData:
    if not cfg.segments:
        raise UsageError("gamma needs --segments, e.g. --segments 2,1")
    mode = groth.QUARTER if cfg.mode in ("quarter", groth.QUARTER) else cfg.mode
    scale = 2 if mode == groth.QUARTER else 1
    n = cfg.n if cfg.n is not None else scale * sum(cfg.segments)
    try:
        return groth.SegmentData(tuple(cfg.segments), n, mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gamma(cfg: RunConfig) -> tuple[dict, int]:
    seg = _segment_data(cfg)
    doc: dict[str, Any] = {"segments": list(seg.s), "n": seg.n, "mode": seg.mode}
    if cfg.S is not None and cfg.T is not None:
        red = groth.reduction_sum(cfg.S, cfg.T, seg, cfg.m_xi, cfg.t_xi)
        exp = groth.inclusion_exclusion_expand(cfg.S, cfg.T, seg.n, groth.red_table(seg))
        doc["rows"] = [r.to_json() for r in red]
        doc["expansion_agrees"] = exp == groth.as_formal_sum(red)
        return doc, int(not doc["expansion_agrees"])
    rows = []
    hs = range(seg.n + 1)
    js = range(1, seg.t + 1)
    for h1 in [cfg.h1] if cfg.h1 is not None else hs:
        for h2 in [cfg.h2] if cfg.h2 is not None else hs:
            for j1 in [cfg.j1] if cfg.j1 is not None else js:
                for j2 in [cfg.j2] if cfg.j2 is not None else js:
                    g = groth.gamma(h1, h2, j1, j2, seg)
                    if g or cfg.h1 is not None:
                        rows.append({"h1": h1, "h2": h2, "j1": j1, "j2": j2, "gamma": format_scalar(g)})
    doc["rows"] = rows
    return doc, 0


COMMANDS = {
    "coeff-table": cmd_coeff_table,
    "verify": cmd_verify,
    "e1-page": cmd_e1_page,
    "build": cmd_build,
    "collapse": cmd_collapse,
    "gamma": cmd_gamma,
}


# --------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--format", choices=FORMATS, help="output format (default json)")
    common.add_argument("--seed", type=int, help="seed for random instances")
    common.add_argument("--suite", metavar="NAME[,NAME]", help="verification suites to run")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--fiber", metavar="PATH", help="fiber model JSON")
    for name in ("n", "n1", "n2", "k", "l1", "l2", "p", "q", "r", "s", "S", "T", "h1", "h2", "j1", "j2"):
        common.add_argument(f"--{name}", type=int, dest=name)
    common.add_argument("--m-xi", type=int, dest="m_xi")
    common.add_argument("--t-xi", type=int, dest="t_xi")
    common.add_argument("--complex", "--model", dest="complex", help="named complex (build) or model (e1-page)")
    common.add_argument("--segments", type=_int_list, help="segment lengths, e.g. 2,1")
    common.add_argument("--mode", choices=("tempered", "quarter", groth.QUARTER))

    parser = argparse.ArgumentParser(prog="nearbycycles", description="Exact verifier for nearby-cycle resolutions.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "coeff-table": "coefficients of the product resolution with a brute-force check",
        "verify": "run verification suites and emit a JSON report",
        "e1-page": "first page of the weight spectral sequence",
        "build": "emit a named complex or map as JSON",
        "collapse": "collapse-sum table",
        "gamma": "gamma coefficients, or reduced terms with --S/--T",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, allow_abbrev=False)
    return parser


_OVERRIDES = ("format", "seed", "out", "fiber", "n", "n1", "n2", "k", "l1", "l2", "p", "q", "r", "s",
              "S", "T", "h1", "h2", "j1", "j2", "m_xi", "t_xi", "complex", "segments", "mode")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    kw = {k: getattr(args, k) for k in _OVERRIDES}
    kw["command"] = args.command
    if args.suite:
        kw["suites"] = parse_suites(args.suite)
    return cfg.with_overrides(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        doc, code = COMMANDS[cfg.command](cfg)
    except (ConfigError, ModelError, UsageError) as exc:
        parser.error(str(exc))
    except NotAComplexError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    emit(render(doc, "records" if cfg.command == "verify" else "rows", cfg.format), cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
