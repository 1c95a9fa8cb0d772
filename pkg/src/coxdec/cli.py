"""``coxdec`` command line.

Exit status: 0 success, 1 mismatch against golden data, 2 input error,
3 inconclusive (a search limit was hit).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import geometry
from .catalog import DIMENSIONS, all_entries, entry, hyperbolic_simplices, lookup
from .diagram import DecoratedSimplex, DiagramError, parse_diagram, serialize_diagram
from .firsttype import EnumerationError, enumerate_decompositions, is_simple
from .geometry import GeometryError, Kind, classify_simplex, vertex_links
from .reproduce import SCOPES, run_scope
from .secondtype import STAGES, evaluate_pair
from .types import component_types, sum_name
from .verifier import (
    VerificationError,
    alternate_numbering_refutation,
    check_normal_combination,
    realization_json,
    verify,
)

__all__ = ["main", "build_parser", "emit_dot", "classify_report"]

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- helpers -----------------------------------------------------------------------------


def _resolve(text: str) -> DecoratedSimplex:
    """A catalog notation or a path to a diagram file."""
    path = Path(text)
    if path.is_file():
        try:
            return parse_diagram(path.read_text())
        except DiagramError as exc:
            raise InputError(f"{path}: {exc}") from None
    try:
        return entry(text).diagram
    except KeyError:
        raise InputError(f"unknown notation or missing file: {text}") from None


def _entry(spec: str):
    try:
        return entry(spec)
    except KeyError:
        raise InputError(f"unknown notation: {spec}") from None


def emit_dot(s: DecoratedSimplex, name: str | None = None) -> str:
    """DOT graph with one node per facet and an edge per non-right angle.

    Edge labels are ``m`` for ``pi/m`` and ``m/k`` for ``k pi/m``.
    """
    title = (name or s.name or "simplex").replace('"', "'")
    lines = [f'graph "{title}" {{']
    lines.extend(f"  {v};" for v in range(s.size))
    for i, j, a in s.edges():
        lines.append(f'  {i} -- {j} [label="{a.label()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _link_label(link: DecoratedSimplex) -> str:
    names = component_types(link)
    return sum_name([n for n in names if n]) if all(names) else "?"


def classify_report(s: DecoratedSimplex) -> dict:
    """Geometry kind, vertex links, compactness and catalog match."""
    kind = classify_simplex(s)
    report = {
        "kind": kind.kind.value,
        "signature": list(kind.signature),
        "catalog": lookup(s),
    }
    if kind.kind is Kind.HYPERBOLIC:
        links = vertex_links(s)
        report["ideal"] = list(kind.ideal)
        report["compact"] = kind.compact
        report["links"] = {
            str(v): {"kind": k.kind.value, "type": _link_label(link)} for v, k, link in links
        }
    return report


def _classify_text(r: dict) -> str:
    kind = r["kind"]
    if kind == Kind.INVALID.value:
        p, q, _ = r["signature"]
        return f"invalid: signature ({p}, {q})"
    text = kind.capitalize()
    if kind == Kind.HYPERBOLIC.value:
        ideal = r["ideal"]
        if ideal:
            types = ", ".join(r["links"][str(v)]["type"] for v in ideal)
            plural = "vertex" if len(ideal) == 1 else "vertices"
            text += f", {len(ideal)} ideal {plural} ({types})"
        else:
            text += ", compact"
    if r["catalog"]:
        text += f", catalog: {r['catalog']}"
    return text


def _print(obj, fmt: str, text: str) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False) if fmt == "json" else text)


# -- commands ---------------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    entries = [e for e in all_entries() if args.dim is None or e.dim == args.dim]
    if args.format == "dot":
        print("".join(emit_dot(e.diagram, e.notation) for e in entries), end="")
    elif args.format == "json":
        _print([{"notation": e.notation, "dim": e.dim, "volume": e.volume, "compact": e.compact,
                 "diagram": serialize_diagram(e.diagram)} for e in entries], "json", "")
    else:
        for e in entries:
            print(f"{e.notation:8s} n={e.dim} vol={e.volume:.10g} {'compact' if e.compact else 'ideal'}")
    return EXIT_OK


def cmd_classify(args) -> int:
    path = Path(args.file)
    try:
        s = parse_diagram(path.read_text())
    except OSError as exc:
        raise InputError(str(exc)) from None
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None
    report = classify_report(s)
    _print(report, args.format, _classify_text(report))
    return EXIT_OK


def cmd_dot(args) -> int:
    s = _resolve(args.input)
    print(emit_dot(s, args.input if s.name is None else None), end="")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    F = _entry(args.fundamental)
    enum = enumerate_decompositions(F, max_N=args.max_n, max_s=args.max_s, workers=args.workers)
    shapes = [g for g in enum.simplices if g.N > 1]
    if args.coxeter_only:
        shapes = [g for g in shapes if g.is_coxeter]
    for g in shapes:
        g.simple = is_simple(g, enum)
    if args.format == "json":
        _print({"fundamental": F.notation, "complete": enum.complete, "limits": enum.limits,
                "simplices": [g.to_dict() for g in shapes]}, "json", "")
    else:
        print(f"{F.notation}: {len(shapes)} shapes, {'complete' if enum.complete else 'limits hit'}")
        for g in shapes:
            w = g.witness.tuple if g.witness else ()
            tag = g.name or ("coxeter" if g.is_coxeter else "-")
            print(f"  N={g.N:<4d} s={g.s:<2d} glue={w} simple={g.simple} {tag}")
    return EXIT_OK if enum.complete else EXIT_INCONCLUSIVE


def cmd_second_type(args) -> int:
    dims = [args.dim] if args.dim is not None else list(DIMENSIONS)
    out = []
    for n in dims:
        entries = hyperbolic_simplices(n)
        for F in entries:
            for P in entries:
                if F is not P:
                    cand = evaluate_pair(F, P, args.stage)
                    keep = "counting" if args.stage == "budget" else args.stage
                    if cand.passed(keep) or args.all:
                        out.append(cand)
    if args.format == "json":
        _print([c.to_dict() for c in out], "json", "")
        return EXIT_OK
    for c in out:
        status = "pass"
        for stage in STAGES[: STAGES.index(args.stage) + 1]:
            r = c.reports.get(stage)
            if r is not None and not r.passed:
                status = f"{stage}: {r.rule}: {r.detail}"
                break
        if c.budget is not None:
            status = "feasible" if c.budget.feasible else "infeasible: " + c.budget.certificate[0]
        print(f"{c.F.notation:7s} {c.P.notation:7s} N={c.N} {status}")
    return EXIT_OK


def cmd_verify(args) -> int:
    F, P = _entry(args.fundamental), _entry(args.target)
    if args.dump_realization:
        print(realization_json(P if args.dump_realization == "target" else F))
        return EXIT_OK
    try:
        d = verify(F, P, limit=args.limit)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    res = d.tiling
    payload = res.to_dict()
    if (F.notation, P.notation) == ("H1^8", "H4^8"):
        payload["certificates"] = {
            "normal_combination": check_normal_combination(F, P).to_dict(),
            "alternate_numbering": alternate_numbering_refutation(F).to_dict(),
        }
    text = (
        f"{F.notation} tiles {P.notation} with N = {res.N}\n"
        f"  incidences {dict(sorted(res.incidences.items()))}\n"
        f"  ideal incidences {dict(sorted(res.ideal_incidences.items()))}\n"
        f"  mirrors {len(res.mirrors)}, all ridges fundamental: {all(res.fundamental.values())}"
    )
    _print(payload, args.format, text)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    checks = run_scope(args.scope)
    if args.format == "json":
        _print([c.to_dict() for c in checks], "json", "")
    else:
        for c in checks:
            print(c.line())
        hard = [c for c in checks if not c.soft]
        print(f"{sum(c.passed for c in hard)}/{len(hard)} checks passed"
              + (f", {sum(not c.passed for c in checks if c.soft)} soft differences" if any(c.soft for c in checks) else ""))
    return EXIT_OK if all(c.passed for c in checks if not c.soft) else EXIT_MISMATCH


# -- parser ---------------------------------------------------------------------------------


def _positive(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxdec", description="Coxeter decompositions of hyperbolic simplices.")
    p.add_argument("--tol-eig", type=_positive, help="eigenvalue sign tolerance (env COXDEC_TOL_EIG)")
    p.add_argument("--tol-real", type=_positive, help="realization tolerance (env COXDEC_TOL_REAL)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list the hyperbolic Coxeter simplices")
    c.add_argument("--dim", type=int)
    c.add_argument("--format", choices=("text", "json", "dot"), default="text")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("classify", help="classify a diagram file")
    c.add_argument("file")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("dot", help="emit a diagram as DOT")
    c.add_argument("input", help="catalog notation or diagram file")
    c.set_defaults(func=cmd_dot)

    c = sub.add_parser("enumerate", help="first-type decompositions by gluing")
    c.add_argument("--fundamental", required=True)
    c.add_argument("--max-n", type=int)
    c.add_argument("--max-s", type=int)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--coxeter-only", action="store_true", help="report Coxeter targets only")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("second-type", help="second-type candidate filters")
    c.add_argument("--dim", type=int, choices=list(DIMENSIONS))
    c.add_argument("--stage", choices=STAGES, default="budget")
    c.add_argument("--all", action="store_true", help="also list rejected pairs")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_second_type)

    c = sub.add_parser("verify", help="tile a target by reflections of a fundamental simplex")
    c.add_argument("--fundamental", required=True)
    c.add_argument("--target", required=True)
    c.add_argument("--limit", type=int, default=100_000)
    c.add_argument("--dump-realization", choices=("fundamental", "target"))
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("reproduce", help="compare against the golden tables")
    c.add_argument("scope", choices=sorted(SCOPES))
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol_eig is not None:
        geometry.TOL_EIG = args.tol_eig
    if args.tol_real is not None:
        geometry.TOL_REAL = args.tol_real
    try:
        return args.func(args)
    except (InputError, DiagramError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationError as exc:
        print(f"inconsistent enumeration: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
