"""Command-line interface.

Exit codes: 0 success, 1 usage/IO/parse error, 2 negative result (theorem
violation or no search hits), 3 lattice validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import config, mlat
from . import predicates as P
from .constructions import divisor_lattice, idempotent_chain, localize, localize_at_prime, product, quotient
from .errors import (
    CapExceededError,
    ImproperElementError,
    LatticeAxiomError,
    LatticeError,
    LatticeStructureError,
    MLATFormatError,
)
from .explorer import FamilySpec, PredicateSyntaxError, parse_predicate, search, shrink
from .lattice import MultLattice, validate
from .theorems import CATALOG, run_all

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_INVALID = 0, 1, 2, 3

CLASSIFY_SCHEMA = "mlat-classify/1"
THEOREMS_SCHEMA = "mlat-theorems/1"
SEARCH_SCHEMA = "mlat-search/1"
VALIDATE_SCHEMA = "mlat-validate/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    n_max: int = config.DEFAULT_N_MAX
    format: str = "tsv"
    workers: int = 1
    size_cap: int = config.DEFAULT_SIZE_CAP

    def __post_init__(self) -> None:
        if self.format not in ("tsv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not (1 <= self.n_max <= config.ABSORBING_N_CAP):
            raise UsageError(f"-n must lie in 1..{config.ABSORBING_N_CAP}")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        if self.size_cap < 1:
            raise UsageError("--size-cap must be positive")


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--n-max", type=int, default=config.DEFAULT_N_MAX)
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--size-cap", type=int, default=None, help="overrides MLAT_SIZE_CAP")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mlat", description="Finite multiplicative lattice toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="construct a lattice and write an MLAT file")
    b.add_argument("kind", choices=("divisor", "chain", "product", "quotient", "localize"))
    b.add_argument("params", nargs="+", help="n | k | factor files... | source file")
    b.add_argument("--at", help="quotient: cut element label")
    b.add_argument("--set", dest="mset", help="localize: comma-separated labels of S")
    b.add_argument("--at-prime", help="localize: prime element label")
    b.add_argument("-o", "--output", help="output path (default: stdout)")

    v = sub.add_parser("validate", parents=[common], help="check the axioms of an MLAT file")
    v.add_argument("path")

    c = sub.add_parser("classify", parents=[common], help="classify every proper element")
    c.add_argument("path")

    t = sub.add_parser("theorems", parents=[common], help="run the theorem checks")
    t.add_argument("path")
    t.add_argument("--ids", default="all", help="comma-separated ids or 'all'")

    s = sub.add_parser("search", parents=[common], help="search a lattice family")
    s.add_argument("--family", choices=("divisor", "chain"), default="divisor")
    s.add_argument("--min", dest="lo", type=int, default=2)
    s.add_argument("--max", dest="hi", type=int, required=True)
    s.add_argument("--where", required=True, help="predicate expression")
    s.add_argument("--limit", type=int, default=1)
    s.add_argument("--no-shrink", action="store_true")

    r = sub.add_parser("residual", parents=[common], help="print (q : a)")
    r.add_argument("path")
    r.add_argument("q")
    r.add_argument("a")

    rad = sub.add_parser("radical", parents=[common], help="print the radical of a")
    rad.add_argument("path")
    rad.add_argument("a")
    return parser


# -- helpers -------------------------------------------------------------------


def _tf(x: bool) -> str:
    return "true" if x else "false"


def _tuple_labels(L: MultLattice, wit: Sequence) -> list[str]:
    return [L.labels[i] if isinstance(i, int) else str(i) for i in wit]


def _fmt_witness(L: MultLattice, wit: Sequence) -> str:
    if wit and isinstance(wit[0], str):
        return f"{wit[0]}:(" + ",".join(_tuple_labels(L, wit[1:])) + ")"
    return "(" + ",".join(_tuple_labels(L, wit)) + ")"


def _load(path: str) -> MultLattice:
    return mlat.load(path)


def _element(L: MultLattice, label: str) -> int:
    try:
        return L.index(label)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


# -- commands ------------------------------------------------------------------


def _int_param(raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {raw!r}") from None


def cmd_build(args, cfg: RunConfig) -> int:
    kind, params = args.kind, args.params
    if kind in ("divisor", "chain", "quotient") and len(params) != 1:
        raise UsageError(f"build {kind} takes exactly one parameter")
    if kind == "divisor":
        L = divisor_lattice(_int_param(params[0], "n"), cap=cfg.size_cap)
    elif kind == "chain":
        L = idempotent_chain(_int_param(params[0], "k"))
    elif kind == "product":
        if len(params) < 2:
            raise UsageError("build product needs at least two factor files")
        L = product([_load(p) for p in params], cap=cfg.size_cap)
    elif kind == "quotient":
        if args.at is None:
            raise UsageError("build quotient needs --at LABEL")
        src = _load(params[0])
        L = quotient(src, _element(src, args.at))
    else:
        if len(params) != 1:
            raise UsageError("build localize takes exactly one source file")
        src = _load(params[0])
        if (args.mset is None) == (args.at_prime is None):
            raise UsageError("build localize needs exactly one of --set or --at-prime")
        if args.at_prime is not None:
            L = localize_at_prime(src, _element(src, args.at_prime))
        else:
            labels = [x.strip() for x in args.mset.split(",") if x.strip()]
            L = localize(src, [_element(src, x) for x in labels])

    report = validate(L)
    if not report.ok:
        print(f"constructed lattice is invalid: {report.describe(L.labels)}", file=sys.stderr)
        return EXIT_INVALID
    data = mlat.to_file(L)
    summary = f"{L.name}\t{L.size}\t{L.labels[L.bottom]}\t{L.labels[L.top]}"
    if args.output:
        Path(args.output).write_bytes(data)
        print(summary)
    else:
        sys.stdout.write(data.decode("utf-8"))
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_validate(args, cfg: RunConfig) -> int:
    L = mlat.load(args.path, check=False)
    report = validate(L)
    if cfg.format == "json":
        _emit_json(
            {
                "schema": VALIDATE_SCHEMA,
                "lattice": L.name,
                "ok": report.ok,
                "failures": [{"axiom": a, "witness": _tuple_labels(L, w)} for a, w in report.failures],
            }
        )
    else:
        if report.ok:
            print(f"{L.name}\tok\t{L.size}")
        for axiom, wit in report.failures:
            print(f"{L.name}\t{axiom}\t{_fmt_witness(L, wit)}")
    return EXIT_OK if report.ok else EXIT_INVALID


_FAMILIES = ("absorbing", "weakly_absorbing", "quasi", "weakly_quasi", "strongly_quasi")


def cmd_classify(args, cfg: RunConfig) -> int:
    L = _load(args.path)
    rows = P.classify(L, cfg.n_max)
    n_max = cfg.n_max
    if cfg.format == "json":
        out = []
        for r in rows:
            rec = {
                "element": r.label,
                "prime": r.prime,
                "weakly_prime": r.weakly_prime,
                "maximal": r.maximal,
                "principal": r.principal,
            }
            for fam in _FAMILIES:
                rec[fam] = getattr(r, fam)
            rec["witnesses"] = {k: _fmt_witness(L, w) for k, w in r.witnesses.items()}
            out.append(rec)
        _emit_json({"schema": CLASSIFY_SCHEMA, "lattice": L.name, "n_max": n_max, "rows": out})
        return EXIT_OK
    header = ["element", "prime", "weakly_prime", "maximal", "principal"]
    header += [f"{fam}{n}" for fam in _FAMILIES for n in range(1, n_max + 1)]
    header.append("witnesses")
    print("\t".join(header))
    for r in rows:
        cells = [r.label, _tf(r.prime), _tf(r.weakly_prime), _tf(r.maximal), _tf(r.principal)]
        cells += [_tf(getattr(r, fam)[n - 1]) for fam in _FAMILIES for n in range(1, n_max + 1)]
        cells.append(";".join(f"{k}={_fmt_witness(L, w)}" for k, w in r.witnesses.items()))
        print("\t".join(cells))
    return EXIT_OK


def cmd_theorems(args, cfg: RunConfig) -> int:
    if args.ids.strip().lower() == "all":
        ids = list(CATALOG)
    else:
        ids = [x.strip().upper() for x in args.ids.split(",") if x.strip()]
        unknown = [x for x in ids if x not in CATALOG]
        if unknown or not ids:
            raise UsageError(f"unknown theorem id(s): {', '.join(unknown) or '(none given)'}")
    L = _load(args.path)
    reports = run_all(L, cfg.n_max, ids=ids, workers=cfg.workers)
    if cfg.format == "json":
        _emit_json(
            {
                "schema": THEOREMS_SCHEMA,
                "lattice": L.name,
                "n_max": cfg.n_max,
                "reports": [
                    {
                        "id": r.id,
                        "status": r.status,
                        "checked": r.checked,
                        "violations": [
                            {"clause": v.clause, "assignment": {k: str(x) for k, x in v.assignment}}
                            for v in r.violations
                        ],
                        "skipped": r.skipped,
                        "note": r.note,
                        "error": r.error,
                    }
                    for r in reports
                ],
            }
        )
    else:
        print("id\tstatus\tchecked\tviolations\tdetail")
        for r in reports:
            detail = r.error or r.skipped or (r.violations[0].describe() if r.violations else r.note) or ""
            print(f"{r.id}\t{r.status}\t{r.checked}\t{len(r.violations)}\t{detail}")
    bad = any(r.status in ("violated", "error") for r in reports)
    return EXIT_NEGATIVE if bad else EXIT_OK


def cmd_search(args, cfg: RunConfig) -> int:
    try:
        expr = parse_predicate(args.where)
    except PredicateSyntaxError as exc:
        print(f"mlat: {exc}", file=sys.stderr)
        print(exc.caret(), file=sys.stderr)
        return EXIT_USAGE
    if args.limit < 1:
        raise UsageError("--limit must be positive")
    try:
        family = FamilySpec(args.family, args.lo, args.hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    hits = search(family, expr, args.limit, workers=cfg.workers)
    small = [r if args.no_shrink else shrink(r, expr) for r in hits]
    if cfg.format == "json":
        _emit_json(
            {
                "schema": SEARCH_SCHEMA,
                "family": family.kind,
                "range": [family.lo, family.hi],
                "predicate": str(expr),
                "hits": [
                    {
                        "param": h.param,
                        "element": h.element,
                        "atoms": h.snippet,
                        "shrunk": {"param": s.param, "element": s.element} if s.shrunk else None,
                    }
                    for h, s in zip(hits, small)
                ],
            }
        )
    else:
        print("family\tparam\telement\tshrunk_param\tshrunk_element\tatoms")
        for h, s in zip(hits, small):
            sp, se = (str(s.param), s.element) if s.shrunk else ("-", "-")
            atoms = ";".join(f"{k}={_tf(v)}" for k, v in h.snippet.items())
            print(f"{h.kind}\t{h.param}\t{h.element}\t{sp}\t{se}\t{atoms}")
    return EXIT_OK if hits else EXIT_NEGATIVE


def cmd_residual(args, cfg: RunConfig) -> int:
    L = _load(args.path)
    print(L.labels[L.residual(_element(L, args.q), _element(L, args.a))])
    return EXIT_OK


def cmd_radical(args, cfg: RunConfig) -> int:
    L = _load(args.path)
    print(L.labels[L.radical(_element(L, args.a))])
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "validate": cmd_validate,
    "classify": cmd_classify,
    "theorems": cmd_theorems,
    "search": cmd_search,
    "residual": cmd_residual,
    "radical": cmd_radical,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        cfg = RunConfig(
            command=args.command,
            n_max=args.n_max,
            format=args.format,
            workers=args.workers,
            size_cap=args.size_cap if args.size_cap is not None else config.size_cap(),
        )
        return COMMANDS[args.command](args, cfg)
    except (LatticeAxiomError, LatticeStructureError) as exc:
        print(f"mlat: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, MLATFormatError, CapExceededError, ImproperElementError, OSError, ValueError) as exc:
        print(f"mlat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LatticeError as exc:
        print(f"mlat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
