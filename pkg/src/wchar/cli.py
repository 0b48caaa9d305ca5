"""Command line entry point: ``wchar <subcommand> [options]``.

Tableaux are passed either as JSON (``--tableau '{"q":[2,1],...}'`` or
``--tableau @file.json``) or as rows together with ``--pyramid``:
``--pyramid 2,1 --rows "3;1,0"`` lists rows top to bottom, separated by
``;``.  Rationals are written ``p/q``.  Domain errors exit with status 1 and
a JSON object ``{"error": code, "detail": text}`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
import tempfile
from typing import Sequence

from . import bases, classify, crystal, kl, yangian2
from .characters import GTCharacter, standard_character, verma_character, verma_character_tabloids
from .errors import WCharError
from .pyramid import (
    Pyramid,
    RowTabloid,
    Tableau,
    bruhat_leq,
    column_reading,
    column_strict_representative,
    enumerate_tableaux,
    format_entry,
    is_column_strict,
    is_standard,
    parse_entry,
    rectify,
    row_reading,
)

__all__ = ["main", "build_parser"]


class UsageError(WCharError):
    code = "usage"


# ---------------------------------------------------------------------------
# parsing helpers


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _pyramid(args) -> Pyramid:
    if not args.pyramid:
        raise UsageError("--pyramid is required")
    return Pyramid.new(_ints(args.pyramid), args.k, args.n)


def _load_json(text: str) -> dict:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as handle:
            text = handle.read()
    return json.loads(text)


def _rows_from_text(text: str) -> list[list]:
    return [[parse_entry(t) for t in part.split(",") if t.strip()] for part in text.split(";")]


def _tableau_arg(args, value: str | None = None, rows: str | None = None) -> Tableau:
    value = args.tableau if value is None else value
    rows = args.rows if rows is None else rows
    if value:
        return Tableau.from_dict(_load_json(value))
    if rows:
        return Tableau.from_rows(_pyramid(args), _rows_from_text(rows))
    raise UsageError("give --tableau JSON or --pyramid with --rows")


def _tabloid_arg(args, value: str | None = None, rows: str | None = None) -> RowTabloid:
    return _tableau_arg(args, value, rows).row_class()


def _label(obj: Tableau | RowTabloid) -> str:
    rows = obj.rows if isinstance(obj, RowTabloid) else obj.rows()
    return ";".join(",".join(format_entry(x) for x in row) for row in rows)


def _entry_range(text: str) -> range:
    lo, hi = _ints(text)
    return range(lo, hi + 1)


def _dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=None) + "\n"


def _character_csv(chi: GTCharacter) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["grade", "coeff", "monomial"])
    for row in chi.to_list():
        mono = " ".join(f"y[{i},{a}]^{e}" for i, a, e in row["monomial"])
        writer.writerow([row["grade"], row["coeff"], mono])
    return buffer.getvalue()


def _character_output(chi: GTCharacter, fmt: str) -> str:
    if fmt == "csv":
        return _character_csv(chi)
    return chi.to_json() + "\n"


def _emit(text: str, out: str | None) -> None:
    if not out:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wchar-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# subcommands; each returns (text, exit status)


def cmd_pyramid(args) -> tuple[str, int]:
    pyramid = _pyramid(args)
    n = pyramid.n
    data = pyramid.to_dict()
    data["p"] = list(pyramid.p)
    data["sigma"] = [[pyramid.shift(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    data["S"] = [[pyramid.S[i][j] for j in range(n)] for i in range(n)]
    data["boxes"] = [list(pyramid.box(b)) for b in range(1, pyramid.N + 1)]
    return _dump_json(data), 0


def cmd_rectify(args) -> tuple[str, int]:
    """Row class and readings of any tableau; the rectification when it is standard."""
    tableau = _tableau_arg(args)
    row_class = tableau.row_class()
    standard = is_standard(tableau)
    data = {
        "row_class": row_class.to_dict(),
        "column_reading": [format_entry(x) for x in column_reading(tableau)],
        "row_reading": [format_entry(x) for x in row_reading(row_class)],
        "standard": standard,
        "rectification": rectify(tableau).to_dict() if standard else None,
    }
    return _dump_json(data), 0


def cmd_bruhat(args) -> tuple[str, int]:
    lower = _tabloid_arg(args, args.lower, args.lower_rows)
    upper = _tabloid_arg(args, args.upper, args.upper_rows)
    data = {
        "lower": lower.to_dict(),
        "upper": upper.to_dict(),
        "bruhat_leq": bruhat_leq(lower, upper),
        "linkage": classify.linkage_iii(upper, lower),
    }
    return _dump_json(data), 0


def cmd_crystal(args) -> tuple[str, int]:
    seed = _tableau_arg(args)
    if args.tabloid:
        seed = seed.row_class()
    labels = _ints(args.labels)
    graph = crystal.crystal_graph([seed], labels, budget=args.budget, directions=args.directions)
    if args.format == "dot":
        return graph.to_dot(), 0
    data = {
        "nodes": [node.to_dict() for node in graph.nodes],
        "edges": [list(edge) for edge in graph.edges],
    }
    return _dump_json(data), 0


def _perm(text: str) -> tuple[int, ...]:
    """One-line notation, comma-separated or (for N <= 9) as a digit string."""
    text = text.strip()
    values = tuple(int(ch) for ch in text) if text.isdigit() else tuple(_ints(text))
    if sorted(values) != list(range(1, len(values) + 1)):
        raise UsageError(f"{text!r} is not a permutation in one-line notation")
    return values


def cmd_kl(args) -> tuple[str, int]:
    if args.all:
        if not args.n:
            raise UsageError("--all needs --n")
        perms = list(itertools.permutations(range(1, args.n + 1)))
        rows = []
        for y in perms:
            for x in perms:
                poly = kl.kl_poly(x, y)
                if poly:
                    rows.append({"x": list(x), "y": list(y), "P": list(poly)})
        if args.format == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["x", "y", "P"])
            for row in rows:
                writer.writerow(["".join(map(str, row["x"])), "".join(map(str, row["y"])),
                                 " ".join(map(str, row["P"]))])
            return buffer.getvalue(), 0
        return _dump_json(rows), 0
    if not (args.x and args.y):
        raise UsageError("give --x and --y in one-line notation, or --n with --all")
    x, y = _perm(args.x), _perm(args.y)
    if len(x) != len(y):
        raise UsageError("--x and --y must have the same size")
    data = {"x": list(x), "y": list(y), "P": list(kl.kl_poly(x, y))}
    if args.check:
        data["oracle"] = list(kl.kl_poly_via_r(x, y))
    return _dump_json(data), 0


def cmd_verma_char(args) -> tuple[str, int]:
    tabloid = _tabloid_arg(args)
    method = verma_character_tabloids if args.method == "tabloids" else verma_character
    return _character_output(method(tabloid, args.depth), args.format), 0


def cmd_standard_char(args) -> tuple[str, int]:
    return _character_output(standard_character(_tableau_arg(args)), args.format), 0


def _decompose_rows(args) -> tuple[list, list, str]:
    """Rows ``(label, coefficients)`` and the column labels."""
    kind = args.kind
    if args.tableau or args.rows:
        sources = [_tableau_arg(args)]
        pyramid = sources[0].pyramid
    else:
        if not args.range:
            raise UsageError("give --tableau, or --pyramid with --range lo,hi")
        pyramid = _pyramid(args)
        sources = list(enumerate_tableaux(pyramid, _entry_range(args.range), "std0" if kind == "standard" else "row0"))
    results = []
    for source in sources:
        if kind == "standard":
            results.append((source, bases.decompose_standard(source)))
        else:
            tabloid = source.row_class() if isinstance(source, Tableau) else source
            results.append((tabloid, bases.sym_monomial_in_L(tabloid)))
    status = "theorem" if kind == "standard" or pyramid.l == 1 else "conjectural"
    return results, sorted({b for _, row in results for b in row}, key=row_reading), status


def cmd_decompose(args) -> tuple[str, int]:
    results, columns, status = _decompose_rows(args)
    if args.format == "json":
        data = {
            "kind": args.kind,
            "status": status,
            "rows": [
                {"source": src.to_dict(),
                 "coefficients": [{"target": b.to_dict(), "value": v}
                                  for b, v in sorted(row.items(), key=lambda kv: row_reading(kv[0]))]}
                for src, row in results
            ],
        }
        return _dump_json(data), 0
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["status", "source"] + [_label(b) for b in columns])
    for src, row in results:
        writer.writerow([status, _label(src)] + [row.get(b, 0) for b in columns])
    return buffer.getvalue(), 0


def cmd_classify(args) -> tuple[str, int]:
    tableau = _tableau_arg(args)
    tabloid = tableau.row_class()
    dominant = classify.is_finite_dimensional(tabloid)
    rep = tableau if is_column_strict(tableau) else column_strict_representative(tabloid)
    record = {
        "tabloid": tabloid.to_dict(),
        "dominant": dominant,
        "verma_irreducible": classify.verma_is_irreducible(tabloid),
        "separated": None,
        "standard_irreducible": None,
        "drinfeld": None,
    }
    if rep is not None:
        record["column_strict"] = rep.to_dict()
        record["separated"] = classify.is_separated(rep)
        if all(x.denominator == 1 for x in column_reading(rep)):
            record["standard_irreducible"] = classify.standard_is_irreducible(rep)
        data = classify.drinfeld_data(tabloid, rep).to_dict()
        record["drinfeld"] = {"P": data["P"], "Q": data["Q"]}
    return _dump_json(record), 0


def cmd_drinfeld(args) -> tuple[str, int]:
    tableau = _tableau_arg(args)
    tabloid = tableau.row_class()
    rep = tableau if is_column_strict(tableau) else None
    data = classify.drinfeld_data(tabloid, rep)
    out = data.to_dict()
    out["verified"] = classify.verify_drinfeld(tabloid, data)
    return _dump_json(out), 0


def _n2_record(tableau: Tableau, degree: int) -> dict:
    module = yangian2.standard_module(tableau, degree)
    report = yangian2.verify_relations(module, degree)
    chi = yangian2.gt_character(module)
    return {
        "tableau": tableau.to_dict(),
        "dimension": module.dim,
        "relations": report.to_dict(),
        "character": chi.to_list(),
        "character_matches": chi == standard_character(tableau),
        "irreducible": yangian2.is_irreducible(module),
        "separated": classify.is_separated(tableau),
    }


def cmd_n2(args) -> tuple[str, int]:
    if args.action == "verify":
        record = _n2_record(_tableau_arg(args), args.degree)
        ok = record["relations"]["ok"] and record["character_matches"]
        return _dump_json(record), 0 if ok else 1
    # sweep: every column-strict tableau of the pyramid in the entry range
    pyramid = _pyramid(args)
    if not args.range:
        raise UsageError("sweep needs --range lo,hi")
    tableaux = list(enumerate_tableaux(pyramid, _entry_range(args.range), "col0"))
    if args.sample and args.sample < len(tableaux):
        tableaux = random.Random(args.seed).sample(tableaux, args.sample)
    summary = {"checked": 0, "relation_failures": 0, "character_failures": 0, "separation_mismatches": 0}
    for tableau in tableaux:
        record = _n2_record(tableau, args.degree)
        summary["checked"] += 1
        summary["relation_failures"] += not record["relations"]["ok"]
        summary["character_failures"] += not record["character_matches"]
        summary["separation_mismatches"] += record["irreducible"] != record["separated"]
    failures = summary["relation_failures"] + summary["character_failures"] + summary["separation_mismatches"]
    return _dump_json(summary), 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# parser


def _add_shared(parser: argparse.ArgumentParser, formats: Sequence[str] = ("json",)) -> None:
    parser.add_argument("--pyramid", help="column heights, e.g. 1,2,2")
    parser.add_argument("--k", type=int, default=None, help="split index")
    parser.add_argument("--n", type=int, default=None, help="number of rows")
    parser.add_argument("--format", choices=list(formats), default=formats[0])
    parser.add_argument("--depth", type=int, default=4)
    parser.add_argument("--out", help="write the result to PATH atomically")
    parser.add_argument("--seed", type=int, default=0)


def _add_tableau(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tableau", help="tableau JSON or @path")
    parser.add_argument("--rows", help="rows top to bottom, ';'-separated, entries ','-separated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wchar", description="Tableau combinatorics and characters for shifted Yangians")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pyramid", help="row lengths, shift matrix and box table")
    _add_shared(p)
    p.set_defaults(func=cmd_pyramid)

    p = sub.add_parser("rectify", help="row class obtained by row insertion")
    _add_shared(p)
    _add_tableau(p)
    p.set_defaults(func=cmd_rectify)

    p = sub.add_parser("bruhat", help="compare two row classes")
    _add_shared(p)
    p.add_argument("--lower", help="tableau JSON or @path")
    p.add_argument("--upper", help="tableau JSON or @path")
    p.add_argument("--lower-rows", dest="lower_rows")
    p.add_argument("--upper-rows", dest="upper_rows")
    p.set_defaults(func=cmd_bruhat, tableau=None, rows=None)

    p = sub.add_parser("crystal", help="crystal graph generated by a tableau")
    _add_shared(p, ("dot", "json"))
    _add_tableau(p)
    p.add_argument("--labels", default="0", help="operator indices, e.g. -1,0,1")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--directions", choices=["f", "e", "both"], default="both")
    p.add_argument("--tabloid", action="store_true", help="act on the row class")
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("kl", help="Kazhdan-Lusztig polynomials")
    _add_shared(p, ("json", "csv"))
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--all", action="store_true")
    p.add_argument("--check", action="store_true", help="also run the R-polynomial oracle")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("verma-char", help="truncated Verma character")
    _add_shared(p, ("json", "csv"))
    _add_tableau(p)
    p.add_argument("--method", choices=["tuples", "tabloids"], default="tuples")
    p.set_defaults(func=cmd_verma_char)

    p = sub.add_parser("standard-char", help="character of a standard module")
    _add_shared(p, ("json", "csv"))
    _add_tableau(p)
    p.set_defaults(func=cmd_standard_char)

    p = sub.add_parser("decompose", help="decomposition numbers in the dual canonical basis")
    _add_shared(p, ("csv", "json"))
    _add_tableau(p)
    p.add_argument("--kind", choices=["standard", "verma"], default="standard")
    p.add_argument("--range", help="entry window lo,hi for a full matrix")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("classify", help="classification record of a highest weight")
    _add_shared(p)
    _add_tableau(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("drinfeld", help="Drinfeld polynomials of a dominant row class")
    _add_shared(p)
    _add_tableau(p)
    p.set_defaults(func=cmd_drinfeld)

    p = sub.add_parser("n2", help="explicit two-row module checks")
    _add_shared(p)
    _add_tableau(p)
    p.add_argument("action", choices=["verify", "sweep"])
    p.add_argument("--degree", type=int, default=yangian2.DEFAULT_DEGREE)
    p.add_argument("--range", help="entry window lo,hi for sweep")
    p.add_argument("--sample", type=int, default=0, help="random subset size for sweep")
    p.set_defaults(func=cmd_n2)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = args.func(args)
        _emit(text, args.out)
    except WCharError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "detail": exc.detail}, sort_keys=True) + "\n")
        return 1
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": "bad_input", "detail": str(exc)}, sort_keys=True) + "\n")
        return 1
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
