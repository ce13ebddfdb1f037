"""Command-line front end.

    pairscore scores  DATA.csv [--measures pearson,nmi | --default] [--by species] -o scores.csv
    pairscore filter  scores.csv --min-max 0.25 -o kept.csv
    pairscore plot    scores.csv [--type linear --geom point] [--interactive] -o plot.svg
    pairscore methods [--filter-types nn,ff,fn]
    pairscore convert matrix.csv --score value -o scores.csv

Every failure prints one line ``error: <kind>: <message>`` to stderr and exits
nonzero: 2 for I/O and usage, 3 for schema problems, 4 for an unknown
measure, 5 for a malformed or unusable score table.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources
from pathlib import Path

from . import dispatch, errors, registry, seriation, viz
from .dataset import load_csv, load_schema
from .table import filter_pairs, from_matrix, read_csv, write_csv

EXIT_IO = 2
BUNDLED = ("penguins",)


class CliError(Exception):
    def __init__(self, kind, msg, code=EXIT_IO):
        super().__init__(msg)
        self.kind = kind
        self.code = code


def bundled_path(name: str, suffix: str) -> Path:
    return Path(str(resources.files("pairscore") / "data" / f"{name}{suffix}"))


def _existing(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError("io", f"cannot read {str(path)!r}: no such file")
    return p


def _split(s: str | None) -> list[str]:
    return [t.strip() for t in s.split(",") if t.strip()] if s else []


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        pass
    return _split(raw) if "," in raw else raw


def parse_options(items) -> dict[str | None, dict]:
    """``key=value`` or ``measure:key=value``; unscoped options apply to every measure."""
    out: dict[str | None, dict] = {}
    for item in items or ():
        scope, _, kv = item.rpartition(":") if ":" in item.split("=", 1)[0] else ("", "", item)
        key, eq, raw = kv.partition("=")
        if not eq or not key:
            raise CliError("usage", f"option {item!r} is not key=value")
        out.setdefault(scope or None, {})[key] = _parse_value(raw)
    return out


def parse_control(spec: str | None) -> dispatch.ScoreControl:
    ctl = dispatch.ScoreControl()
    for item in _split(spec):
        slot, eq, mid = item.partition("=")
        if not eq or slot not in ("nn", "fn", "ff", "oo"):
            raise CliError("usage", f"control entry {item!r} must be nn|fn|ff|oo=MEASURE")
        ctl = ctl.replace(**{slot: mid})
    ctl.measures()  # validate ids and slot support up front
    return ctl


def _emit(text: str, dest):
    if dest is None:
        sys.stdout.write(text)
        return
    try:
        Path(dest).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliError("io", f"cannot write {str(dest)!r}: {e.strerror}") from None


def _load_dataset(args):
    if args.input in BUNDLED and not Path(args.input).exists():
        path = bundled_path(args.input, ".csv")
        schema = args.schema or bundled_path(args.input, "_schema.json")
    else:
        path = _existing(args.input)
        schema = args.schema and _existing(args.schema)
    return load_csv(path, load_schema(schema))


def cmd_scores(args):
    d = _load_dataset(args)
    opts = parse_options(args.option)
    mic = {k: v for k, v in (("alpha", args.mic_alpha), ("c", args.mic_c)) if v is not None}
    measures = _split(args.measures)
    if measures and args.default:
        raise CliError("usage", "--measures and --default are mutually exclusive")
    if not measures:
        t = dispatch.pairwise_scores(d, parse_control(args.control), by=args.by,
                                     ungrouped=not args.no_ungrouped, workers=args.threads)
    else:
        resolved = []
        for name in measures:
            o = {**opts.get(None, {}), **opts.get(name, {})}
            m = dispatch.resolve(name)
            if m.name == "mine":
                o = {**mic, **o}
            resolved.append(dispatch.resolve(name, **o))
        if args.by:
            t = None
            for m in resolved:
                part = dispatch.pairwise_by(d, args.by, m, ungrouped=not args.no_ungrouped,
                                            workers=args.threads)
                t = part if t is None else t + part
        else:
            t = dispatch.pairwise_multi(d, resolved, workers=args.threads)
    _emit(write_csv(t), args.output)


def _read_scores(path):
    p = _existing(path)
    with open(p, encoding="utf-8", newline="") as f:
        return read_csv(f)


def cmd_filter(args):
    for v in (args.min_max, args.min_range):
        if v is not None and not math.isfinite(v):
            raise CliError("usage", "thresholds must be finite")
    t = filter_pairs(_read_scores(args.scores), args.min_max, args.min_range, args.var)
    _emit(write_csv(t), args.output)


def cmd_plot(args):
    t = _read_scores(args.scores)
    if args.type == "matrix":
        doc = viz.plot_matrix(t, args.order, args.interactive, size=(args.width, args.height or 800))
    else:
        doc = viz.plot_linear(t, args.geom, args.order, args.interactive, width=args.width)
    _emit(doc.text, args.output)


METHOD_COLUMNS = ("name", "nn", "ff", "fn", "from", "range", "ordinal")


def methods_rows(types=()):
    for m in registry.filter_methods(types):
        yield (m.name, *("x" if f else "" for f in (m.nn, m.ff, m.fn)), m.source,
               m.range_label, "x" if m.ordinal else "")


def cmd_methods(args):
    types = _split(args.filter_types)
    bad = [t for t in types if t not in ("nn", "ff", "fn", "ordinal")]
    if bad:
        raise CliError("usage", f"unknown type {bad[0]!r}; use nn, ff, fn or ordinal")
    rows = list(methods_rows(types))
    buf = io.StringIO()
    if args.csv:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(METHOD_COLUMNS)
        w.writerows(rows)
    else:
        table = [METHOD_COLUMNS, *rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(METHOD_COLUMNS))]
        for r in table:
            buf.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    _emit(buf.getvalue(), None)


def read_matrix_csv(path):
    """Square matrix CSV: header row of labels (first cell ignored), then label,values..."""
    with open(_existing(path), encoding="utf-8", newline="") as f:
        rows = [r for r in csv.reader(f) if r]
    if not rows:
        raise errors.MalformedScoreFile("matrix file is empty")
    labels = rows[0][1:]
    body = rows[1:]
    if len(body) != len(labels) or any(len(r) != len(labels) + 1 for r in body):
        raise errors.MalformedScoreFile("matrix must be square with a label column")
    if [r[0] for r in body] != labels:
        raise errors.MalformedScoreFile("row labels must match column labels in order")
    try:
        values = [[math.nan if c in ("", "NA") else float(c) for c in r[1:]] for r in body]
    except ValueError as e:
        raise errors.MalformedScoreFile(f"non-numeric matrix cell: {e}") from None
    return labels, values


def cmd_convert(args):
    labels, values = read_matrix_csv(args.matrix)
    _emit(write_csv(from_matrix(values, labels, args.score, args.pair_type)), args.output)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pairscore",
                                description="Pairwise association scores and their displays.")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for stochastic utilities (no current command draws random numbers)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scores", help="score variable pairs of a CSV dataset")
    s.add_argument("input", help="data CSV, or 'penguins' for the bundled copy")
    s.add_argument("--schema", help="JSON column schema")
    s.add_argument("--measures", help="comma-separated measure ids (e.g. pearson,nmi)")
    s.add_argument("--default", action="store_true",
                   help="type-based default scores (the default when --measures is absent)")
    s.add_argument("--by", help="factor column to group by")
    s.add_argument("--no-ungrouped", action="store_true", help="omit group 'all' rows")
    s.add_argument("--control", help="per-type overrides, e.g. nn=spearman,fn=ace")
    s.add_argument("--option", action="append", metavar="[MEASURE:]KEY=VALUE",
                   help="option passed to measures; repeatable")
    s.add_argument("--mic-alpha", type=float)
    s.add_argument("--mic-c", type=float)
    s.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${dispatch.THREADS_ENV} or 1)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_scores)

    f = sub.add_parser("filter", help="keep pairs passing thresholds")
    f.add_argument("scores")
    f.add_argument("--min-max", type=float, help="keep pairs with max |value| >= this")
    f.add_argument("--min-range", type=float, help="keep pairs with max - min >= this")
    f.add_argument("--var", help="keep only pairs containing this variable")
    f.add_argument("-o", "--output")
    f.set_defaults(func=cmd_filter)

    pl = sub.add_parser("plot", help="render a score CSV as SVG (or HTML with --interactive)")
    pl.add_argument("scores")
    pl.add_argument("--type", choices=("matrix", "linear"), default="matrix")
    pl.add_argument("--order", choices=tuple(seriation.ORDER_NAMES), default="seriate_max_abs")
    pl.add_argument("--geom", choices=("tile", "point"), default="tile")
    pl.add_argument("--interactive", action="store_true")
    pl.add_argument("--width", type=int, default=800)
    pl.add_argument("--height", type=int, default=None, help="matrix only; linear height follows rows")
    pl.add_argument("-o", "--output")
    pl.set_defaults(func=cmd_plot)

    m = sub.add_parser("methods", help="list the measure registry")
    m.add_argument("--filter-types", help="comma list of nn, ff, fn, ordinal (all must hold)")
    m.add_argument("--csv", action="store_true")
    m.set_defaults(func=cmd_methods)

    c = sub.add_parser("convert", help="symmetric matrix CSV to score CSV")
    c.add_argument("matrix")
    c.add_argument("--score", default="value")
    c.add_argument("--pair-type", choices=("nn", "ff", "fn"), default="nn")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)
    return p


def _fail(kind, msg, code) -> int:
    msg = " ".join(str(msg).split())
    sys.stderr.write(f"error: {kind}: {msg}\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as e:
        return _fail(e.kind, e, e.code)
    except errors.PairscoreError as e:
        return _fail(e.kind, e, e.exit_code)
    except OSError as e:
        return _fail("io", f"{e.filename or ''} {e.strerror or e}", EXIT_IO)
    except ValueError as e:
        return _fail("usage", e, EXIT_IO)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
