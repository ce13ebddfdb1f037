"""Typed, missing-aware tabular data."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import errors

NUMERIC, FACTOR, ORDERED = "numeric", "factor", "ordered"
KINDS = (NUMERIC, FACTOR, ORDERED)
MISSING_TOKENS = ("", "NA")


@dataclass(frozen=True, eq=False)
class Column:
    """A single typed column.

    Numeric columns hold floats in ``values``; factor columns hold integer
    level codes (``-1`` where missing).
    """

    name: str
    kind: str
    values: np.ndarray
    levels: tuple[str, ...] = ()
    missing: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise errors.SchemaError(f"unknown column kind {self.kind!r}")
        if self.missing is None:
            if self.kind == NUMERIC:
                miss = np.isnan(self.values)
            else:
                miss = self.values < 0
            object.__setattr__(self, "missing", miss)

    @property
    def is_factor(self) -> bool:
        return self.kind != NUMERIC

    @property
    def is_ordered(self) -> bool:
        return self.kind == ORDERED

    def __len__(self):
        return len(self.values)

    def take(self, idx) -> "Column":
        return Column(self.name, self.kind, self.values[idx], self.levels, self.missing[idx])

    def labels(self) -> list:
        """Values as Python objects, None where missing."""
        if self.kind == NUMERIC:
            return [None if m else float(v) for v, m in zip(self.values, self.missing)]
        return [None if c < 0 else self.levels[c] for c in self.values]


def numeric_column(name: str, values) -> Column:
    a = np.array([np.nan if v is None else v for v in values], dtype=float)
    if np.any(np.isinf(a)):
        raise errors.SchemaError(f"column {name!r} contains non-finite values")
    return Column(name, NUMERIC, a)


def factor_column(name: str, values, levels: Sequence[str] | None = None,
                  ordered: bool = False) -> Column:
    values = list(values)
    if levels is None:
        levels = []
        for v in values:
            if v is not None and v not in levels:
                levels.append(v)
    levels = tuple(str(lv) for lv in levels)
    index = {lv: i for i, lv in enumerate(levels)}
    codes = np.empty(len(values), dtype=np.int64)
    for i, v in enumerate(values):
        if v is None:
            codes[i] = -1
        else:
            try:
                codes[i] = index[str(v)]
            except KeyError:
                raise errors.UnknownLevel(v, name) from None
    return Column(name, ORDERED if ordered else FACTOR, codes, levels)


class Dataset:
    """Named columns of equal length."""

    def __init__(self, columns: Sequence[Column]):
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            raise errors.SchemaError("duplicate column names")
        lengths = {len(c) for c in columns}
        if len(lengths) > 1:
            raise errors.SchemaError("columns differ in length")
        self.columns: dict[str, Column] = {c.name: c for c in columns}
        self.n_rows = lengths.pop() if lengths else 0

    @classmethod
    def from_dict(cls, data: Mapping[str, Sequence], kinds: Mapping[str, str] | None = None,
                  levels: Mapping[str, Sequence[str]] | None = None) -> "Dataset":
        """Build from plain sequences; kinds default to numeric for number-only columns."""
        kinds = dict(kinds or {})
        levels = dict(levels or {})
        cols = []
        for name, vals in data.items():
            vals = list(vals)
            kind = kinds.get(name)
            if kind is None:
                ok = all(v is None or (isinstance(v, (int, float, np.number))
                                       and not isinstance(v, bool)) for v in vals)
                kind = NUMERIC if ok else FACTOR
            if kind == NUMERIC:
                cols.append(numeric_column(name, vals))
            else:
                cols.append(factor_column(name, vals, levels.get(name), kind == ORDERED))
        return cls(cols)

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __getitem__(self, name: str) -> Column:
        return self.columns[name]

    def __contains__(self, name):
        return name in self.columns

    def __len__(self):
        return self.n_rows

    def take(self, idx) -> "Dataset":
        return Dataset([c.take(idx) for c in self.columns.values()])

    def drop(self, name: str) -> "Dataset":
        return Dataset([c for n, c in self.columns.items() if n != name])

    def __repr__(self):
        kinds = ", ".join(f"{c.name}:{c.kind}" for c in self.columns.values())
        return f"<Dataset {self.n_rows} rows: {kinds}>"


def complete_pairs(a: Column, b: Column) -> tuple[Column, Column]:
    """Restrict both columns to rows where neither is missing."""
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    keep = ~(a.missing | b.missing)
    if keep.all():
        return a, b
    idx = np.flatnonzero(keep)
    return a.take(idx), b.take(idx)


def pair_type_of(a: Column, b: Column) -> str:
    fa, fb = a.is_factor, b.is_factor
    if fa and fb:
        return "ff"
    if fa or fb:
        return "fn"
    return "nn"


# -- CSV ---------------------------------------------------------------------

def load_schema(src) -> dict:
    """Read a JSON schema file (or pass a mapping through) and validate it."""
    if src is None:
        return {}
    if isinstance(src, Mapping):
        schema = dict(src)
    else:
        try:
            with open(src, encoding="utf-8") as f:
                schema = json.load(f)
        except json.JSONDecodeError as e:
            raise errors.SchemaError(f"schema is not valid JSON: {e}") from None
    if not isinstance(schema, dict):
        raise errors.SchemaError("schema must be a JSON object")
    for name, spec in schema.items():
        if not isinstance(spec, dict) or spec.get("kind") not in KINDS:
            raise errors.SchemaError(f"schema entry for {name!r} needs a kind in {KINDS}")
        if spec["kind"] == ORDERED and not spec.get("levels"):
            raise errors.SchemaError(f"ordered column {name!r} needs explicit levels")
    return schema


def _parse_number(tok: str, row: int, col: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise errors.ParseError(row, col, tok) from None
    if not math.isfinite(v):
        raise errors.ParseError(row, col, tok)
    return v


def _numeric_like(tokens) -> bool:
    for t in tokens:
        if t in MISSING_TOKENS:
            continue
        try:
            float(t)
        except ValueError:
            return False
    return True


def load_csv(path, schema=None) -> Dataset:
    """Load a CSV file into a :class:`Dataset`.

    Columns not named in ``schema`` are inferred: numeric when every
    non-missing token parses as a number, otherwise a factor with levels in
    order of first appearance. Tokens ``""`` and ``"NA"`` are missing.
    """
    schema = load_schema(schema)
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise errors.SchemaError(f"{path}: no header row") from None
        records = [rec for rec in reader if rec]
    for name in schema:
        if name not in header:
            raise errors.SchemaColumnMissing(name)
    for i, rec in enumerate(records, start=2):
        if len(rec) != len(header):
            raise errors.SchemaError(f"row {i}: expected {len(header)} fields, got {len(rec)}")
    cols = []
    for j, name in enumerate(header):
        tokens = [rec[j].strip() for rec in records]
        spec = schema.get(name)
        kind = spec["kind"] if spec else (NUMERIC if _numeric_like(tokens) else FACTOR)
        if kind == NUMERIC:
            vals = [math.nan if t in MISSING_TOKENS else _parse_number(t, i, name)
                    for i, t in enumerate(tokens, start=2)]
            cols.append(Column(name, NUMERIC, np.array(vals, dtype=float)))
        else:
            raw = [None if t in MISSING_TOKENS else t for t in tokens]
            levels = spec.get("levels") if spec else None
            cols.append(factor_column(name, raw, levels, kind == ORDERED))
    return Dataset(cols)
