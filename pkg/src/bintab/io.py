"""Table documents and JSON/CSV serialization.

Cell values cross process boundaries as exact rational strings
(``"num/den"`` or a plain integer/decimal literal); decimal renderings are
attached for human consumption only.  A table document carries either
nonnegative integer counts or probabilities; probabilities must sum to 1
within 1e-9 and are renormalized exactly after rationalization.

CSV layout: a header ``x1,...,xd,value`` and one row per cell.  Rows may
come in any order (each carries its configuration); duplicate
configurations are an error.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple, Union

from .constraints import ConstraintMatrix, MarginTargets
from .datasets import BUILTIN_NAMES, builtin_labels, builtin_pmf
from .errors import TableParseError
from .geometry import VertexSet
from .loglinear import LogLinearParams
from .table import RATIONAL, Pmf, cell_index

COUNTS = "counts"
PROBABILITIES = "probabilities"

PROBABILITY_SUM_TOL = Fraction(1, 10**9)


def format_rational(value: Fraction) -> str:
    """Serialize a Fraction as ``"num/den"`` (plain integer when whole)."""
    return str(Fraction(value))


def parse_rational(text: Union[str, int, float]) -> Fraction:
    """Parse ``"num/den"``, integer, or decimal literals to an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(Decimal(str(text)))
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError) as exc:
        raise TableParseError(f"cannot parse {text!r} as a rational number") from exc


@dataclass(frozen=True)
class TableDocument:
    """A parsed d-way table: counts or probabilities plus optional labels."""

    d: int
    cells: Tuple[Fraction, ...]
    kind: str
    labels: Optional[Tuple[str, ...]] = None
    source_format: str = "json"

    def to_pmf(self) -> Pmf:
        """Normalize the document to an exact rational pmf."""
        if self.kind == COUNTS:
            return Pmf.from_counts([int(c) for c in self.cells])
        total = sum(self.cells)
        return Pmf.from_cells([c / total for c in self.cells], mode=RATIONAL)


def _validate_cells(cells, kind, labels, d_hint=None, fmt="json") -> TableDocument:
    n = len(cells)
    d = n.bit_length() - 1
    if n < 4 or 2**d != n:
        raise TableParseError(f"cell count {n} is not 2^d for some d >= 2")
    if d_hint is not None and d_hint != d:
        raise TableParseError(f"document declares d={d_hint} but has {n} cells")
    if kind == COUNTS:
        for k, c in enumerate(cells):
            if c.denominator != 1 or c < 0:
                raise TableParseError(
                    f"count at cell {k + 1} must be a nonnegative integer, got {c}", cell=k + 1
                )
    elif kind == PROBABILITIES:
        for k, c in enumerate(cells):
            if c < 0:
                raise TableParseError(f"probability at cell {k + 1} is negative", cell=k + 1)
        if abs(sum(cells) - 1) > PROBABILITY_SUM_TOL:
            raise TableParseError(f"probabilities sum to {float(sum(cells))!r}, expected 1 within 1e-9")
    else:
        raise TableParseError(f"unknown table kind {kind!r}")
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != d:
            raise TableParseError(f"{len(labels)} labels for {d} axes")
    return TableDocument(d=d, cells=tuple(cells), kind=kind, labels=labels, source_format=fmt)


def document_from_json(text: str) -> TableDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "cells" not in obj:
        raise TableParseError("table JSON must be an object with a 'cells' array")
    cells = [parse_rational(c) for c in obj["cells"]]
    kind = obj.get("kind", COUNTS if all(c.denominator == 1 for c in cells) else PROBABILITIES)
    return _validate_cells(cells, kind, obj.get("labels"), obj.get("d"), fmt="json")


def document_from_csv(text: str) -> TableDocument:
    reader = csv.reader(text.strip().splitlines())
    rows = [row for row in reader if row and any(f.strip() for f in row)]
    if not rows:
        raise TableParseError("empty CSV document")
    header = [h.strip().lower() for h in rows[0]]
    if header[-1] != "value" or not all(h.startswith("x") for h in header[:-1]):
        raise TableParseError("CSV header must be x1,...,xd,value")
    d = len(header) - 1
    if d < 2:
        raise TableParseError(f"CSV table needs at least 2 axes, got {d}")
    cells: dict = {}
    for row in rows[1:]:
        if len(row) != d + 1:
            raise TableParseError(f"CSV row has {len(row)} fields, expected {d + 1}")
        try:
            config = tuple(int(v) for v in row[:-1])
        except ValueError as exc:
            raise TableParseError(f"non-binary configuration in CSV row {row!r}") from exc
        if any(b not in (0, 1) for b in config):
            raise TableParseError(f"non-binary configuration {config} in CSV")
        k = cell_index(config)
        if k in cells:
            raise TableParseError(f"duplicate configuration {config}", cell=k)
        cells[k] = parse_rational(row[-1])
    if len(cells) != 2**d:
        missing = sorted(set(range(1, 2**d + 1)) - set(cells))
        raise TableParseError(f"missing cells {missing}", cell=missing[0])
    ordered = [cells[k] for k in range(1, 2**d + 1)]
    kind = COUNTS if all(c.denominator == 1 for c in ordered) else PROBABILITIES
    return _validate_cells(ordered, kind, None, fmt="csv")


def load_table(source: str) -> TableDocument:
    """Load a table from ``builtin:<name>`` or a .json/.csv path."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in BUILTIN_NAMES:
            raise TableParseError(
                f"unknown built-in table {name!r}; available: {', '.join(BUILTIN_NAMES)}"
            )
        pmf = builtin_pmf(name)
        kind = COUNTS if pmf.total is not None else PROBABILITIES
        cells = (
            tuple(Fraction(c * pmf.total) for c in pmf.cells)
            if pmf.total is not None
            else pmf.cells
        )
        return TableDocument(
            d=pmf.d, cells=cells, kind=kind, labels=builtin_labels(name), source_format="builtin"
        )
    path = Path(source)
    if not path.exists():
        raise TableParseError(f"no such table file: {source}")
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return document_from_csv(text)
    return document_from_json(text)


def document_to_json_dict(doc: TableDocument) -> dict:
    out = {
        "d": doc.d,
        "kind": doc.kind,
        "cells": [format_rational(c) for c in doc.cells],
    }
    if doc.labels:
        out["labels"] = list(doc.labels)
    return out


def pmf_to_document(p: Pmf, labels=None) -> TableDocument:
    q = p.to_rational() if p.mode != RATIONAL else p
    return TableDocument(
        d=q.d, cells=q.cells, kind=PROBABILITIES, labels=tuple(labels) if labels else None
    )


# --------------------------------------------------------------------------
# JSON renderings of derived objects
# --------------------------------------------------------------------------


def _decimal_str(value: Fraction, digits: int) -> str:
    return f"{float(value):.{digits}f}"


def targets_to_json_dict(targets: MarginTargets, digits: int = 6) -> dict:
    return {
        "d": targets.d,
        "univariate": [format_rational(m) for m in targets.univariate],
        "moments": {
            f"{i}{j}": {
                "rational": format_rational(mu),
                "decimal": _decimal_str(mu, digits),
            }
            for (i, j), mu in targets.moments.items()
        },
    }


def constraints_to_json_dict(H: ConstraintMatrix) -> dict:
    return {
        "d": H.d,
        "labels": ["".join(str(x) for x in label[1:]) if label[0] == "moment" else str(label[1])
                   for label in H.labels],
        "row_kinds": [label[0] for label in H.labels],
        "rows": [[format_rational(v) for v in row] for row in H.rows],
    }


def vertexset_to_json_dict(V: VertexSet, digits: int = 6) -> dict:
    """Vertex JSON embeds the generating targets so it can be reloaded alone."""
    return {
        "d": V.vertices[0].d if V.vertices else V.constraints.d,
        "count": len(V.vertices),
        "targets": targets_to_json_dict(V.constraints.targets, digits),
        "vertices": [
            {
                "cells": [format_rational(c) for c in v.cells],
                "decimals": [_decimal_str(c, digits) for c in v.cells],
            }
            for v in V.vertices
        ],
    }


def targets_from_json_dict(obj: dict) -> MarginTargets:
    try:
        univariate = tuple(parse_rational(m) for m in obj["univariate"])
        moments = {
            (int(key[0]), int(key[1])): parse_rational(entry["rational"])
            for key, entry in obj["moments"].items()
        }
        return MarginTargets(d=obj["d"], univariate=univariate, moments=moments)
    except (KeyError, IndexError, TypeError) as exc:
        raise TableParseError(f"malformed targets JSON: {exc}") from exc


def vertexset_from_json(text: str) -> VertexSet:
    from .constraints import build_H

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableParseError(f"invalid vertex JSON: {exc}") from exc
    try:
        targets = targets_from_json_dict(obj["targets"])
        H = build_H(targets)
        vertices = []
        for entry in obj["vertices"]:
            cells = tuple(parse_rational(c) for c in entry["cells"])
            vertices.append(Pmf(d=obj["d"], cells=cells, mode=RATIONAL))
    except (KeyError, TypeError) as exc:
        raise TableParseError(f"malformed vertex JSON: {exc}") from exc
    return VertexSet(vertices=tuple(vertices), constraints=H)


def subset_key(subset: Tuple[int, ...]) -> str:
    """Subsets serialize as digit strings ('∅' for the intercept); needs d <= 9."""
    return "".join(str(i) for i in subset) if subset else "∅"


def loglinear_to_json_dict(params: LogLinearParams) -> dict:
    return {
        "parametrization": params.parametrization,
        "eps": params.eps,
        "coefficients": {
            subset_key(subset): params.coefficients[subset]
            for subset in sorted(params.coefficients, key=lambda s: (len(s), s))
        },
    }
