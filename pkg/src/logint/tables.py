"""Integral tables: exact expression, float value and an oracle cross-check per row."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional, Sequence

from . import closed_forms as cf
from . import fib_corollaries as fc
from .quadrature import F_integrand, integrate

TABLE_FAMILIES = ("F0", "F1", "F2", "general", "fib")
FORMATS = ("csv", "md", "json")
COLUMNS = ("family", "m", "k", "r", "a", "integrand", "expression", "value", "quadrature", "rel_err")

_FIXED_M = {"F0": (0, cf.closed_F0), "F1": (1, cf.closed_F1), "F2": (2, cf.closed_F2)}


@dataclass
class TableRow:
    family: str
    m: Optional[int]
    k: Optional[int]
    r: Optional[int]
    a: Optional[float]
    integrand: str
    expression: str
    value: float
    quadrature: float
    rel_err: float


def _rel(value: float, quad: float) -> float:
    return abs(value - quad) / abs(value) if value else abs(value - quad)


def _F_row(family: str, m: int, k: int, a: float, expr) -> TableRow:
    f = F_integrand(m, k, a)
    value = expr.evaluate(a)
    quad = integrate(f).value
    return TableRow(family, m, k, None, a, f.describe(), str(expr), value, quad, _rel(value, quad))


def build_table(
    family: str,
    ks: Sequence[int] = (0, 1, 2, 3),
    a_values: Sequence[float] = (1.0, 2.0),
    ms: Sequence[int] = (0,),
    rs: Sequence[int] = (2,),
    fib_families: Optional[Iterable[fc.FibFamily]] = None,
) -> List[TableRow]:
    """Rows in (m, k, a) order; for ``fib`` the a-grid is replaced by the golden family arguments."""
    if family not in TABLE_FAMILIES:
        raise ValueError(f"unknown table family {family!r}; expected one of {TABLE_FAMILIES}")
    rows: List[TableRow] = []
    if family in _FIXED_M:
        m, build = _FIXED_M[family]
        for k in ks:
            expr = build(k)
            rows.extend(_F_row(family, m, k, a, expr) for a in a_values)
    elif family == "general":
        for m in ms:
            for k in ks:
                expr = cf.closed_F_general(m, k)
                rows.extend(_F_row(family, m, k, a, expr) for a in a_values)
    else:
        fams = list(fib_families) if fib_families else [fc.FibFamily.GOLDEN_LUCAS, fc.FibFamily.GOLDEN_FIB]
        for fam in fams:
            for r in (rs if fam.uses_r else (2,)):
                for n in ks:
                    spec = fc.FibIntegrandSpec(fam, n, r)
                    f = fc.build_integrand(spec)
                    rhs = fc.build_rhs(spec)
                    value = rhs.to_float()
                    quad = integrate(f).value
                    is_power = fam in (fc.FibFamily.POWER_LUCAS, fc.FibFamily.POWER_FIB)
                    rows.append(TableRow(
                        fam.value,
                        n if is_power else None,
                        None if is_power else n,
                        r if fam.uses_r else None,
                        None,
                        f.describe(),
                        str(rhs),
                        value,
                        quad,
                        _rel(value, quad),
                    ))
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(rows: Sequence[TableRow], fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_cell(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()
    lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    for r in rows:
        cells = [_cell(getattr(r, c)).replace("|", "\\|") for c in COLUMNS]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def parse(text: str, fmt: str) -> List[TableRow]:
    """Inverse of :func:`emit` for the json and csv formats."""
    if fmt == "json":
        return [TableRow(**d) for d in json.loads(text)]
    if fmt == "csv":
        out = []
        for rec in csv.DictReader(io.StringIO(text)):
            kw = {}
            for c in COLUMNS:
                v = rec[c]
                if c in ("m", "k", "r"):
                    kw[c] = int(v) if v else None
                elif c in ("a", "value", "quadrature", "rel_err"):
                    kw[c] = float(v) if v else None
                else:
                    kw[c] = v
            out.append(TableRow(**kw))
        return out
    raise ValueError(f"cannot parse format {fmt!r}")
