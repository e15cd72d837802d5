"""CSV and JSON report rendering.

Every report is a ``Table``: ordered metadata, a fixed column list and rows.
CSV starts with ``# key: value`` metadata lines and writes floats with 12
significant digits; JSON carries the same data under ``meta`` and ``rows``.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

from .. import schemas
from ..models import OutputFormat
from .filtration import Filtration, TruncationReport
from .zeros import ZeroScan


@dataclass
class Table:
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return ";".join(format_value(v) for v in value)
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, int):
        return value
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if hasattr(value, "value"):
        return value.value
    return str(value)


def render_csv(table: Table) -> str:
    buffer = io.StringIO()
    for key, value in table.meta.items():
        buffer.write(f"# {key}: {format_value(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(table: Table) -> str:
    payload = {
        "meta": {k: _json_value(v) for k, v in table.meta.items()},
        "rows": [dict(zip(table.columns, map(_json_value, row))) for row in table.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def render(table: Table, output: OutputFormat) -> str:
    return render_json(table) if OutputFormat(output) is OutputFormat.JSON else render_csv(table)


# --- report builders ---
def smt_table(report: schemas.SmtReport) -> Table:
    meta = report.meta
    columns = ["r", "T"] + [f"N_trunc[{t}]" for t in meta.targets] + [
        "rhs",
        "lhs",
        "margin",
        "equalized_rhs",
        "flags",
    ]
    rows = [
        [row.r, row.T, *row.N_truncated, row.rhs, row.lhs, row.margin, row.equalized_rhs, row.flags]
        for row in report.rows
    ]
    return Table(columns, rows, meta.model_dump())


def nevanlinna_table_report(report: schemas.NevanlinnaReport) -> Table:
    columns = ["r", "r_used", "T"]
    for t in report.targets:
        columns += [f"{name}[{t}]" for name in ("m", "n", "n_trunc", "N", "N_trunc", "fmt")]
    rows = []
    for row in report.rows:
        values: List[Any] = [row.r, row.r_used, row.T]
        for v in row.targets:
            values += [v.m, v.n, v.n_truncated, v.N, v.N_truncated, v.residual]
        rows.append(values)
    truncation = "inf" if report.truncation is None else report.truncation
    return Table(columns, rows, {"targets": report.targets, "truncation": truncation})


def theorem_r_table(report: schemas.TheoremRReport) -> Table:
    columns = ["r", "proximity_max", "N_W", "lhs", "rhs", "difference"]
    rows = [[r.r, r.proximity_max, r.N_W, r.lhs, r.rhs, r.difference] for r in report.rows]
    meta = {
        "m": report.m,
        "forms": report.forms,
        "wronskian": report.wronskian,
        "independent_subsets": report.independent_subsets,
        "maximal_subsets": report.maximal_subsets,
    }
    return Table(columns, rows, meta)


def proximity_sum_table(report: schemas.ProximitySumReport) -> Table:
    columns = ["r", "r_used", "proximity_sum", "subset_integral", "constant", "margin", "pointwise_slack", "holds"]
    rows = [
        [r.r, r.r_used, r.proximity_sum, r.subset_integral, r.constant, r.margin, r.pointwise_slack, r.holds]
        for r in report.rows
    ]
    meta = {"n": report.n, "q": report.q, "d": report.d, "targets": report.targets, "c1": report.c1}
    return Table(columns, rows, meta)


def bound_table(report: TruncationReport) -> Table:
    columns = ["n", "d", "epsilon", "alpha", "alpha_mode", "m_exact", "m_closed_form", "closed_form_exceeded", "delta_lower", "delta", "ratio"]
    row = [
        report.n,
        report.d,
        str(report.epsilon),
        report.alpha,
        report.alpha_mode,
        report.m_exact,
        report.m_closed_form,
        report.closed_form_exceeded,
        str(report.delta_lower),
        "" if report.delta is None else report.delta,
        "" if report.ratio is None else str(report.ratio),
    ]
    return Table(columns, [row])


def filtration_table(filtration: Filtration, big_delta: int) -> Table:
    columns = ["index", "dim", "delta"]
    rows = [[list(level.index), level.dim, level.delta] for level in filtration.levels]
    meta = {
        "gammas": [g.to_text() for g in filtration.gammas],
        "alpha": filtration.alpha,
        "dimension": filtration.dimension,
        "big_delta": big_delta,
    }
    return Table(columns, rows, meta)


def zeros_table(expr_text: str, scan: ZeroScan) -> Table:
    columns = ["re", "im", "multiplicity", "certified_radius"]
    rows = [
        [float(r.location.real), float(r.location.imag), r.multiplicity, float(r.certified_radius)]
        for r in scan.records
    ]
    meta = {"expr": expr_text, "radius": float(scan.radius), "method": scan.method, "winding": scan.winding}
    return Table(columns, rows, meta)


def lemma_table(summary: schemas.LemmaSummary) -> Table:
    columns = ["block", "case", "passed", "detail"]
    rows = [[c.block, c.case, c.passed, c.detail] for c in summary.cases]
    meta = {"passed": summary.passed, "failed": summary.failed, "blocks": sorted(summary.by_block())}
    return Table(columns, rows, meta)

