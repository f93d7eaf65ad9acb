"""
Rendering of estimation reports and result tables as JSON, Markdown or CSV.
"""
import io
import json
import logging
from typing import Any, List, Mapping, Sequence

import pandas as pd

from ...estimate import EstimateReport, Method
from ..config_io import jsonable, save_json
from ..csv_io import FLOAT_FORMAT

logger = logging.getLogger(__name__)

FORMATS = ("json", "markdown", "csv", "latex")
MARKDOWN_HEADER = ("Outcome", "λ̂ (se)", "τ̂_H,Diff (se)", "τ̂_H,Cov (se)")
INFERENCE_HEADER = ("Outcome", "Estimator", "Estimate", "SE", "Bootstrap SE", "CI", "t", "p-value")
BALANCE_HEADER = ("Outcome", "Covariate", "Mean (A=1)", "Mean (A=0)", "SMD", "Flagged", "Note")


def display_name(outcome: str) -> str:
    """attention -> Attention, judgement_of_learning -> Judgement of learning."""
    name = outcome.replace("_", " ").strip()
    return name[:1].upper() + name[1:]


def estimate_cell(value: float, se: float) -> str:
    return f"{value:.3f} ({se:.3f})"


def table_rows(reports: Sequence[EstimateReport]) -> List[List[str]]:
    """Outcome, lambda, HDiff and HCov cells of the results table."""
    return [
        [
            display_name(report.outcome),
            estimate_cell(report.lam.lambda_hat, report.lambda_se),
            estimate_cell(report.h_diff.tau_hat, report.h_diff.se),
            estimate_cell(report.h_cov.tau_hat, report.h_cov.se),
        ]
        for report in reports
    ]


def _markdown_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(cell) for cell in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _number(value: Any, digits: int = 3) -> str:
    if value is None or value != value:
        return ""
    return f"{value:.{digits}f}"


def inference_rows(reports: Sequence[EstimateReport]) -> List[List[str]]:
    """Estimate, both standard errors, interval and Wald test per honest estimator."""
    rows = []
    for report in reports:
        for method in (Method.H_DIFF, Method.H_COV):
            est = report.effect(method)
            wald = report.wald[method.value]
            low, high = est.ci_bootstrap if est.ci_bootstrap is not None else est.ci
            rows.append(
                [
                    display_name(report.outcome),
                    method.label,
                    _number(est.tau_hat),
                    _number(est.se_analytic),
                    _number(est.se_bootstrap),
                    f"[{low:.3f}, {high:.3f}]",
                    _number(wald.t, 2),
                    _number(wald.p_value, 4),
                ]
            )
    return rows


def balance_rows(reports: Sequence[EstimateReport]) -> List[List[str]]:
    return [
        [
            display_name(report.outcome),
            row.covariate,
            _number(row.mean_treated),
            _number(row.mean_control),
            _number(row.smd),
            "yes" if row.flagged else "",
            row.note,
        ]
        for report in reports
        for row in report.balance
    ]


def _markdown(reports: Sequence[EstimateReport]) -> str:
    text = _markdown_table(MARKDOWN_HEADER, table_rows(reports))
    text += "\nInference:\n\n" + _markdown_table(INFERENCE_HEADER, inference_rows(reports))
    balance = balance_rows(reports)
    if balance:
        text += "\nCovariate balance:\n\n" + _markdown_table(BALANCE_HEADER, balance)
    warnings = [w for report in reports for w in report.warnings]
    if warnings:
        text += "\nWarnings:\n\n" + "".join(f"- {w}\n" for w in warnings)
    return text


def flat_row(report: EstimateReport) -> dict:
    row = {
        "outcome": report.outcome,
        "n": report.n,
        "alpha": report.alpha,
        "lambda_hat": report.lam.lambda_hat,
        "lambda_se": report.lambda_se,
        "lambda_raw": report.lam.raw_value,
        "boundary_corrected": report.lam.boundary_corrected,
    }
    for method in (Method.H_DIFF, Method.H_COV):
        est = report.effect(method)
        wald = report.wald[method.value]
        key = method.value
        row.update(
            {
                f"{key}_tau": est.tau_hat,
                f"{key}_se_analytic": est.se_analytic,
                f"{key}_se_bootstrap": est.se_bootstrap,
                f"{key}_ci_low": est.ci[0],
                f"{key}_ci_high": est.ci[1],
                f"{key}_t": wald.t,
                f"{key}_p_value": wald.p_value,
            }
        )
    return row


def _csv(rows: Sequence[Mapping]) -> str:
    buffer = io.StringIO()
    pd.DataFrame(list(rows)).to_csv(
        buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return buffer.getvalue()


def render_report(reports: Sequence[EstimateReport], fmt: str = "markdown") -> str:
    """
    Render per-outcome reports.

    Args:
        reports: One EstimateReport per outcome, in table order
        fmt: json (lossless), markdown (results table), csv (one flat row
            per outcome) or latex

    Raises:
        ValueError: No reports or an unknown format
    """
    reports = list(reports)
    if not reports:
        raise ValueError("Nothing to render: the report list is empty")
    if fmt == "json":
        return save_json([report.to_dict() for report in reports])
    if fmt == "markdown":
        return _markdown(reports)
    if fmt == "csv":
        return _csv([flat_row(report) for report in reports])
    if fmt == "latex":
        from .latex_exporter import LatexExporter

        return LatexExporter().table(reports)
    raise ValueError(f"Unknown format {fmt!r}; choose one of {FORMATS}")


def parse_reports(text: str) -> List[EstimateReport]:
    """Inverse of render_report(..., "json")."""
    return [EstimateReport.from_dict(item) for item in json.loads(text)]


def render_rows(rows: Sequence[Mapping], fmt: str = "markdown") -> str:
    """Render a list of flat records (design, simulation and power tables)."""
    rows = [jsonable(dict(row)) for row in rows]
    if not rows:
        raise ValueError("Nothing to render: the table is empty")
    if fmt == "json":
        return save_json(rows)
    if fmt == "csv":
        return _csv(rows)
    if fmt == "markdown":
        header = list(rows[0])
        cells = [[_cell(row.get(key)) for key in header] for row in rows]
        return _markdown_table(header, cells)
    raise ValueError(f"Format {fmt!r} is not available for this table")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def render_document(document: Mapping, fmt: str = "markdown") -> str:
    """Render one nested document: JSON as is, Markdown/CSV as key-value rows."""
    if fmt == "json":
        return save_json(document)
    flat = []

    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, Mapping):
            for key, item in value.items():
                walk(f"{prefix}.{key}" if prefix else str(key), item)
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], Mapping):
            for i, item in enumerate(value):
                walk(f"{prefix}.{i}", item)
        else:
            flat.append({"field": prefix, "value": value})

    walk("", jsonable(document))
    for row in flat:
        if isinstance(row["value"], list):
            row["value"] = ", ".join(str(v) for v in row["value"])
    return render_rows(flat, fmt)
