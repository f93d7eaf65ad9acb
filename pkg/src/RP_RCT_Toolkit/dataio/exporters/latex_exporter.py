"""
LaTeX exporter for per-outcome estimation reports.

Produces the results table as a `table` environment, or a standalone
document around it.
"""
import logging
from pathlib import Path
from typing import Sequence

from pylatex import Document, NoEscape, Section, Table, Tabular
from pylatex.utils import escape_latex

from ...estimate import EstimateReport
from .report_exporter import table_rows

logger = logging.getLogger(__name__)

HEADER = (
    "Outcome",
    NoEscape(r"$\hat{\lambda}$ (se)"),
    NoEscape(r"$\hat{\tau}_{H,\mathrm{Diff}}$ (se)"),
    NoEscape(r"$\hat{\tau}_{H,\mathrm{Cov}}$ (se)"),
)
CAPTION = "Estimates of treatment effects on each outcome"


class LatexExporter:
    """
    Exports estimation reports to LaTeX.

    Standard errors are bootstrap SEs when the reports carry them.
    """

    def __init__(self, caption: str = CAPTION):
        self.caption = caption

    def _table(self, reports: Sequence[EstimateReport]) -> Table:
        table = Table(position="htbp")
        tabular = Tabular("lrrr")
        tabular.add_hline()
        tabular.add_row(HEADER)
        tabular.add_hline()
        for row in table_rows(reports):
            tabular.add_row([escape_latex(row[0]), *row[1:]])
        tabular.add_hline()
        table.append(NoEscape(r"\centering"))
        table.append(tabular)
        table.add_caption(self.caption)
        return table

    def table(self, reports: Sequence[EstimateReport]) -> str:
        """The results table alone, ready to \\input into a manuscript."""
        if not reports:
            raise ValueError("Nothing to render: the report list is empty")
        return self._table(reports).dumps() + "\n"

    def document(self, reports: Sequence[EstimateReport]) -> Document:
        doc = Document(
            documentclass="article",
            document_options="11pt",
            geometry_options={"paper": "a4paper", "margin": "2cm"},
        )
        with doc.create(Section("Treatment effects", numbering=False)):
            doc.append(self._table(reports))
            warnings = [w for report in reports for w in report.warnings]
            if warnings:
                doc.append(NoEscape(r"\paragraph{Warnings}"))
                for warning in warnings:
                    doc.append(warning)
                    doc.append(NoEscape(r"\\"))
        return doc

    def export_tex(self, reports: Sequence[EstimateReport], path: str) -> str:
        """
        Write a standalone .tex file.

        Args:
            reports: Per-outcome reports
            path: Output path; the .tex suffix is added when missing

        Returns:
            Path of the written file
        """
        target = Path(path).with_suffix("")
        self.document(reports).generate_tex(str(target))
        logger.info("LaTeX report written to %s.tex", target)
        return f"{target}.tex"
