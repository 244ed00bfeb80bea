# threatmodel/reports.py
from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import ConfigurationError
from scenarios.reports import ReportFormat, csv_table, json_document, markdown_table

from .serializers import FINDING_COLUMNS, ThreatFindingSerializer


def render_findings(findings, format=ReportFormat.CSV):
    """Findings as CSV or markdown (summary columns) or JSON (every field)"""
    data = ThreatFindingSerializer(findings, many=True).data
    if format == ReportFormat.JSON:
        return json_document(data)
    rows = [{column: item[column] for column in FINDING_COLUMNS} for item in data]
    if format == ReportFormat.CSV:
        return csv_table(FINDING_COLUMNS, rows)
    if format == ReportFormat.MARKDOWN:
        return markdown_table(FINDING_COLUMNS, rows, 'Threat findings')
    raise ConfigurationError(_("Unknown report format: {format}").format(format=format))
