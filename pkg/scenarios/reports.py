# scenarios/reports.py
import csv
import io
import logging

from django.db import models
from django.template.loader import render_to_string
from django.utils.translation import gettext_lazy as _
from rest_framework.renderers import JSONRenderer

from channel.wire import MessageKind
from kem.bench import OpTiming
from kem.params import KemVariant
from kem.serializers import OpTimingSerializer
from netsim.links import Medium
from pqcpslab.exceptions import ConfigurationError

from .models import Layout, Statistic
from .runner import MetricsReport
from .serializers import BudgetVerdictSerializer, MetricsReportSerializer
from .verdicts import BudgetVerdict, RecordedDelay

logger = logging.getLogger(__name__)

DELAY_COLUMNS = ('scheme', 'scenario', 'medium', 'statistic', 'public_key_us', 'ciphertext_us', 'encrypted_data_us')
TIMING_COLUMNS = ('scheme', 'op', 'cycle_estimate', 'time_us')
VERDICT_COLUMNS = ('scheme', 'scenario', 'medium', 'kind', 'observed_avg_us', 'threshold_us', 'verdict')

_KIND_ORDER = (MessageKind.PUBLIC_KEY, MessageKind.CIPHERTEXT, MessageKind.ENCRYPTED_DATA)


class ReportFormat(models.TextChoices):
    CSV = 'csv', 'CSV'
    JSON = 'json', 'JSON'
    MARKDOWN = 'markdown', 'Markdown'


class TableShape(models.TextChoices):
    DELAYS = 'delays', 'Communication delay'
    TIMINGS = 'timings', 'Cryptographic operations'
    VERDICTS = 'verdicts', 'Latency budget'


def number(value):
    """Fixed four decimals with trailing zeros dropped"""
    text = f"{value:.4f}".rstrip('0').rstrip('.')
    return '0' if text in ('', '-0') else text


# ==================== ROW BUILDERS ====================

def _delay_rows_from_report(report):
    scenario = report.scenario
    rows = []
    for stat in Statistic.values:
        rows.append({
            'scheme': KemVariant(scenario.variant).label,
            'scenario': Layout(scenario.layout).label,
            'medium': Medium(scenario.medium).label,
            'statistic': stat,
            **{f"{kind}_us": number(report.delays[kind].stat(stat)) for kind in _KIND_ORDER},
        })
    return rows


def _delay_rows_from_recorded(recorded):
    grouped = {}
    for row in recorded:
        key = (row.scheme, row.scenario, row.medium, row.stat)
        entry = grouped.setdefault(key, {
            'scheme': KemVariant(row.scheme).label,
            'scenario': Layout(row.scenario).label,
            'medium': Medium(row.medium).label,
            'statistic': str(row.stat),
            **{f"{kind}_us": '' for kind in _KIND_ORDER},
        })
        entry[f"{row.kind}_us"] = number(row.value_us)
    return list(grouped.values())


def _timing_rows(timings):
    return [
        {
            'scheme': KemVariant(t.variant).label,
            'op': str(t.op),
            'cycle_estimate': str(t.cycle_estimate),
            'time_us': number(t.mean_us),
        }
        for t in timings
    ]


def _verdict_rows(verdicts):
    rows = []
    for data in BudgetVerdictSerializer(verdicts, many=True).data:
        row = {column: data[column] for column in VERDICT_COLUMNS}
        row['observed_avg_us'] = number(row['observed_avg_us'])
        row['threshold_us'] = number(row['threshold_us'])
        rows.append(row)
    return rows


def _shape_of(subject, table):
    if isinstance(subject, MetricsReport):
        return TableShape.DELAYS
    items = list(subject)
    if not items:
        return TableShape(table) if table else TableShape.VERDICTS
    first = items[0]
    if isinstance(first, BudgetVerdict):
        return TableShape.VERDICTS
    if isinstance(first, OpTiming):
        return TableShape.TIMINGS
    if isinstance(first, RecordedDelay):
        return TableShape.DELAYS
    raise ConfigurationError(_("Nothing to render for {type}.").format(type=type(first).__name__))


def _rows(subject, shape):
    if shape == TableShape.TIMINGS:
        return TIMING_COLUMNS, _timing_rows(subject)
    if shape == TableShape.VERDICTS:
        return VERDICT_COLUMNS, _verdict_rows(subject)
    if isinstance(subject, MetricsReport):
        return DELAY_COLUMNS, _delay_rows_from_report(subject)
    return DELAY_COLUMNS, _delay_rows_from_recorded(subject)


# ==================== RENDERERS ====================

def csv_table(columns, rows):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def json_document(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}).decode('utf-8') + '\n'


def markdown_table(columns, rows, title=None):
    return render_to_string('scenarios/table.md', {
        'title': title,
        'columns': columns,
        'rows': [[row[c] for c in columns] for row in rows],
    })


def _markdown_report(report):
    data = MetricsReportSerializer(report).data
    completion = report.handshake_completion_us
    return render_to_string('scenarios/metrics_report.md', {
        'scenario': data['scenario'],
        'scheme': data['scenario']['scheme'],
        'layout': data['scenario']['scenario'],
        'medium': data['scenario']['medium'],
        'node_a': data['scenario']['node_a'],
        'node_b': data['scenario']['node_b'],
        'runs': report.runs,
        'seed': report.seed,
        'crypto_mode': report.scenario.crypto_mode,
        'completion': [number(completion.max_us), number(completion.min_us), number(completion.avg_us)],
        'delay_columns': DELAY_COLUMNS,
        'delay_rows': [[row[c] for c in DELAY_COLUMNS] for row in _delay_rows_from_report(report)],
        'timing_columns': TIMING_COLUMNS,
        'timing_rows': [[row[c] for c in TIMING_COLUMNS] for row in _timing_rows(report.timings)],
    })


def render_report(subject, format=ReportFormat.CSV, table=None):
    """Render a MetricsReport, verdicts, timings or recorded delays.

    ``table`` names the shape of an empty list (verdicts by default).
    """
    if format not in ReportFormat.values:
        raise ConfigurationError(_("Unknown report format: {format}").format(format=format))
    shape = _shape_of(subject, table)

    if format == ReportFormat.JSON:
        if isinstance(subject, MetricsReport):
            return json_document(MetricsReportSerializer(subject).data)
        if shape == TableShape.TIMINGS:
            return json_document(OpTimingSerializer(subject, many=True).data)
        if shape == TableShape.VERDICTS:
            return json_document(BudgetVerdictSerializer(subject, many=True).data)
        return json_document(_rows(subject, shape)[1])

    if format == ReportFormat.MARKDOWN and isinstance(subject, MetricsReport):
        return _markdown_report(subject)

    columns, rows = _rows(subject, shape)
    if format == ReportFormat.CSV:
        return csv_table(columns, rows)
    return markdown_table(columns, rows, TableShape(shape).label)
