# scenarios/verdicts.py
import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path

from django.utils.translation import gettext_lazy as _

from pqcpslab.base_serializers import validated_or_raise
from pqcpslab.exceptions import ConfigurationError

from .models import Statistic, Verdict
from .serializers import RECORDED_DELAY_COLUMNS, RecordedDelaySerializer

logger = logging.getLogger(__name__)

BUNDLED_RECORDED_DELAYS = Path(__file__).resolve().parent / 'data' / 'recorded_delays.csv'


@dataclass(frozen=True)
class RecordedDelay:
    scheme: str
    scenario: str
    medium: str
    kind: str
    stat: str
    value_us: float


@dataclass(frozen=True)
class BudgetVerdict:
    kind: str
    observed_avg_us: float
    threshold_us: float
    verdict: str
    scheme: str
    scenario: str
    medium: str

    @property
    def passed(self):
        return self.verdict == Verdict.PASS


def judge(observed_us, threshold_us):
    """Inclusive budget rule"""
    return Verdict.PASS if observed_us <= threshold_us else Verdict.FAIL


# ==================== RECORDED TABLES ====================

def load_recorded_delays(source):
    """Read a recorded-delay CSV from a path or an open text file"""
    if hasattr(source, 'read'):
        return _parse_rows(source, getattr(source, 'name', '<stream>'))
    path = Path(source)
    try:
        with path.open(newline='', encoding='utf-8') as handle:
            return _parse_rows(handle, path.name)
    except OSError as e:
        raise ConfigurationError(_("Cannot read delay table {path}: {error}").format(path=path, error=str(e)))


def _parse_rows(handle, name):
    reader = csv.DictReader(handle)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != list(RECORDED_DELAY_COLUMNS):
        raise ConfigurationError(
            _("{name}: expected columns {columns}.").format(name=name, columns=', '.join(RECORDED_DELAY_COLUMNS))
        )
    rows = []
    # header is line 1
    for line, raw in enumerate(reader, start=2):
        try:
            data = validated_or_raise(RecordedDelaySerializer(data=raw), ConfigurationError)
        except ConfigurationError as e:
            raise ConfigurationError(_("{name} line {line}: {error}").format(name=name, line=line, error=str(e)))
        rows.append(RecordedDelay(**data))
    logger.info(f"Loaded {len(rows)} recorded delays from {name}")
    return rows


def bundled_recorded_delays():
    return load_recorded_delays(BUNDLED_RECORDED_DELAYS)


def parse_recorded_delays(text):
    return load_recorded_delays(io.StringIO(text))


# ==================== VERDICTS ====================

def replay_verdicts(rows, threshold_us, stat=Statistic.AVG):
    """One verdict per recorded row of statistic ``stat`` (all rows when None)"""
    if threshold_us < 0:
        raise ConfigurationError(_("Threshold cannot be negative."))
    return [
        BudgetVerdict(
            kind=row.kind, observed_avg_us=row.value_us, threshold_us=threshold_us,
            verdict=judge(row.value_us, threshold_us),
            scheme=row.scheme, scenario=row.scenario, medium=row.medium,
        )
        for row in rows
        if stat is None or row.stat == stat
    ]


def check_budget(report, threshold_us):
    """Verdict per message kind on a simulated report's average delay"""
    if threshold_us < 0:
        raise ConfigurationError(_("Threshold cannot be negative."))
    scenario = report.scenario
    return [
        BudgetVerdict(
            kind=kind, observed_avg_us=stats.avg_us, threshold_us=threshold_us,
            verdict=judge(stats.avg_us, threshold_us),
            scheme=scenario.variant, scenario=scenario.layout, medium=scenario.medium,
        )
        for kind, stats in report.delays.items()
    ]


def any_failed(verdicts):
    return any(not v.passed for v in verdicts)
