# labcli/dispatch.py
"""Subcommand handlers behind ``manage.py pqcpslab``.

Every handler returns the machine-readable document, a one-line summary and
an exit code. ``dispatch`` writes the document before the summary.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.utils.translation import gettext_lazy as _

from channel.handshake import run_handshake
from channel.serializers import HandshakeTranscriptSerializer
from kem.bench import BenchMode, bench_table
from kem.params import KemVariant
from pqcpslab.exceptions import ConfigurationError, LabError
from scenarios.models import Statistic
from scenarios.reports import ReportFormat, csv_table, json_document, markdown_table, render_report
from scenarios.runner import run_scenario
from scenarios.scenarios import build_evaluation_scenario, scenario_from_config
from scenarios.verdicts import any_failed, bundled_recorded_delays, check_budget, load_recorded_delays, replay_verdicts
from threatmodel.dataflow import bundled_etc_model, load_model
from threatmodel.reports import render_findings
from threatmodel.rules import analyze

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FINDINGS = 2
EXIT_BUDGET = 3


class Subcommand:
    KEM_BENCH = 'kem-bench'
    HANDSHAKE = 'handshake'
    SIMULATE = 'simulate'
    REPLAY = 'replay'
    THREAT_ANALYZE = 'threat-analyze'

    ALL = (KEM_BENCH, HANDSHAKE, SIMULATE, REPLAY, THREAT_ANALYZE)


@dataclass(frozen=True)
class Invocation:
    subcommand: str
    seed: int = None
    format: str = ReportFormat.CSV
    output: str = None
    options: dict = field(default_factory=dict)

    @property
    def master_seed(self):
        return self.seed if self.seed is not None else getattr(settings, 'PQCPSLAB_SEED', 42)

    def option(self, name, default=None):
        value = self.options.get(name)
        return default if value is None else value


@dataclass(frozen=True)
class Outcome:
    document: str
    summary: str
    code: int = EXIT_OK


# ==================== HANDLERS ====================

def kem_bench(invocation):
    variant = invocation.option('variant', 'all')
    variants = None if variant == 'all' else [variant]
    mode = invocation.option('mode', BenchMode.INJECTED)
    default_iterations = 1 if mode == BenchMode.INJECTED else getattr(settings, 'PQCPSLAB_TIMING_ITERATIONS', 60)
    iterations = invocation.option('iterations', default_iterations)
    timings = bench_table(variants, iterations, mode)
    document = render_report(timings, invocation.format)
    return Outcome(document, f"Timed {len(timings)} operation(s), {mode} mode")


def handshake(invocation):
    transcript = run_handshake(
        invocation.option('variant', KemVariant.KYBER512),
        invocation.master_seed,
        data_message_bytes=invocation.option('data_bytes', getattr(settings, 'PQCPSLAB_DATA_MESSAGE_BYTES', 32)),
        tamper=invocation.option('tamper', False),
    )
    data = HandshakeTranscriptSerializer(transcript).data
    if invocation.format == ReportFormat.JSON:
        document = json_document(data)
    elif invocation.format == ReportFormat.MARKDOWN:
        document = markdown_table(list(data), [data], 'Handshake')
    else:
        document = csv_table(list(data), [data])
    honest_failure = not transcript.tampered and not (transcript.keys_agree and transcript.data_authenticated)
    summary = (
        f"{data['scheme']} handshake: keys {'agree' if transcript.keys_agree else 'differ'}, "
        f"data {'authenticated' if transcript.data_authenticated else 'rejected'}"
    )
    return Outcome(document, summary, EXIT_INVALID if honest_failure else EXIT_OK)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as e:
        raise ConfigurationError(_("Cannot read {path}: {error}").format(path=path, error=str(e)))
    except json.JSONDecodeError as e:
        raise ConfigurationError(_("{path} line {line}: {error}").format(path=path, line=e.lineno, error=e.msg))


def simulate(invocation):
    config_path = invocation.option('config')
    if config_path:
        config = scenario_from_config(_read_json(config_path))
        scenario, seed, threshold = config.scenario, config.seed, config.threshold_us
        if invocation.seed is not None:
            seed = invocation.seed
    else:
        scenario = build_evaluation_scenario(
            invocation.option('scenario', 1),
            invocation.option('variant', KemVariant.KYBER512),
            invocation.option('crypto', BenchMode.INJECTED),
            runs=invocation.option('runs'),
            data_message_bytes=invocation.option('data_bytes'),
        )
        seed = invocation.master_seed
        threshold = getattr(settings, 'PQCPSLAB_THRESHOLD_US', 100_000)
    threshold = invocation.option('threshold_us', threshold)

    report = run_scenario(scenario, seed, workers=invocation.option('workers'))
    trace_path = invocation.option('trace')
    if trace_path:
        _write(trace_path, report.trace.to_ndjson())

    verdicts = check_budget(report, threshold)
    failed = sum(not v.passed for v in verdicts)
    code = EXIT_BUDGET if invocation.option('fail_on_budget', False) and failed else EXIT_OK
    summary = (
        f"Scenario {scenario.id}: {scenario.runs} run(s), handshake avg "
        f"{report.handshake_completion_us.avg_us:.4f} us, {failed}/{len(verdicts)} kind(s) over {threshold} us"
    )
    return Outcome(render_report(report, invocation.format), summary, code)


def replay(invocation):
    data_path = invocation.option('data')
    rows = load_recorded_delays(data_path) if data_path else bundled_recorded_delays()
    threshold = invocation.option('threshold_us', getattr(settings, 'PQCPSLAB_THRESHOLD_US', 100_000))
    stat = invocation.option('stat', Statistic.AVG)
    verdicts = replay_verdicts(rows, threshold, stat=None if stat == 'all' else stat)
    failed = sum(not v.passed for v in verdicts)
    code = EXIT_BUDGET if invocation.option('fail_on_budget', False) and any_failed(verdicts) else EXIT_OK
    document = render_report(verdicts, invocation.format, table='verdicts')
    return Outcome(document, f"{failed} of {len(verdicts)} recorded delay(s) exceed {threshold} us", code)


def threat_analyze(invocation):
    model_path = invocation.option('model')
    model = load_model(model_path) if model_path else bundled_etc_model()
    findings = analyze(model)
    code = EXIT_FINDINGS if invocation.option('fail_on_findings', False) and findings else EXIT_OK
    document = render_findings(findings, invocation.format)
    return Outcome(document, f"{len(findings)} finding(s) over {len(model.flows)} flow(s)", code)


HANDLERS = {
    Subcommand.KEM_BENCH: kem_bench,
    Subcommand.HANDSHAKE: handshake,
    Subcommand.SIMULATE: simulate,
    Subcommand.REPLAY: replay,
    Subcommand.THREAT_ANALYZE: threat_analyze,
}


# ==================== DISPATCH ====================

def _write(path, text):
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(_("Cannot write {path}: {error}").format(path=path, error=str(e)))


def dispatch(invocation, stdout, stderr):
    """Run one subcommand; returns the process exit code"""
    handler = HANDLERS.get(invocation.subcommand)
    if handler is None:
        stderr.write(f"Unknown subcommand: {invocation.subcommand}\n")
        return EXIT_INVALID
    try:
        outcome = handler(invocation)
        if invocation.output:
            _write(invocation.output, outcome.document)
        else:
            stdout.write(outcome.document)
    except LabError as e:
        logger.error(f"{invocation.subcommand} failed: {str(e)}")
        stderr.write(f"{invocation.subcommand}: {str(e)}\n")
        return EXIT_INVALID
    stderr.write(outcome.summary + '\n')
    logger.info(f"{invocation.subcommand} finished with exit code {outcome.code}")
    return outcome.code
