# labcli/management/commands/pqcpslab.py
from django.core.management.base import BaseCommand, CommandError

from kem.bench import BenchMode
from kem.params import KemVariant
from labcli.dispatch import EXIT_BUDGET, EXIT_FINDINGS, EXIT_INVALID, Invocation, Subcommand, dispatch
from scenarios.models import Statistic
from scenarios.reports import ReportFormat

EXIT_MESSAGES = {
    EXIT_INVALID: 'invalid input or configuration',
    EXIT_FINDINGS: 'threat findings present',
    EXIT_BUDGET: 'latency budget exceeded',
}

COMMON_OPTIONS = ('subcommand', 'seed', 'format', 'output')


class Command(BaseCommand):
    help = 'Post-quantum key establishment lab: benchmarks, handshakes, simulations, replays and threat analysis.'

    def add_common(self, parser):
        parser.add_argument('--seed', type=int, default=None,
                            help='Master seed (falls back to PQCPSLAB_SEED, then 42)')
        parser.add_argument('--format', choices=ReportFormat.values, default=ReportFormat.CSV)
        parser.add_argument('--output', default=None, help='Write the document here instead of stdout')

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)
        variants = KemVariant.values

        bench = subparsers.add_parser(Subcommand.KEM_BENCH, help='Time keygen, encaps and decaps')
        bench.add_argument('--variant', choices=[*variants, 'all'], default='all')
        bench.add_argument('--iterations', type=int, default=None)
        bench.add_argument('--mode', choices=BenchMode.values, default=BenchMode.INJECTED)
        self.add_common(bench)

        hs = subparsers.add_parser(Subcommand.HANDSHAKE, help='Run one KEM handshake and data exchange')
        hs.add_argument('--variant', choices=variants, default=KemVariant.KYBER512)
        hs.add_argument('--data-bytes', type=int, default=None)
        hs.add_argument('--tamper', action='store_true', help='Flip one ciphertext bit in transit')
        self.add_common(hs)

        sim = subparsers.add_parser(Subcommand.SIMULATE, help='Simulate one evaluation scenario')
        sim.add_argument('--scenario', type=int, choices=[1, 2, 3, 4], default=1)
        sim.add_argument('--variant', choices=variants, default=KemVariant.KYBER512)
        sim.add_argument('--crypto', choices=BenchMode.values, default=BenchMode.INJECTED)
        sim.add_argument('--runs', type=int, default=None)
        sim.add_argument('--data-bytes', type=int, default=None)
        sim.add_argument('--workers', type=int, default=None)
        sim.add_argument('--config', default=None, help='Scenario config JSON (overrides scenario flags)')
        sim.add_argument('--trace', default=None, help='Write the first run trace as NDJSON')
        sim.add_argument('--threshold-us', type=int, default=None)
        sim.add_argument('--fail-on-budget', action='store_true')
        self.add_common(sim)

        rep = subparsers.add_parser(Subcommand.REPLAY, help='Judge recorded delays against the latency budget')
        rep.add_argument('--data', default=None, help='Recorded-delay CSV (bundled table when omitted)')
        rep.add_argument('--threshold-us', type=int, default=None)
        rep.add_argument('--stat', choices=[*Statistic.values, 'all'], default=Statistic.AVG)
        rep.add_argument('--fail-on-budget', action='store_true')
        self.add_common(rep)

        threat = subparsers.add_parser(Subcommand.THREAT_ANALYZE, help='STRIDE and quantum analysis of a dataflow model')
        threat.add_argument('--model', default=None, help='Dataflow model JSON (bundled toll model when omitted)')
        threat.add_argument('--fail-on-findings', action='store_true')
        self.add_common(threat)

    def handle(self, *args, **options):
        invocation = Invocation(
            subcommand=options['subcommand'],
            seed=options.get('seed'),
            format=options.get('format') or ReportFormat.CSV,
            output=options.get('output'),
            options={key: value for key, value in options.items() if key not in COMMON_OPTIONS},
        )
        code = dispatch(invocation, self.stdout, self.stderr)
        if code:
            raise CommandError(EXIT_MESSAGES.get(code, 'failed'), returncode=code)
