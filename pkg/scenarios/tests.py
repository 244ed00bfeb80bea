# scenarios/tests.py
import io
import json

from django.test import SimpleTestCase, override_settings

from channel.wire import MessageKind
from kem.bench import BenchMode, KemOp, bench_op
from kem.params import KemVariant
from netsim.links import Medium
from pqcpslab.exceptions import ConfigurationError

from .models import Layout, Statistic, Verdict
from .reports import VERDICT_COLUMNS, ReportFormat, TableShape, number, render_report
from .runner import run_scenario
from .scenarios import NODE_B, build_evaluation_scenario, scenario_from_config
from .verdicts import (
    any_failed, bundled_recorded_delays, check_budget, judge, load_recorded_delays, parse_recorded_delays, replay_verdicts,
)

PK = MessageKind.PUBLIC_KEY
CT = MessageKind.CIPHERTEXT
ED = MessageKind.ENCRYPTED_DATA


# ==================== SCENARIO CATALOGUE ====================

class EvaluationScenarioTests(SimpleTestCase):

    def test_geometry(self):
        wired = build_evaluation_scenario(1, 'kyber512')
        self.assertEqual(wired.medium, Medium.WIRED)
        self.assertEqual(wired.layout, Layout.STATIC_STATIC)
        self.assertEqual(build_evaluation_scenario(2, 'kyber512').medium, Medium.WIRELESS_ADHOC)
        self.assertEqual(build_evaluation_scenario(3, 'kyber512').layout, Layout.STATIC_DYNAMIC)
        dynamic = build_evaluation_scenario(4, 'kyber512')
        self.assertEqual(dynamic.layout, Layout.DYNAMIC_DYNAMIC)
        self.assertEqual(dynamic.mobility_a.box_side, 955.0)

    def test_variant_accepts_label(self):
        self.assertEqual(build_evaluation_scenario(1, 'Kyber-768').variant, KemVariant.KYBER768)

    def test_invalid_scenarios(self):
        with self.assertRaises(ConfigurationError):
            build_evaluation_scenario(5, 'kyber512')
        with self.assertRaises(ConfigurationError):
            build_evaluation_scenario(1, 'kyber512', runs=0)
        with self.assertRaises(ConfigurationError):
            build_evaluation_scenario(1, 'kyber512', crypto_mode='guessed')
        with self.assertRaises(ConfigurationError):
            build_evaluation_scenario(1, 'kyber512', initiator='C')
        with self.assertRaises(ConfigurationError):
            build_evaluation_scenario(1, 'kyber512', data_message_bytes=-1)

    def test_responder_follows_initiator(self):
        self.assertEqual(build_evaluation_scenario(1, 'kyber512').responder, NODE_B)
        self.assertEqual(build_evaluation_scenario(1, 'kyber512', initiator=NODE_B).responder, 'A')

    def test_config_defaults(self):
        config = scenario_from_config({'id': 2, 'variant': 'Kyber-1024'})
        self.assertEqual(config.scenario.variant, KemVariant.KYBER1024)
        self.assertEqual(config.scenario.crypto_mode, BenchMode.INJECTED)
        self.assertEqual(config.seed, 42)
        self.assertEqual(config.threshold_us, 100_000)

    @override_settings(PQCPSLAB_RUNS=3, PQCPSLAB_SEED=7)
    def test_config_defaults_follow_settings(self):
        config = scenario_from_config({'id': 1, 'variant': 'kyber512'})
        self.assertEqual(config.scenario.runs, 3)
        self.assertEqual(config.seed, 7)

    def test_config_rejects_bad_documents(self):
        for document in (
            {'variant': 'kyber512'},
            {'id': 9, 'variant': 'kyber512'},
            {'id': 1, 'variant': 'kyber2048'},
            {'id': 1, 'variant': 'kyber512', 'runs': 0},
            {'id': 1, 'variant': 'kyber512', 'threshold_us': -1},
        ):
            with self.subTest(document=document):
                with self.assertRaises(ConfigurationError):
                    scenario_from_config(document)


# ==================== RUNNER ====================

class RunScenarioTests(SimpleTestCase):

    def test_wired_kyber512_reference_values(self):
        report = run_scenario(build_evaluation_scenario(1, 'kyber512', runs=3), seed=42)
        self.assertAlmostEqual(report.delays[PK].avg_us, 5.004, delta=0.01)
        self.assertAlmostEqual(report.handshake_completion_us.avg_us, 172.0, delta=0.01)
        # static nodes give identical runs
        self.assertEqual(report.delays[PK].min_us, report.delays[PK].max_us)

    def test_wireless_kyber512_near_recorded_value(self):
        report = run_scenario(build_evaluation_scenario(2, 'kyber512', runs=3), seed=42)
        recorded = 1126.05
        self.assertLessEqual(abs(report.delays[PK].avg_us - recorded), 0.25 * recorded)

    def test_same_seed_same_report(self):
        scenario = build_evaluation_scenario(4, 'kyber768', runs=4)
        first = run_scenario(scenario, seed=11)
        second = run_scenario(scenario, seed=11)
        self.assertEqual(first, second)
        self.assertEqual(first.trace, second.trace)
        self.assertEqual(first.trace.to_ndjson(), second.trace.to_ndjson())

    def test_seed_changes_mobile_runs(self):
        scenario = build_evaluation_scenario(4, 'kyber512', runs=2)
        self.assertNotEqual(
            run_scenario(scenario, seed=1).delays[PK].avg_us,
            run_scenario(scenario, seed=2).delays[PK].avg_us,
        )

    def test_thread_pool_matches_sequential(self):
        scenario = build_evaluation_scenario(3, 'kyber1024', runs=6)
        self.assertEqual(run_scenario(scenario, seed=5, workers=1), run_scenario(scenario, seed=5, workers=4))

    def test_wireless_slower_than_wired(self):
        for variant in KemVariant.values:
            wired = run_scenario(build_evaluation_scenario(1, variant, runs=2), seed=42)
            wireless = run_scenario(build_evaluation_scenario(2, variant, runs=2), seed=42)
            for kind in MessageKind.values:
                with self.subTest(variant=variant, kind=kind):
                    self.assertGreater(wireless.delays[kind].avg_us, wired.delays[kind].avg_us)

    def test_dynamic_nodes_never_faster_than_static(self):
        for variant in KemVariant.values:
            static = run_scenario(build_evaluation_scenario(2, variant, runs=3), seed=42)
            dynamic = run_scenario(build_evaluation_scenario(4, variant, runs=3), seed=42)
            for kind in MessageKind.values:
                with self.subTest(variant=variant, kind=kind):
                    self.assertGreaterEqual(dynamic.delays[kind].avg_us, static.delays[kind].avg_us)

    def test_delay_grows_with_payload(self):
        small = run_scenario(build_evaluation_scenario(2, 'kyber512', runs=1, data_message_bytes=32), seed=42)
        large = run_scenario(build_evaluation_scenario(2, 'kyber512', runs=1, data_message_bytes=4096), seed=42)
        self.assertGreater(large.delays[ED].avg_us, small.delays[ED].avg_us)
        self.assertEqual(large.delays[PK], small.delays[PK])

    def test_larger_variant_larger_key_delay(self):
        delays = [
            run_scenario(build_evaluation_scenario(2, variant, runs=1), seed=42).delays[PK].avg_us
            for variant in KemVariant.values
        ]
        self.assertEqual(delays, sorted(delays))

    def test_report_carries_injected_timings(self):
        report = run_scenario(build_evaluation_scenario(1, 'kyber1024', runs=1), seed=42)
        self.assertEqual([t.op for t in report.timings], KemOp.values)
        self.assertEqual(report.timings[2].mean_us, 147.0)

    @override_settings(PQCPSLAB_TIMING_ITERATIONS=2, PQCPSLAB_RUNS=7)
    def test_measured_crypto_uses_timing_iterations(self):
        scenario = build_evaluation_scenario(1, 'kyber512', crypto_mode='measured', runs=1)
        report = run_scenario(scenario, seed=42)
        self.assertEqual([t.samples for t in report.timings], [2, 2, 2])
        self.assertGreater(report.handshake_completion_us.avg_us, report.delays[PK].avg_us)


# ==================== BUDGETS ====================

class BudgetTests(SimpleTestCase):

    def test_boundary_is_inclusive(self):
        self.assertEqual(judge(100_000, 100_000), Verdict.PASS)
        self.assertEqual(judge(100_000.001, 100_000), Verdict.FAIL)

    def test_check_budget_on_report(self):
        report = run_scenario(build_evaluation_scenario(1, 'kyber512', runs=1), seed=42)
        verdicts = check_budget(report, 100_000)
        self.assertEqual(len(verdicts), 3)
        self.assertFalse(any_failed(verdicts))
        exact = check_budget(report, report.delays[CT].avg_us)
        self.assertEqual({v.kind: v.verdict for v in exact}[CT], Verdict.PASS)
        self.assertTrue(any_failed(check_budget(report, 1)))

    def test_negative_threshold(self):
        with self.assertRaises(ConfigurationError):
            replay_verdicts([], -1)


class RecordedDelayTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.rows = bundled_recorded_delays()

    def test_bundled_table_shape(self):
        self.assertEqual(len(self.rows), 108)
        self.assertEqual({row.medium for row in self.rows}, {Medium.WIRED, Medium.WIRELESS_ADHOC})

    def _verdicts(self, stat=Statistic.AVG):
        return replay_verdicts(self.rows, 100_000, stat=stat)

    def test_ethernet_rows_pass(self):
        wired = [v for v in self._verdicts() if v.medium == Medium.WIRED]
        self.assertEqual(len(wired), 9)
        self.assertTrue(all(v.passed for v in wired))

    def test_wireless_ciphertext_fails_for_every_statistic(self):
        for stat in (Statistic.AVG, None):
            ciphertext = [v for v in self._verdicts(stat) if v.medium == Medium.WIRELESS_ADHOC and v.kind == CT]
            self.assertEqual(len(ciphertext), 9 if stat else 27)
            self.assertTrue(all(v.verdict == Verdict.FAIL for v in ciphertext))

    def test_wireless_public_key_fails_only_for_kyber1024(self):
        for v in self._verdicts():
            if v.medium == Medium.WIRELESS_ADHOC and v.kind == PK:
                with self.subTest(scheme=v.scheme, scenario=v.scenario):
                    expected = Verdict.FAIL if v.scheme == KemVariant.KYBER1024 else Verdict.PASS
                    self.assertEqual(v.verdict, expected)

    def test_wireless_encrypted_data_passes(self):
        data = [v for v in self._verdicts() if v.medium == Medium.WIRELESS_ADHOC and v.kind == ED]
        self.assertEqual(len(data), 9)
        self.assertTrue(all(v.passed for v in data))

    def test_aliases_and_labels(self):
        rows = parse_recorded_delays(
            "scheme,scenario,medium,kind,stat,value_us\n"
            "Kyber-512,Static-Static,ADHOC LTE (C-V2X),Public Key,Average (avg),1126.05\n"
            "kyber768,static_dynamic,LTE,encrypted_data,max,10\n"
        )
        self.assertEqual(rows[0].medium, Medium.WIRELESS_ADHOC)
        self.assertEqual(rows[0].kind, PK)
        self.assertEqual(rows[0].stat, Statistic.AVG)
        self.assertEqual(rows[1].scenario, Layout.STATIC_DYNAMIC)

    def test_bad_header(self):
        with self.assertRaises(ConfigurationError):
            parse_recorded_delays("scheme,value\nKyber-512,1\n")

    def test_bad_row_names_line(self):
        text = (
            "scheme,scenario,medium,kind,stat,value_us\n"
            "Kyber-512,Static-Static,Ethernet,PublicKey,avg,5.0027\n"
            "Kyber-512,Static-Static,Ethernet,PublicKey,avg,fast\n"
        )
        with self.assertRaisesMessage(ConfigurationError, 'line 3'):
            parse_recorded_delays(text)

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            load_recorded_delays('/nonexistent/table.csv')

    def test_reads_open_stream(self):
        stream = io.StringIO("scheme,scenario,medium,kind,stat,value_us\n")
        self.assertEqual(load_recorded_delays(stream), [])


# ==================== REPORTS ====================

class ReportTests(SimpleTestCase):

    def test_number_formatting(self):
        self.assertEqual(number(5.00400001), '5.004')
        self.assertEqual(number(44.0), '44')
        self.assertEqual(number(0.0), '0')

    def test_empty_verdicts_render_header_only(self):
        self.assertEqual(render_report([], ReportFormat.CSV), ','.join(VERDICT_COLUMNS) + '\n')

    def test_empty_timings_markdown(self):
        text = render_report([], ReportFormat.MARKDOWN, table=TableShape.TIMINGS)
        self.assertIn('| scheme | op | cycle_estimate | time_us |', text)

    def test_timings_markdown_row(self):
        timings = [bench_op('kyber512', op, 1, BenchMode.INJECTED) for op in KemOp.values]
        text = render_report(timings, ReportFormat.MARKDOWN)
        self.assertIn('| Kyber-512 | keygen | 155365 | 44 |', text)

    def test_verdict_csv(self):
        verdicts = replay_verdicts(bundled_recorded_delays(), 100_000)
        lines = render_report(verdicts, ReportFormat.CSV).splitlines()
        self.assertEqual(len(lines), 1 + 36)
        self.assertEqual(lines[1], 'Kyber-512,Static-Static,Ethernet,Public Key,5.0027,100000,PASS')

    def test_recorded_delays_csv(self):
        text = render_report(bundled_recorded_delays(), ReportFormat.CSV)
        # one row per scheme, layout, medium and statistic
        self.assertEqual(len(text.splitlines()), 1 + 36)

    def test_report_formats_are_byte_identical_across_runs(self):
        scenario = build_evaluation_scenario(3, 'kyber768', runs=3)
        for fmt in ReportFormat.values:
            with self.subTest(format=fmt):
                self.assertEqual(
                    render_report(run_scenario(scenario, seed=3), fmt),
                    render_report(run_scenario(scenario, seed=3), fmt),
                )

    def test_json_report(self):
        report = run_scenario(build_evaluation_scenario(1, 'kyber512', runs=1), seed=42)
        data = json.loads(render_report(report, ReportFormat.JSON))
        self.assertEqual(set(data['delays']), set(MessageKind.values))
        self.assertEqual(data['scenario']['scheme'], 'Kyber-512')
        self.assertNotIn('trace', data)

    def test_markdown_report(self):
        report = run_scenario(build_evaluation_scenario(1, 'kyber512', runs=1), seed=42)
        text = render_report(report, ReportFormat.MARKDOWN)
        self.assertTrue(text.startswith('# Scenario 1: Kyber-512, Static-Static over Ethernet'))
        self.assertIn('| Kyber-512 | Static-Static | Ethernet | avg | 5.004 |', text)

    def test_unknown_format(self):
        with self.assertRaises(ConfigurationError):
            render_report([], 'xml')
