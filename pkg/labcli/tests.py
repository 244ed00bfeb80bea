# labcli/tests.py
import io
import json
import tempfile
from pathlib import Path

from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from .dispatch import EXIT_BUDGET, EXIT_INVALID, Invocation, dispatch


def run_cli(*args):
    """Run the command; returns (exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    try:
        call_command('pqcpslab', *args, stdout=out, stderr=err)
        code = 0
    except CommandError as e:
        code = e.returncode
    return code, out.getvalue(), err.getvalue()


class KemBenchCommandTests(SimpleTestCase):

    def test_injected_table(self):
        code, out, _ = run_cli('kem-bench', '--variant', 'kyber512')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines(), [
            'scheme,op,cycle_estimate,time_us',
            'Kyber-512,keygen,155365,44',
            'Kyber-512,encaps,191358,53',
            'Kyber-512,decaps,232691,65',
        ])

    def test_all_variants_json(self):
        code, out, _ = run_cli('kem-bench', '--format', 'json')
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(out)), 9)


class HandshakeCommandTests(SimpleTestCase):

    def test_honest_handshake(self):
        code, out, err = run_cli('handshake', '--variant', 'kyber768', '--format', 'json')
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual((data['public_key_bytes'], data['ciphertext_bytes']), (1184, 1088))
        self.assertTrue(data['keys_agree'])
        self.assertIn('keys agree', err)

    def test_tampered_handshake_is_reported_not_failed(self):
        code, out, err = run_cli('handshake', '--tamper', '--format', 'json')
        self.assertEqual(code, 0)
        self.assertFalse(json.loads(out)['data_authenticated'])
        self.assertIn('rejected', err)

    def test_negative_data_size(self):
        code, out, err = run_cli('handshake', '--data-bytes', '-1')
        self.assertEqual(code, EXIT_INVALID)
        self.assertEqual(out, '')
        self.assertIn('handshake:', err)


class SimulateCommandTests(SimpleTestCase):

    def test_wired_scenario(self):
        code, out, err = run_cli('simulate', '--scenario', '1', '--variant', 'kyber512', '--crypto', 'injected')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], 'scheme,scenario,medium,statistic,public_key_us,ciphertext_us,encrypted_data_us')
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[3].startswith('Kyber-512,Static-Static,Ethernet,avg,5.004,'))
        self.assertIn('0/3', err)

    def test_identical_invocations_identical_output(self):
        args = ('simulate', '--scenario', '4', '--variant', 'kyber1024', '--runs', '3', '--seed', '9', '--format', 'json')
        self.assertEqual(run_cli(*args)[1], run_cli(*args)[1])

    def test_budget_failure(self):
        code, _, _ = run_cli('simulate', '--scenario', '2', '--threshold-us', '10', '--fail-on-budget')
        self.assertEqual(code, EXIT_BUDGET)

    def test_config_and_trace_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = Path(tmp) / 'scenario.json'
            config.write_text(json.dumps({'id': 3, 'variant': 'Kyber-768', 'runs': 2}))
            trace = Path(tmp) / 'out' / 'trace.ndjson'
            report = Path(tmp) / 'report.md'
            code, out, _ = run_cli(
                'simulate', '--config', str(config), '--trace', str(trace),
                '--format', 'markdown', '--output', str(report),
            )
            self.assertEqual(code, 0)
            self.assertEqual(out, '')
            self.assertIn('Static-Dynamic over ADHOC LTE', report.read_text())
            first = json.loads(trace.read_text().splitlines()[0])
            # keygen starts at zero and is recorded when it finishes
            self.assertEqual(first['action'], 'keygen')
            self.assertEqual(first['time_us'], first['delay_us'])
            self.assertEqual(first['time_us'], 75.0)

    def test_bad_config(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = Path(tmp) / 'scenario.json'
            config.write_text('{"id": 7}')
            code, out, err = run_cli('simulate', '--config', str(config))
        self.assertEqual(code, EXIT_INVALID)
        self.assertEqual(out, '')
        self.assertIn('simulate:', err)

    def test_missing_config(self):
        self.assertEqual(run_cli('simulate', '--config', '/nonexistent/scenario.json')[0], EXIT_INVALID)

    def test_negative_data_size(self):
        code, out, err = run_cli('simulate', '--data-bytes', '-1')
        self.assertEqual(code, EXIT_INVALID)
        self.assertIn('simulate:', err)


class ReplayCommandTests(SimpleTestCase):

    def test_bundled_table_fails_budget(self):
        code, out, err = run_cli('replay', '--threshold-us', '100000', '--fail-on-budget')
        self.assertEqual(code, EXIT_BUDGET)
        self.assertEqual(len(out.splitlines()), 37)
        self.assertIn('exceed 100000 us', err)

    def test_without_flag_exits_zero(self):
        self.assertEqual(run_cli('replay')[0], 0)

    def test_data_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            data = Path(tmp) / 'delays.csv'
            data.write_text(
                'scheme,scenario,medium,kind,stat,value_us\n'
                'Kyber-512,Static-Static,Ethernet,PublicKey,avg,5.0027\n'
            )
            code, out, _ = run_cli('replay', '--data', str(data), '--fail-on-budget')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[1], 'Kyber-512,Static-Static,Ethernet,Public Key,5.0027,100000,PASS')

    def test_malformed_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            data = Path(tmp) / 'delays.csv'
            data.write_text('scheme,value\nKyber-512,1\n')
            self.assertEqual(run_cli('replay', '--data', str(data))[0], EXIT_INVALID)


class ThreatAnalyzeCommandTests(SimpleTestCase):

    def test_findings_exit_code(self):
        code, out, _ = run_cli('threat-analyze', '--fail-on-findings')
        self.assertEqual(code, 2)
        self.assertGreaterEqual(len(out.splitlines()) - 1, 11)

    def test_report_without_flag(self):
        code, out, _ = run_cli('threat-analyze', '--format', 'markdown')
        self.assertEqual(code, 0)
        self.assertIn('Weak Authentication Scheme', out)

    def test_invalid_model(self):
        with tempfile.TemporaryDirectory() as tmp:
            model = Path(tmp) / 'model.json'
            model.write_text('{"elements": [{"name": "A", "kind": "Process"}], "flows": '
                             '[{"name": "f", "src": "A", "dst": "B", "medium": "Wired"}]}')
            code, _, err = run_cli('threat-analyze', '--model', str(model))
        self.assertEqual(code, EXIT_INVALID)
        self.assertIn('flows[0].dst', err)


class DispatchTests(SimpleTestCase):

    def test_runs_without_contrib_apps(self):
        self.assertFalse(apps.is_installed('django.contrib.auth'))
        self.assertFalse(apps.is_installed('django.contrib.contenttypes'))
        self.assertEqual(run_cli('threat-analyze', '--format', 'json')[0], 0)

    def test_unknown_subcommand(self):
        err = io.StringIO()
        self.assertEqual(dispatch(Invocation('serve'), io.StringIO(), err), EXIT_INVALID)
        self.assertIn('serve', err.getvalue())

    @override_settings(PQCPSLAB_SEED=1234)
    def test_seed_falls_back_to_settings(self):
        self.assertEqual(Invocation('simulate').master_seed, 1234)
        self.assertEqual(Invocation('simulate', seed=5).master_seed, 5)

    def test_document_before_summary(self):
        stream = io.StringIO()
        dispatch(Invocation('replay'), stream, stream)
        text = stream.getvalue()
        self.assertTrue(text.startswith('scheme,scenario,medium,kind'))
        self.assertTrue(text.rstrip().endswith('exceed 100000 us'))
