# threatmodel/tests.py
import json

from django.test import SimpleTestCase

from pqcpslab.exceptions import MitigationLookupError, ModelError

from .dataflow import Annotations, Flow, bundled_etc_model, parse_model
from .models import BoundaryKind, ElementKind, FlowMedium, Priority, SchemeType, StrideCategory
from .registry import IMPACT_REGISTRY, MITIGATIONS, impact_of, mitigation_for
from .reports import render_findings
from .rules import analyze

PAC = 'Payment Administrative Center'
RPE = 'ITS Roadway Payment Equipment'
OBE = 'Light Vehicle OBE'
RCE = 'May be Subject to Elevation of Privilege Using Remote Code Execution'
FLOW = 'Elevation by Changing the Execution Flow in'

EOP = StrideCategory.ELEVATION_OF_PRIVILEGE
WIRED = FlowMedium.WIRED
WIRELESS = FlowMedium.WIRELESS

# (title, category, interaction) for every row of the tool report on the toll model
TOLL_REPORT_ROWS = [
    ('Weak Authentication Scheme', StrideCategory.INFORMATION_DISCLOSURE, WIRED),
    ('Collision Attacks', StrideCategory.TAMPERING, WIRED),
    ('Replay Attacks', StrideCategory.TAMPERING, WIRED),
    ('Elevation Using Impersonation', EOP, WIRED),
    (f'{RPE} {RCE}', EOP, WIRELESS),
    (f'{FLOW} {OBE}', EOP, WIRELESS),
    (f'{RPE} {RCE}', EOP, WIRED),
    (f'{FLOW} {RPE}', EOP, WIRED),
    (f'{PAC} {RCE}', EOP, WIRELESS),
    (f'{FLOW} {PAC}', EOP, WIRELESS),
    (f'{OBE} {RCE}', EOP, WIRELESS),
]


def model_text(elements=(), flows=(), boundaries=()):
    return json.dumps({'elements': list(elements), 'flows': list(flows), 'boundaries': list(boundaries)}, indent=2)


# ==================== PARSING ====================

class ParseModelTests(SimpleTestCase):

    def test_minimal_model(self):
        model = parse_model(model_text([{'name': 'Gateway', 'kind': 'Process'}]))
        self.assertEqual(len(model.elements), 1)
        self.assertEqual(model.elements[0].kind, ElementKind.PROCESS)
        self.assertEqual(model.flows, ())

    def test_empty_document(self):
        model = parse_model('{}')
        self.assertEqual((model.elements, model.flows, model.boundaries), ((), (), ()))

    def test_bundled_toll_model(self):
        model = bundled_etc_model()
        self.assertEqual([e.name for e in model.elements], [PAC, RPE, OBE])
        self.assertTrue(all(e.kind == ElementKind.PROCESS for e in model.elements))
        wired = {(f.src, f.dst) for f in model.flows if f.medium == WIRED}
        wireless = {(f.src, f.dst) for f in model.flows if f.medium == WIRELESS}
        self.assertEqual(wired, {(PAC, RPE), (RPE, PAC)})
        self.assertEqual(wireless, {(RPE, OBE), (OBE, RPE), (OBE, PAC)})
        border, line = model.boundaries
        self.assertEqual(border.kind, BoundaryKind.TRUST_BORDER)
        self.assertEqual(set(border.members), {PAC, RPE})
        self.assertEqual(line.kind, BoundaryKind.TRUST_LINE)
        self.assertEqual(
            set(line.crossed_flows),
            {f.name for f in model.flows if f.medium == WIRELESS},
        )

    def test_unknown_endpoint_names_offender(self):
        text = model_text(
            [{'name': 'Gateway', 'kind': 'Process'}],
            [{'name': 'uplink', 'src': 'Gateway', 'dst': 'Cloud', 'medium': 'Wired'}],
        )
        with self.assertRaises(ModelError) as caught:
            parse_model(text)
        error, = caught.exception.errors
        self.assertEqual(error['path'], 'flows[0].dst')
        self.assertIn('Cloud', error['message'])
        self.assertIn('Cloud', str(caught.exception))
        # indent=2 puts the first flow object on line 9
        self.assertEqual(error['line'], 9)

    def test_duplicates_and_bad_annotations_collected(self):
        text = model_text(
            [{'name': 'A', 'kind': 'Process'}, {'name': 'A', 'kind': 'DataStore'}],
            [{'name': 'f', 'src': 'A', 'dst': 'A', 'medium': 'Wired',
              'annotations': {'replay_protected': 'no', 'signature': 'RSA'}}],
            [{'name': 'edge', 'kind': 'TrustLine', 'crossed_flows': ['g']}],
        )
        with self.assertRaises(ModelError) as caught:
            parse_model(text)
        paths = [e['path'] for e in caught.exception.errors]
        self.assertIn('elements[1].name', paths)
        self.assertIn('flows[0].annotations', paths)
        self.assertIn('boundaries[0].crossed_flows', paths)
        self.assertTrue(all(e['line'] for e in caught.exception.errors))

    def test_strict_booleans(self):
        text = model_text(
            [{'name': 'A', 'kind': 'Process'}],
            [{'name': 'f', 'src': 'A', 'dst': 'A', 'medium': 'Wired', 'annotations': {'identity_assertion': 1}}],
        )
        with self.assertRaises(ModelError) as caught:
            parse_model(text)
        self.assertEqual(caught.exception.errors[0]['path'], 'flows[0].annotations.identity_assertion')

    def test_bad_kinds(self):
        with self.assertRaises(ModelError):
            parse_model(model_text([{'name': 'A', 'kind': 'Router'}]))
        with self.assertRaises(ModelError):
            parse_model(model_text(
                [{'name': 'A', 'kind': 'Process'}],
                [{'name': 'f', 'src': 'A', 'dst': 'A', 'medium': 'Carrier pigeon'}],
            ))

    def test_malformed_json_reports_line(self):
        with self.assertRaises(ModelError) as caught:
            parse_model('{\n  "elements": [\n}')
        self.assertEqual(caught.exception.errors[0]['line'], 3)

    def test_not_an_object(self):
        with self.assertRaises(ModelError):
            parse_model('[]')
        with self.assertRaises(ModelError):
            parse_model('{"elements": {}}')


# ==================== RULES ====================

class AnalyzeTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model = bundled_etc_model()
        cls.findings = analyze(cls.model)

    def test_empty_model(self):
        self.assertEqual(analyze(parse_model('{}')), [])

    def test_covers_every_tool_report_row(self):
        produced = {(f.title, f.category, f.interaction, f.priority) for f in self.findings}
        self.assertGreaterEqual(len(self.findings), 11)
        for title, category, interaction in TOLL_REPORT_ROWS:
            with self.subTest(title=title, interaction=interaction):
                self.assertIn((title, category, interaction, Priority.HIGH), produced)

    def test_weak_authentication_on_wire(self):
        weak = [f for f in self.findings if f.title == 'Weak Authentication Scheme']
        self.assertEqual(len(weak), 1)
        self.assertEqual(weak[0].interaction, WIRED)
        self.assertEqual(weak[0].rule_id, 'R3')
        self.assertEqual(weak[0].mitigation, 'Use PQC algorithms, such as CRYSTALS-Kyber or Falcon')

    def test_every_finding_maps_to_a_mitigation(self):
        for finding in self.findings:
            self.assertTrue(finding.mitigation)
            self.assertEqual(mitigation_for(finding.title).mitigation, finding.mitigation)
            self.assertIn(finding.category, StrideCategory.values)
            self.assertEqual(finding.priority, Priority.HIGH)

    def test_ordered_by_rule_then_flow(self):
        rule_ids = [f.rule_id for f in self.findings]
        self.assertEqual(rule_ids, sorted(rule_ids))
        flow_order = [f.name for f in self.model.flows]
        r1 = [flow_order.index(f.flow) for f in self.findings if f.rule_id == 'R1']
        self.assertEqual(r1, sorted(r1))

    def test_deterministic(self):
        self.assertEqual(analyze(bundled_etc_model()), self.findings)

    def test_adding_a_flow_keeps_findings(self):
        before = {(f.title, f.category, f.interaction) for f in self.findings}
        extra = Flow('diagnostics', OBE, PAC, WIRED, Annotations(auth_scheme='RSA', replay_protected=False))
        after = {(f.title, f.category, f.interaction) for f in analyze(self.model.with_flow(extra))}
        self.assertTrue(before <= after)
        self.assertIn((f'{PAC} {RCE}', EOP, WIRED), after)

    def test_post_quantum_annotations_stay_quiet(self):
        text = model_text(
            [{'name': 'A', 'kind': 'Process'}, {'name': 'B', 'kind': 'ExternalEntity'}],
            [{'name': 'f', 'src': 'A', 'dst': 'B', 'medium': 'Wired',
              'annotations': {'auth_scheme': 'ML-KEM-768', 'integrity_hash': 'SPHINCS+',
                              'identity_assertion': True}}],
            [{'name': 'border', 'kind': 'TrustBorder', 'members': ['A', 'B']}],
        )
        rule_ids = {f.rule_id for f in analyze(parse_model(text))}
        self.assertEqual(rule_ids, {'R1', 'R2'})

    def test_impersonation_needs_border_crossing(self):
        def rule_ids(members):
            text = model_text(
                [{'name': 'A', 'kind': 'Process'}, {'name': 'B', 'kind': 'Process'}],
                [{'name': 'f', 'src': 'A', 'dst': 'B', 'medium': 'Wireless',
                  'annotations': {'identity_assertion': True}}],
                [{'name': 'border', 'kind': 'TrustBorder', 'members': members}],
            )
            return {f.rule_id for f in analyze(parse_model(text))}

        self.assertIn('R6', rule_ids(['A']))
        self.assertNotIn('R6', rule_ids(['A', 'B']))


# ==================== REGISTRY ====================

class RegistryTests(SimpleTestCase):

    def test_quantum_impact(self):
        self.assertEqual(impact_of('AES'), 'Larger key sizes needed')
        self.assertEqual(impact_of('RSA'), 'No longer secure')
        self.assertEqual(impact_of('SHA-2'), 'Longer output needed')
        self.assertEqual(impact_of('SHA-3'), 'Longer output needed')
        self.assertEqual(impact_of('ECDSA, ECDH (ECC)'), 'No longer secure')
        self.assertEqual(impact_of('DSA (Finite Field Cryptography)'), 'No longer secure')

    def test_aliases(self):
        self.assertEqual(impact_of('sha-256'), 'Longer output needed')
        self.assertEqual(impact_of('ECDH'), 'No longer secure')
        self.assertEqual(IMPACT_REGISTRY.get('AES-256').scheme_type, SchemeType.SYMMETRIC_KEY)

    def test_unknown_scheme(self):
        with self.assertRaises(MitigationLookupError):
            impact_of('Kyber-768')

    def test_mitigations(self):
        self.assertEqual(len(MITIGATIONS), 5)
        self.assertEqual(mitigation_for('Collision Attacks').mitigation, 'Use hash-based PQC algorithms like SPHINCS+')
        self.assertIn(
            'time-based protocols and secure communication channels with PQC',
            mitigation_for('Replay Attacks').mitigation,
        )
        self.assertEqual(mitigation_for('Elevation Using Impersonation').impact,
                         'Unauthorized actions and security breaches')
        self.assertIn('Shor', mitigation_for('weak authentication scheme').quantum_attack)

    def test_elevation_titles_collapse_to_execution_flow(self):
        rce = mitigation_for(f'{OBE} {RCE}')
        flow = mitigation_for(f'{FLOW} {PAC}')
        self.assertEqual(rce, flow)
        self.assertEqual(rce.impact, 'System takeover and data breaches')

    def test_unmapped_title(self):
        with self.assertRaises(MitigationLookupError):
            mitigation_for('Denial of Service Against Toll Gantry')


class RenderFindingsTests(SimpleTestCase):

    def test_csv(self):
        lines = render_findings(analyze(bundled_etc_model()), 'csv').splitlines()
        self.assertEqual(lines[0], 'title,category,interaction,priority,mitigation')
        self.assertTrue(lines[1].startswith(f'{RPE} {RCE},Elevation of Privilege,Wired,High,'))

    def test_json_carries_rule_ids(self):
        data = json.loads(render_findings(analyze(bundled_etc_model()), 'json'))
        self.assertEqual(data[0]['rule_id'], 'R1')
        self.assertIn('quantum_attack', data[0])

    def test_empty(self):
        self.assertEqual(render_findings([], 'csv'), 'title,category,interaction,priority,mitigation\n')
