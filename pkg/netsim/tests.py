# netsim/tests.py
import heapq
import json
import math

from django.test import SimpleTestCase, override_settings

from channel.wire import MessageKind
from pqcpslab.exceptions import ConfigurationError, InputError

from .costs import CryptoCostModel
from .engine import EventAction, ScriptOp, ScriptStep, SimEvent, handshake_script, run
from .links import LinkModel, Medium, link_delay, wired_default, wireless_default
from .mobility import LinearWaypoint, Position, Static, distance_at, position_at


# ==================== MOBILITY ====================

class MobilityTests(SimpleTestCase):

    def test_static_node(self):
        self.assertEqual(position_at(Static((955, 955)), 37), Position(955, 955))

    def test_waypoint_along_diagonal(self):
        node = LinearWaypoint(1910, 40, rng_seed=1, start=(0, 0), waypoints=[(1910, 1910)])
        pos = position_at(node, 10)
        self.assertAlmostEqual(pos.x, 282.84, places=2)
        self.assertAlmostEqual(pos.y, 282.84, places=2)

    def test_corner_to_center_distance(self):
        self.assertAlmostEqual(distance_at(Static((0, 0)), Static((955, 955)), 0), 1350.57, places=2)
        self.assertEqual(distance_at(Static((3, 4)), Static((3, 4)), 5), 0)

    def test_negative_time(self):
        with self.assertRaises(InputError):
            position_at(Static((0, 0)), -1)

    def test_non_finite_position(self):
        with self.assertRaises(InputError):
            Position(float('nan'), 0)

    def test_invalid_waypoint_model(self):
        with self.assertRaises(InputError):
            LinearWaypoint(955, 0, rng_seed=1)
        with self.assertRaises(InputError):
            LinearWaypoint(955, 40, rng_seed=1, start=(1000, 0))

    def test_waypoint_deterministic_in_seed(self):
        a = LinearWaypoint(955, 40, rng_seed=9)
        b = LinearWaypoint(955, 40, rng_seed=9)
        for t in (0, 3.5, 40, 400):
            self.assertEqual(position_at(a, t), position_at(b, t))
        self.assertNotEqual(position_at(LinearWaypoint(955, 40, rng_seed=10), 0), position_at(a, 0))

    def test_waypoint_stays_in_box_at_constant_speed(self):
        node = LinearWaypoint(955, 40, rng_seed=3)
        dt = 0.25
        for step in range(2000):
            t = step * dt
            here = position_at(node, t)
            self.assertTrue(here.inside(955))
            if node.leg_at(t) is node.leg_at(t + dt) and t > node.leg_at(t).t_start:
                travelled = here.distance_to(position_at(node, t + dt))
                self.assertAlmostEqual(travelled / dt, 40, delta=1e-6)

    def test_waypoint_continuous(self):
        node = LinearWaypoint(1910, 40, rng_seed=4)
        for t in (12.0, 55.5, 130.25):
            self.assertLess(position_at(node, t).distance_to(position_at(node, t + 1e-3)), 40 * 1e-3 + 1e-6)


# ==================== LINKS ====================

class LinkDelayTests(SimpleTestCase):

    def test_wired_public_key(self):
        self.assertAlmostEqual(link_delay(wired_default(), 800, 1350), 5.004, places=6)

    def test_wireless_public_key(self):
        self.assertAlmostEqual(link_delay(wireless_default(), 800, 1350), 1123.0185, places=3)

    def test_zero_everything(self):
        link = LinkModel(Medium.WIRED, 1e9, 3e8, 0.0)
        self.assertEqual(link_delay(link, 0, 0), 0)

    def test_monotone_in_size_and_distance(self):
        for link in (wired_default(), wireless_default()):
            sizes = [link_delay(link, s, 500) for s in range(0, 2000, 97)]
            self.assertEqual(sizes, sorted(sizes))
            distances = [link_delay(link, 800, d) for d in range(0, 1400, 50)]
            self.assertEqual(distances, sorted(distances))

    def test_wireless_slower_than_wired(self):
        for size in (0, 56, 768, 800, 1568):
            for distance in (0, 100, 955, 1350):
                self.assertGreater(
                    link_delay(wireless_default(), size, distance),
                    link_delay(wired_default(), size, distance),
                )

    def test_per_kind_overhead(self):
        link = wireless_default(overhead_by_kind={MessageKind.CIPHERTEXT: 2000.0})
        self.assertAlmostEqual(link_delay(link, 0, 0, MessageKind.CIPHERTEXT), 2000.0)
        self.assertAlmostEqual(link_delay(link, 0, 0, MessageKind.PUBLIC_KEY), 1000.0)

    def test_moving_endpoints_add_overhead(self):
        link = wireless_default()
        still = link_delay(link, 800, 1350)
        self.assertAlmostEqual(link_delay(link, 800, 1350, moving_endpoints=2) - still, 6.22)
        # two moving nodes at zero range still cost more than two static ones at full range
        self.assertGreater(link_delay(link, 800, 0, moving_endpoints=2), still)
        self.assertEqual(link_delay(wired_default(), 800, 1350, moving_endpoints=2), link_delay(wired_default(), 800, 1350))

    def test_fragmentation_adds_headers(self):
        link = LinkModel(Medium.WIRED, 8e6, 3e8, 0.0, mtu_bytes=500, header_bytes=20)
        # 1200 bytes -> 3 fragments -> 1260 bytes on the wire at 1 byte/us
        self.assertAlmostEqual(link_delay(link, 1200, 0), 1260.0)

    def test_invalid_links(self):
        with self.assertRaises(InputError):
            LinkModel(Medium.WIRED, 0, 3e8, 0.0)
        with self.assertRaises(InputError):
            LinkModel(Medium.WIRED, 1e9, 3e8, -1.0)
        with self.assertRaises(InputError):
            link_delay(wired_default(), -1, 0)

    @override_settings(PQCPSLAB_WIRED_OVERHEAD_US=0.0)
    def test_presets_read_settings(self):
        self.assertAlmostEqual(link_delay(wired_default(), 0, 0), 0.0)


# ==================== ENGINE ====================

class EngineTests(SimpleTestCase):

    def setUp(self):
        self.mobilities = {'A': Static((0, 0)), 'B': Static((1350, 0))}
        self.crypto = CryptoCostModel.injected()

    def test_empty_script(self):
        self.assertEqual(len(run([], wired_default(), self.mobilities, self.crypto)), 0)

    def test_event_tie_break_by_sequence(self):
        queue = []
        heapq.heappush(queue, SimEvent(5.0, 1, 'A', EventAction.STEP))
        heapq.heappush(queue, SimEvent(5.0, 0, 'B', EventAction.STEP))
        heapq.heappush(queue, SimEvent(1.0, 2, 'C', EventAction.STEP))
        self.assertEqual([heapq.heappop(queue).node for _ in range(3)], ['C', 'B', 'A'])

    def test_equal_time_steps_keep_script_order(self):
        script = [
            ScriptStep('A', ScriptOp.SEND, MessageKind.PUBLIC_KEY, 0, peer='B'),
            ScriptStep('A', ScriptOp.SEND, MessageKind.CIPHERTEXT, 0, peer='B'),
        ]
        link = LinkModel(Medium.WIRED, 1e9, 3e8, 0.0)
        trace = run(script, link, {'A': Static((0, 0)), 'B': Static((0, 0))}, self.crypto)
        self.assertEqual([r.msg_kind for r in trace.deliveries()], [MessageKind.PUBLIC_KEY, MessageKind.CIPHERTEXT])

    def test_wired_kyber512_handshake_timeline(self):
        trace = run(handshake_script('kyber512', 'A', 'B'), wired_default(), self.mobilities, self.crypto)
        self.assertAlmostEqual(trace.finish_time(ScriptOp.DECAPS), 172.0, delta=0.01)
        pk = trace.deliveries(MessageKind.PUBLIC_KEY)[0]
        ct = trace.deliveries(MessageKind.CIPHERTEXT)[0]
        self.assertAlmostEqual(pk.delay_us, 5.004, places=6)
        self.assertAlmostEqual(ct.delay_us, 0.06144 + 4.5 + 0.44, places=6)
        self.assertEqual(pk.size_bytes, 800)
        self.assertEqual([d.size_bytes for d in trace.deliveries(MessageKind.ENCRYPTED_DATA)], [56, 56])

    def test_causality(self):
        trace = run(handshake_script('kyber768', 'A', 'B'), wireless_default(), self.mobilities, self.crypto)
        times = [r.time_us for r in trace]
        self.assertEqual(times, sorted(times))
        sends = [r for r in trace if r.action == ScriptOp.SEND]
        for send, delivery in zip(sends, trace.deliveries()):
            self.assertEqual(send.msg_kind, delivery.msg_kind)
            self.assertAlmostEqual(send.time_us + send.delay_us, delivery.time_us)
        self.assertGreater(trace.finish_time(ScriptOp.ENCAPS, 'B'), trace.deliveries(MessageKind.PUBLIC_KEY)[0].time_us)

    def test_deterministic_trace_export(self):
        mobilities = lambda: {'A': LinearWaypoint(955, 40, 1), 'B': LinearWaypoint(955, 40, 2)}
        first = run(handshake_script('kyber1024', 'A', 'B'), wireless_default(), mobilities(), self.crypto)
        second = run(handshake_script('kyber1024', 'A', 'B'), wireless_default(), mobilities(), self.crypto)
        self.assertEqual(first, second)
        self.assertEqual(first.to_ndjson(), second.to_ndjson())

    def test_ndjson_keys(self):
        trace = run(handshake_script('kyber512', 'A', 'B'), wired_default(), self.mobilities, self.crypto)
        lines = trace.to_ndjson().splitlines()
        self.assertEqual(len(lines), len(trace))
        record = json.loads(lines[0])
        self.assertEqual(list(record), ['time_us', 'node', 'action', 'msg_kind', 'size_bytes', 'delay_us'])
        self.assertEqual(record['action'], 'keygen')
        self.assertIsNone(record['msg_kind'])

    def test_unknown_node(self):
        with self.assertRaises(ConfigurationError):
            run(handshake_script('kyber512', 'A', 'C'), wired_default(), self.mobilities, self.crypto)

    def test_waiting_forever_is_a_configuration_error(self):
        with self.assertRaises(ConfigurationError):
            run([ScriptStep('B', ScriptOp.DECAPS, variant='kyber512')], wired_default(), self.mobilities, self.crypto)

    def test_crypto_costs(self):
        self.assertEqual(self.crypto.cost('kyber1024', 'decaps'), 147.0)
        self.assertEqual(self.crypto.cost('kyber512', 'seal'), 0.0)
        with self.assertRaises(ConfigurationError):
            CryptoCostModel('injected', {('kyber512', 'keygen'): -1.0})
        with self.assertRaises(ConfigurationError):
            self.crypto.cost('kyber512', 'sign')

    def test_measured_costs_are_positive(self):
        crypto = CryptoCostModel.measured(['kyber512'], iterations=1)
        self.assertGreater(crypto.cost('kyber512', 'keygen'), 0)
        self.assertTrue(math.isfinite(crypto.cost('kyber512', 'decaps')))
