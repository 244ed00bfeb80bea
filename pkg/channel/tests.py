# channel/tests.py
import logging
import random

from django.conf import settings
from django.test import SimpleTestCase

from kem.params import KemVariant
from pqcpslab.exceptions import AuthenticationError, InputError, ProtocolError, ReplayError, SessionError

from . import session as session_module
from .handshake import Phase, complete, initiate, respond, run_handshake
from .serializers import HandshakeTranscriptSerializer
from .session import Role, Session, seal
from .wire import MessageKind, WireMessage


def _rng_bytes(rng, n):
    return bytes(rng.getrandbits(8) for _ in range(n))


def _handshake(variant='kyber512', rng=None):
    rng = rng or random.Random(0)
    state, pk_msg = initiate(variant, _rng_bytes(rng, 64))
    responder, ct_msg = respond(variant, pk_msg, _rng_bytes(rng, 32))
    holder = complete(state, ct_msg)
    return holder, responder


# ==================== WIRE FORMAT ====================

class WireTests(SimpleTestCase):

    def test_frame_layout(self):
        frame = WireMessage(MessageKind.CIPHERTEXT, b'\x01\x02\x03').to_frame()
        self.assertEqual(frame, b'\x02\x00\x00\x00\x03\x01\x02\x03')
        self.assertEqual(WireMessage.from_frame(frame).kind, MessageKind.CIPHERTEXT)

    def test_malformed_frames(self):
        with self.assertRaises(ProtocolError):
            WireMessage.from_frame(b'\x01\x00')
        with self.assertRaises(ProtocolError):
            WireMessage.from_frame(b'\x09\x00\x00\x00\x00')
        with self.assertRaises(ProtocolError):
            WireMessage.from_frame(b'\x01\x00\x00\x00\x05abc')

    def test_repr_hides_payload(self):
        message = WireMessage(MessageKind.PUBLIC_KEY, b'\xde\xad' * 10)
        self.assertNotIn('dead', repr(message))
        self.assertIn('size_bytes=20', repr(message))


# ==================== HANDSHAKE ====================

class HandshakeTests(SimpleTestCase):

    def test_public_key_message_sizes(self):
        self.assertEqual(initiate('kyber512', bytes(64))[1].size_bytes, 800)
        self.assertEqual(initiate('kyber1024', bytes(64))[1].size_bytes, 1568)

    def test_initiate_deterministic(self):
        self.assertEqual(initiate('kyber768', bytes(64))[1], initiate('kyber768', bytes(64))[1])

    def test_initiate_seed_validation(self):
        with self.assertRaises(InputError):
            initiate('kyber512', bytes(10))

    def test_respond_ciphertext_size(self):
        _state, pk_msg = initiate('kyber512', bytes(64))
        session, ct_msg = respond('kyber512', pk_msg, bytes(32))
        self.assertEqual(ct_msg.size_bytes, 768)
        self.assertEqual(session.role, Role.ENCAPSULATOR)

    def test_truncated_public_key(self):
        _state, pk_msg = initiate('kyber512', bytes(64))
        with self.assertRaises(ProtocolError):
            respond('kyber512', WireMessage(MessageKind.PUBLIC_KEY, pk_msg.payload[:-1]), bytes(32))

    def test_wrong_kind_rejected(self):
        state, pk_msg = initiate('kyber512', bytes(64))
        with self.assertRaises(ProtocolError):
            respond('kyber512', WireMessage(MessageKind.CIPHERTEXT, pk_msg.payload), bytes(32))
        with self.assertRaises(ProtocolError):
            complete(state, WireMessage(MessageKind.PUBLIC_KEY, bytes(768)))

    def test_keys_agree_for_every_variant(self):
        trials = getattr(settings, 'PQCPSLAB_ROUNDTRIP_TRIALS', 25)
        rng = random.Random(11)
        for variant in KemVariant.values:
            for _ in range(trials):
                holder, responder = _handshake(variant, rng)
                self.assertTrue(holder.same_key_as(responder))
                message = _rng_bytes(rng, 32)
                self.assertEqual(responder.open(holder.seal(message)), message)

    def test_complete_twice(self):
        state, pk_msg = initiate('kyber512', bytes(64))
        _session, ct_msg = respond('kyber512', pk_msg, bytes(32))
        complete(state, ct_msg)
        self.assertEqual(state.phase, Phase.ESTABLISHED)
        with self.assertRaises(ProtocolError):
            complete(state, ct_msg)

    def test_complete_wrong_length(self):
        state, _pk_msg = initiate('kyber768', bytes(64))
        with self.assertRaises(ProtocolError):
            complete(state, WireMessage(MessageKind.CIPHERTEXT, bytes(768)))
        self.assertEqual(state.phase, Phase.AWAITING_PEER)

    def test_tampered_ciphertext_detected_at_first_data_message(self):
        rng = random.Random(12)
        for variant in KemVariant.values:
            for _ in range(10):
                state, pk_msg = initiate(variant, _rng_bytes(rng, 64))
                responder, ct_msg = respond(variant, pk_msg, _rng_bytes(rng, 32))
                payload = bytearray(ct_msg.payload)
                payload[rng.randrange(len(payload))] ^= 1 << rng.randrange(8)
                holder = complete(state, WireMessage(MessageKind.CIPHERTEXT, bytes(payload)))
                self.assertFalse(holder.same_key_as(responder))
                with self.assertRaises(AuthenticationError):
                    responder.open(holder.seal(b'x' * 32))


# ==================== SESSION ====================

class SessionTests(SimpleTestCase):

    def setUp(self):
        self.holder, self.responder = _handshake()

    def test_encrypted_size_law(self):
        self.assertEqual(self.holder.seal(bytes(32)).size_bytes, 56)
        self.assertEqual(self.holder.seal(b'').size_bytes, 24)

    def test_counters_advance(self):
        seal(self.holder, b'a')
        seal(self.holder, b'b')
        self.assertEqual(self.holder.send_counter, 2)

    def test_same_plaintext_gives_different_wire_bytes(self):
        self.assertNotEqual(self.holder.seal(b'same').payload, self.holder.seal(b'same').payload)

    def test_round_trip_both_directions(self):
        self.assertEqual(session_module.open(self.responder, self.holder.seal(b'ping')), b'ping')
        self.assertEqual(session_module.open(self.holder, self.responder.seal(b'pong')), b'pong')

    def test_replay_rejected(self):
        message = self.holder.seal(b'once')
        self.responder.open(message)
        with self.assertRaises(ReplayError):
            self.responder.open(message)

    def test_older_counter_rejected(self):
        first = self.holder.seal(b'1')
        second = self.holder.seal(b'2')
        self.responder.open(second)
        with self.assertRaises(ReplayError):
            self.responder.open(first)

    def test_byte_flip_fuzz(self):
        rng = random.Random(13)
        message = self.holder.seal(bytes(32))
        for index in rng.sample(range(message.size_bytes), min(100, message.size_bytes)):
            payload = bytearray(message.payload)
            payload[index] ^= 1 << rng.randrange(8)
            with self.assertRaises((AuthenticationError, ReplayError)):
                self.responder.open(WireMessage(MessageKind.ENCRYPTED_DATA, bytes(payload)))
        self.assertIsNone(self.responder.recv_counter)
        self.assertEqual(self.responder.open(message), bytes(32))

    def test_reflected_message_fails(self):
        message = self.holder.seal(b'loop')
        with self.assertRaises(AuthenticationError):
            self.holder.open(message)

    def test_counter_exhaustion(self):
        self.holder.send_counter = session_module.MAX_COUNTER
        with self.assertRaises(SessionError):
            self.holder.seal(b'x')

    def test_closed_session(self):
        self.holder.close()
        with self.assertRaises(SessionError):
            self.holder.seal(b'x')

    def test_bad_key_length(self):
        with self.assertRaises(SessionError):
            Session(bytes(16), Role.KEY_HOLDER, 'kyber512')

    def test_short_encrypted_message(self):
        with self.assertRaises(ProtocolError):
            self.responder.open(WireMessage(MessageKind.ENCRYPTED_DATA, bytes(10)))


# ==================== TRANSCRIPT ====================

class TranscriptTests(SimpleTestCase):

    def test_honest_transcript(self):
        transcript = run_handshake('kyber768', 42)
        self.assertEqual(
            (transcript.public_key_bytes, transcript.ciphertext_bytes, transcript.encrypted_data_bytes),
            (1184, 1088, 56),
        )
        self.assertTrue(transcript.keys_agree)
        self.assertTrue(transcript.data_authenticated)

    def test_tampered_transcript(self):
        transcript = run_handshake('kyber512', 42, tamper=True)
        self.assertFalse(transcript.keys_agree)
        self.assertFalse(transcript.data_authenticated)

    def test_deterministic(self):
        self.assertEqual(run_handshake('kyber512', 7), run_handshake('kyber512', 7))

    def test_empty_and_negative_data_messages(self):
        self.assertEqual(run_handshake('kyber512', 7, data_message_bytes=0).encrypted_data_bytes, 24)
        with self.assertRaises(InputError):
            run_handshake('kyber512', 7, data_message_bytes=-1)

    def test_report_and_logs_carry_no_key_material(self):
        with self.assertLogs('channel', level=logging.INFO) as logs:
            transcript = run_handshake('kyber512', 99)
        data = HandshakeTranscriptSerializer(transcript).data
        self.assertEqual(data['scheme'], 'Kyber-512')
        self.assertEqual(
            set(data),
            {'scheme', 'variant', 'public_key_bytes', 'ciphertext_bytes', 'encrypted_data_bytes',
             'plaintext_bytes', 'keys_agree', 'data_authenticated', 'tampered'},
        )
        for line in logs.output:
            self.assertNotRegex(line, r'[0-9a-f]{32}')
