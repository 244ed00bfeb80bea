# channel/session.py
import hmac
import logging

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from django.db import models
from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import AuthenticationError, ProtocolError, ReplayError, SessionError

from .wire import COUNTER_BYTES, ENCRYPTED_OVERHEAD_BYTES, MessageKind, WireMessage

logger = logging.getLogger(__name__)

MAX_COUNTER = 2 ** 64 - 1


class Role(models.TextChoices):
    KEY_HOLDER = 'key_holder', 'Key Holder'
    ENCAPSULATOR = 'encapsulator', 'Encapsulator'


def _nonce(role, counter):
    # 4-byte role prefix || 8-byte big-endian counter
    prefix = 1 if role == Role.ENCAPSULATOR else 0
    return prefix.to_bytes(4, 'big') + counter.to_bytes(COUNTER_BYTES, 'big')


def _peer(role):
    return Role.KEY_HOLDER if role == Role.ENCAPSULATOR else Role.ENCAPSULATOR


class Session:
    """Established AES-256-GCM channel for one peer.

    The traffic key is the 32-byte KEM shared secret used directly.
    A session belongs to one owner at a time and is not thread-safe.
    """

    def __init__(self, traffic_key, role, variant):
        if len(traffic_key) != 32:
            raise SessionError(_("Traffic key must be 32 bytes."))
        self._key = bytearray(traffic_key)
        self.role = Role(role)
        self.variant = variant
        self.send_counter = 0
        # last accepted counter, None until the first message
        self.recv_counter = None

    def __repr__(self):
        return (
            f"Session(role={self.role.value!r}, variant={self.variant!r}, "
            f"send_counter={self.send_counter}, recv_counter={self.recv_counter})"
        )

    @property
    def is_open(self):
        return any(self._key)

    def same_key_as(self, other):
        """Constant-time key comparison between two sessions"""
        return hmac.compare_digest(bytes(self._key), bytes(other._key))

    def seal(self, plaintext):
        if not self.is_open:
            raise SessionError(_("Session is closed."))
        if self.send_counter >= MAX_COUNTER:
            raise SessionError(_("Send counter exhausted; the session must be replaced."))
        counter = self.send_counter
        header = counter.to_bytes(COUNTER_BYTES, 'big')
        sealed = AESGCM(bytes(self._key)).encrypt(_nonce(self.role, counter), bytes(plaintext), header)
        self.send_counter += 1
        return WireMessage(kind=MessageKind.ENCRYPTED_DATA, payload=header + sealed)

    def open(self, message):
        if not self.is_open:
            raise SessionError(_("Session is closed."))
        if message.kind != MessageKind.ENCRYPTED_DATA:
            raise ProtocolError(_("Expected an encrypted data message, got {kind}.").format(kind=message.kind))
        if message.size_bytes < ENCRYPTED_OVERHEAD_BYTES:
            raise ProtocolError(_("Encrypted data message is shorter than its overhead."))

        header = message.payload[:COUNTER_BYTES]
        counter = int.from_bytes(header, 'big')
        if self.recv_counter is not None and counter <= self.recv_counter:
            logger.warning(f"Rejected replayed counter {counter} (last accepted {self.recv_counter})")
            raise ReplayError(_("Counter {counter} is not fresh.").format(counter=counter))

        try:
            plaintext = AESGCM(bytes(self._key)).decrypt(
                _nonce(_peer(self.role), counter), message.payload[COUNTER_BYTES:], header
            )
        except InvalidTag:
            logger.warning(f"Authentication failed for {self.variant} message with counter {counter}")
            raise AuthenticationError(_("Message failed authentication."))
        self.recv_counter = counter
        return plaintext

    def close(self):
        """Zeroize the traffic key; the session is unusable afterwards"""
        for i in range(len(self._key)):
            self._key[i] = 0


def seal(session, plaintext):
    return session.seal(plaintext)


def open(session, message):  # noqa: A001
    return session.open(message)
