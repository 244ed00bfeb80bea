# channel/handshake.py
import logging
from dataclasses import dataclass

from django.db import models
from django.utils.translation import gettext_lazy as _

from kem.mlkem import ENCAPS_SEED_BYTES, KEYGEN_SEED_BYTES, coerce_ciphertext, decaps, encaps, keygen
from kem.params import coerce_variant, params_for
from pqcpslab.exceptions import AuthenticationError, InputError, ProtocolError
from pqcpslab.seeding import derive_bytes

from .session import Role, Session
from .wire import MessageKind, WireMessage

logger = logging.getLogger(__name__)


class Phase(models.TextChoices):
    AWAITING_PEER = 'awaiting_peer', 'Awaiting Peer'
    ESTABLISHED = 'established', 'Established'


class HandshakeState:
    """Key holder's state between sending its public key and receiving the ciphertext"""

    def __init__(self, variant, key_pair):
        self.role = Role.KEY_HOLDER
        self.variant = variant
        self.phase = Phase.AWAITING_PEER
        self._secret_key = bytearray(key_pair.secret_key)

    def __repr__(self):
        return f"HandshakeState(role={self.role.value!r}, variant={self.variant!r}, phase={self.phase.value!r})"

    def _finish(self):
        for i in range(len(self._secret_key)):
            self._secret_key[i] = 0
        self._secret_key = None
        self.phase = Phase.ESTABLISHED


def _expect(message, kind, length, variant):
    if not isinstance(message, WireMessage) or message.kind != kind:
        raise ProtocolError(_("Expected a {kind} message.").format(kind=MessageKind(kind).label))
    if message.size_bytes != length:
        raise ProtocolError(
            _("{kind} payload for {variant} must be {expected} bytes, got {actual}.").format(
                kind=MessageKind(kind).label, variant=params_for(variant).label,
                expected=length, actual=message.size_bytes,
            )
        )


# ==================== PROTOCOL STEPS ====================

def initiate(variant, seed):
    """Key holder: generate a key pair and publish the public key"""
    variant = coerce_variant(variant)
    key_pair = keygen(variant, seed)
    state = HandshakeState(variant, key_pair)
    return state, WireMessage(kind=MessageKind.PUBLIC_KEY, payload=key_pair.public_key)


def respond(variant, message, seed):
    """Encapsulator: encapsulate to the received key; session is established at once"""
    variant = coerce_variant(variant)
    params = params_for(variant)
    _expect(message, MessageKind.PUBLIC_KEY, params.pk_len, variant)
    try:
        ciphertext, shared = encaps(message.payload, variant, seed)
    except InputError as e:
        if len(seed) != ENCAPS_SEED_BYTES:
            raise
        raise ProtocolError(_("Public key rejected: {error}").format(error=str(e)))
    session = Session(bytes(shared), Role.ENCAPSULATOR, variant)
    shared.wipe()
    return session, WireMessage(kind=MessageKind.CIPHERTEXT, payload=ciphertext.data)


def complete(state, message):
    """Key holder: decapsulate and drop the secret key"""
    if state.phase != Phase.AWAITING_PEER:
        raise ProtocolError(_("Handshake is already established."))
    if state.role != Role.KEY_HOLDER:
        raise ProtocolError(_("Only the key holder completes a handshake."))
    _expect(message, MessageKind.CIPHERTEXT, params_for(state.variant).ct_len, state.variant)

    shared = decaps(bytes(state._secret_key), coerce_ciphertext(message.payload, state.variant))
    state._finish()
    session = Session(bytes(shared), Role.KEY_HOLDER, state.variant)
    shared.wipe()
    return session


# ==================== FULL TRANSCRIPT ====================

@dataclass(frozen=True)
class HandshakeTranscript:
    """Sizes and outcome of one two-party exchange; carries no key material"""
    variant: str
    public_key_bytes: int
    ciphertext_bytes: int
    encrypted_data_bytes: int
    plaintext_bytes: int
    keys_agree: bool
    data_authenticated: bool
    tampered: bool = False


def run_handshake(variant, seed, data_message_bytes=32, tamper=False):
    """Drive both roles and exchange one data message in each direction.

    With ``tamper`` set, one ciphertext bit is flipped in transit: the
    handshake still completes but the first data message fails to open.
    """
    variant = coerce_variant(variant)
    if data_message_bytes < 0:
        raise InputError(_("Data message size cannot be negative, got {size}.").format(size=data_message_bytes))
    state, pk_message = initiate(variant, derive_bytes(seed, 'keygen', KEYGEN_SEED_BYTES))
    responder, ct_message = respond(variant, pk_message, derive_bytes(seed, 'encaps', ENCAPS_SEED_BYTES))
    if tamper:
        corrupted = bytearray(ct_message.payload)
        corrupted[0] ^= 0x01
        ct_message = WireMessage(kind=MessageKind.CIPHERTEXT, payload=bytes(corrupted))
    holder = complete(state, ct_message)

    outbound = derive_bytes(seed, 'data:key_holder', data_message_bytes)
    inbound = derive_bytes(seed, 'data:encapsulator', data_message_bytes)
    authenticated = True
    sealed = holder.seal(outbound)
    try:
        authenticated = responder.open(sealed) == outbound
        reply = responder.seal(inbound)
        authenticated = authenticated and holder.open(reply) == inbound
    except AuthenticationError:
        authenticated = False

    transcript = HandshakeTranscript(
        variant=variant,
        public_key_bytes=pk_message.size_bytes,
        ciphertext_bytes=ct_message.size_bytes,
        encrypted_data_bytes=sealed.size_bytes,
        plaintext_bytes=data_message_bytes,
        keys_agree=holder.same_key_as(responder),
        data_authenticated=authenticated,
        tampered=tamper,
    )
    holder.close()
    responder.close()
    logger.info(
        f"Handshake {variant}: pk={transcript.public_key_bytes} ct={transcript.ciphertext_bytes} "
        f"data={transcript.encrypted_data_bytes} agree={transcript.keys_agree}"
    )
    return transcript
