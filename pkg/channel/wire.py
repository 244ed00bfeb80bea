# channel/wire.py
import struct
from dataclasses import dataclass

from django.db import models
from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import ProtocolError

# counter (8) + GCM tag (16)
ENCRYPTED_OVERHEAD_BYTES = 24
COUNTER_BYTES = 8
TAG_BYTES = 16

_HEADER = struct.Struct('>BI')


class MessageKind(models.TextChoices):
    PUBLIC_KEY = 'public_key', 'Public Key'
    CIPHERTEXT = 'ciphertext', 'Ciphertext'
    ENCRYPTED_DATA = 'encrypted_data', 'Encrypted Data'


KIND_TAGS = {
    MessageKind.PUBLIC_KEY: 1,
    MessageKind.CIPHERTEXT: 2,
    MessageKind.ENCRYPTED_DATA: 3,
}
_KINDS_BY_TAG = {tag: kind for kind, tag in KIND_TAGS.items()}


@dataclass(frozen=True)
class WireMessage:
    kind: str
    payload: bytes

    def __post_init__(self):
        if self.kind not in MessageKind.values:
            raise ProtocolError(_("Unknown message kind: {kind}").format(kind=self.kind))

    @property
    def size_bytes(self):
        return len(self.payload)

    def to_frame(self):
        """kind tag (1 byte) || payload length (4 bytes, big-endian) || payload"""
        return _HEADER.pack(KIND_TAGS[MessageKind(self.kind)], len(self.payload)) + self.payload

    @classmethod
    def from_frame(cls, frame):
        frame = bytes(frame)
        if len(frame) < _HEADER.size:
            raise ProtocolError(_("Frame shorter than its header."))
        tag, length = _HEADER.unpack_from(frame)
        if tag not in _KINDS_BY_TAG:
            raise ProtocolError(_("Unknown frame kind tag: {tag}").format(tag=tag))
        payload = frame[_HEADER.size:]
        if len(payload) != length:
            raise ProtocolError(
                _("Frame declares {expected} payload bytes but carries {actual}.").format(
                    expected=length, actual=len(payload)
                )
            )
        return cls(kind=_KINDS_BY_TAG[tag], payload=payload)

    def __repr__(self):
        return f"WireMessage(kind={self.kind!r}, size_bytes={self.size_bytes})"
