# kem/kat.py
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from django.utils.translation import gettext_lazy as _

from pqcpslab.base_serializers import validated_or_raise
from pqcpslab.exceptions import InputError

from .serializers import KatDecapsSerializer, KatEncapsSerializer, KatKeygenSerializer, KatVectorSerializer

logger = logging.getLogger(__name__)


class KatOp:
    CHAIN = 'chain'
    KEYGEN = 'keygen'
    ENCAPS = 'encaps'
    DECAPS = 'decaps'


# untagged lines are chained records
KAT_FIELDS = ('seed_keygen', 'seed_encaps', 'pk', 'sk', 'ct', 'ss')

RECORD_FORMATS = {
    KatOp.CHAIN: (KAT_FIELDS, KatVectorSerializer),
    KatOp.KEYGEN: (('d', 'z', 'ek', 'dk'), KatKeygenSerializer),
    KatOp.ENCAPS: (('ek', 'm', 'c', 'k'), KatEncapsSerializer),
    KatOp.DECAPS: (('dk', 'c', 'k'), KatDecapsSerializer),
}

_SEPARATOR = re.compile(r'[,\s]+')


@dataclass(frozen=True)
class KatVector:
    variant: str
    line: int
    op: str = KatOp.CHAIN
    seed_keygen: bytes = field(default=None, repr=False)
    seed_encaps: bytes = field(default=None, repr=False)
    pk: bytes = field(default=None, repr=False)
    sk: bytes = field(default=None, repr=False)
    ct: bytes = field(default=None, repr=False)
    ss: bytes = field(default=None, repr=False)


def parse_kat_line(text, line_number):
    """Parse one record; returns None for blank and comment lines"""
    text = text.strip()
    if not text or text.startswith('#'):
        return None
    parts = [p for p in _SEPARATOR.split(text) if p]
    op = parts[0].lower() if parts[0].lower() in RECORD_FORMATS else KatOp.CHAIN
    if op != KatOp.CHAIN:
        parts = parts[1:]
    names, serializer_class = RECORD_FORMATS[op]
    if len(parts) != len(names):
        raise InputError(
            _("KAT line {line}: {op} record expects {expected} fields, got {actual}.").format(
                line=line_number, op=op, expected=len(names), actual=len(parts)
            )
        )
    serializer = serializer_class(data=dict(zip(names, parts)))
    try:
        data = validated_or_raise(serializer, InputError)
    except InputError as e:
        raise InputError(_("KAT line {line}: {error}").format(line=line_number, error=str(e)))
    return KatVector(line=line_number, op=op, **data)


def load_kat_file(path):
    """Read every known-answer record in ``path``"""
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise InputError(_("Cannot read KAT file {path}: {error}").format(path=path, error=str(e)))

    vectors = []
    for number, text in enumerate(lines, start=1):
        vector = parse_kat_line(text, number)
        if vector is not None:
            vectors.append(vector)
    logger.info(f"Loaded {len(vectors)} KAT vectors from {path.name}")
    return vectors


def discover_kat_files(directory):
    directory = Path(directory)
    if not directory.is_dir():
        return []
    return sorted(directory.glob('*.kat'))
