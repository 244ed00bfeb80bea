# pqcpslab/seeding.py
"""Derive per-run and per-role seeds from one master seed."""
import hashlib

from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import InputError


def derive_seed(master_seed, *labels):
    """Integer seed from SHA-256 of ``"master:label:..."``"""
    text = ':'.join(str(part) for part in (master_seed, *labels))
    return int.from_bytes(hashlib.sha256(text.encode('utf-8')).digest()[:8], 'big')


def derive_bytes(master_seed, label, length):
    """``length`` bytes of seed material for one named purpose"""
    if length < 0:
        raise InputError(_("Cannot derive {length} bytes for {label}.").format(length=length, label=label))
    text = f"{master_seed}:{label}"
    return hashlib.shake_256(text.encode('utf-8')).digest(length)
