# kem/params.py
from dataclasses import dataclass

from django.db import models
from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import InputError


class KemVariant(models.TextChoices):
    """The three ML-KEM parameter sets"""
    KYBER512 = 'kyber512', 'Kyber-512'
    KYBER768 = 'kyber768', 'Kyber-768'
    KYBER1024 = 'kyber1024', 'Kyber-1024'


@dataclass(frozen=True)
class SecurityProfile:
    """Claimed security metadata; static data, never computed here"""
    nist_level: int
    core_svp_classical_bits: int
    core_svp_quantum_bits: int
    gate_count_log2: int
    memory_log2: int


@dataclass(frozen=True)
class KemParams:
    variant: str
    n: int
    k: int
    q: int
    eta1: int
    eta2: int
    du: int
    dv: int
    delta_log2: int
    pk_len: int
    sk_len: int
    ct_len: int
    security: SecurityProfile
    ss_len: int = 32

    @property
    def label(self):
        return KemVariant(self.variant).label


@dataclass(frozen=True)
class SecurityCategory:
    """One row of the NIST security strength category table"""
    level: int
    description: str
    resources: str


# ==================== PARAMETER SETS ====================

PARAMETER_SETS = {
    KemVariant.KYBER512: KemParams(
        variant=KemVariant.KYBER512, n=256, k=2, q=3329, eta1=3, eta2=2, du=10, dv=4,
        delta_log2=-139, pk_len=800, sk_len=1632, ct_len=768,
        security=SecurityProfile(
            nist_level=1, core_svp_classical_bits=118, core_svp_quantum_bits=107,
            gate_count_log2=151, memory_log2=94,
        ),
    ),
    KemVariant.KYBER768: KemParams(
        variant=KemVariant.KYBER768, n=256, k=3, q=3329, eta1=2, eta2=2, du=10, dv=4,
        delta_log2=-164, pk_len=1184, sk_len=2400, ct_len=1088,
        security=SecurityProfile(
            nist_level=3, core_svp_classical_bits=183, core_svp_quantum_bits=166,
            gate_count_log2=215, memory_log2=139,
        ),
    ),
    KemVariant.KYBER1024: KemParams(
        variant=KemVariant.KYBER1024, n=256, k=4, q=3329, eta1=2, eta2=2, du=11, dv=5,
        delta_log2=-174, pk_len=1568, sk_len=3168, ct_len=1568,
        security=SecurityProfile(
            # 232 from the claimed-security table; prose elsewhere quotes 236
            nist_level=5, core_svp_classical_bits=256, core_svp_quantum_bits=232,
            gate_count_log2=287, memory_log2=190,
        ),
    ),
}

SECURITY_CATEGORIES = {
    1: SecurityCategory(1, 'Equivalent to breaking AES-128', '2^170/MAXDEPTH quantum gates or 2^143 classical gates'),
    2: SecurityCategory(2, 'Equivalent to breaking SHA3-256', '2^146 classical gates'),
    3: SecurityCategory(3, 'Equivalent to breaking AES-192', '2^233/MAXDEPTH quantum gates or 2^207 classical gates'),
    4: SecurityCategory(4, 'Equivalent to breaking SHA3-384', '2^210 classical gates'),
    5: SecurityCategory(5, 'Equivalent to breaking AES-256', '2^298/MAXDEPTH quantum gates or 2^272 classical gates'),
}


def coerce_variant(value):
    """Accept a KemVariant, its value ('kyber512') or its label ('Kyber-512')"""
    if isinstance(value, KemVariant):
        return value
    text = str(value).strip().lower().replace('-', '').replace('_', '').replace('mlkem', 'kyber')
    aliases = {'kyber512': KemVariant.KYBER512, 'kyber768': KemVariant.KYBER768, 'kyber1024': KemVariant.KYBER1024}
    try:
        return aliases[text]
    except KeyError:
        raise InputError(_("Unknown KEM variant: {value}").format(value=value))


def params_for(variant):
    """Full constant record for a variant, security profile included"""
    return PARAMETER_SETS[coerce_variant(variant)]


def security_category(level):
    try:
        return SECURITY_CATEGORIES[int(level)]
    except (KeyError, TypeError, ValueError):
        raise InputError(_("Unknown security category: {level}").format(level=level))
