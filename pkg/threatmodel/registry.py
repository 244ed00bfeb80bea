# threatmodel/registry.py
"""Static lookup tables: how quantum attacks affect classical schemes, and
the quantum attack, impact and mitigation behind each vulnerability class."""
import re
from dataclasses import dataclass

from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import MitigationLookupError

from .models import SchemeType

NO_LONGER_SECURE = 'No longer secure'


@dataclass(frozen=True)
class ImpactEntry:
    name: str
    scheme_type: str
    purpose: str
    impact: str

    @property
    def broken(self):
        return self.impact == NO_LONGER_SECURE


@dataclass(frozen=True)
class Mitigation:
    vulnerability: str
    quantum_attack: str
    impact: str
    mitigation: str


# ==================== QUANTUM IMPACT ====================

class ImpactRegistry:
    """Scheme name -> ImpactEntry, with aliases for concrete algorithm names"""

    def __init__(self, entries, aliases=None):
        self.entries = list(entries)
        self._lookup = {}
        for entry in self.entries:
            for part in [entry.name, *re.split(r',\s*', entry.name)]:
                self._lookup[_key(part)] = entry
        for alias, name in (aliases or {}).items():
            self._lookup[_key(alias)] = self._lookup[_key(name)]

    def __contains__(self, scheme):
        return scheme is not None and _key(scheme) in self._lookup

    def __iter__(self):
        return iter(self.entries)

    def get(self, scheme):
        if scheme not in self:
            raise MitigationLookupError(_("Scheme not in impact registry: {scheme}").format(scheme=scheme))
        return self._lookup[_key(scheme)]

    def is_broken(self, scheme):
        return scheme in self and self.get(scheme).broken

    def is_hash(self, scheme):
        return scheme in self and self.get(scheme).scheme_type == SchemeType.HASH_FUNCTION


def _key(name):
    text = str(name).lower()
    # drop parenthesised notes such as "(ECC)"
    text = re.sub(r'\(.*?\)', '', text)
    return ''.join(ch for ch in text if ch.isalnum())


IMPACT_REGISTRY = ImpactRegistry(
    [
        ImpactEntry('AES', SchemeType.SYMMETRIC_KEY, 'Encryption', 'Larger key sizes needed'),
        ImpactEntry('SHA-2, SHA-3', SchemeType.HASH_FUNCTION, 'Hashing', 'Longer output needed'),
        ImpactEntry('RSA', SchemeType.PUBLIC_KEY, 'Signatures, Key Establishment', NO_LONGER_SECURE),
        ImpactEntry('ECDSA, ECDH (ECC)', SchemeType.PUBLIC_KEY, 'Signatures, Key Exchange', NO_LONGER_SECURE),
        ImpactEntry('DSA (Finite Field Cryptography)', SchemeType.PUBLIC_KEY, 'Signatures, Key Exchange',
                    NO_LONGER_SECURE),
    ],
    aliases={
        'AES-128': 'AES', 'AES-192': 'AES', 'AES-256': 'AES',
        'SHA-224': 'SHA-2', 'SHA-256': 'SHA-2', 'SHA-384': 'SHA-2', 'SHA-512': 'SHA-2',
        'SHA3-256': 'SHA-3', 'SHA3-384': 'SHA-3', 'SHA3-512': 'SHA-3',
        'ECC': 'ECDSA', 'ECDHE': 'ECDH', 'Ed25519': 'ECDSA', 'X25519': 'ECDH',
        'RSA-2048': 'RSA', 'RSA-3072': 'RSA', 'DH': 'DSA',
    },
)


def impact_of(scheme):
    """Impact of a large quantum computer on ``scheme``"""
    return IMPACT_REGISTRY.get(scheme).impact


# ==================== MITIGATIONS ====================

WEAK_AUTHENTICATION = 'Weak Authentication Scheme'
COLLISION_ATTACKS = 'Collision Attacks'
REPLAY_ATTACKS = 'Replay Attacks'
IMPERSONATION = 'Elevation Using Impersonation'
EXECUTION_FLOW = 'Elevation by Changing Execution Flow'

MITIGATIONS = {
    WEAK_AUTHENTICATION: Mitigation(
        WEAK_AUTHENTICATION,
        'Shor’s algorithm can efficiently factorize large integers and solve discrete logarithms, '
        'breaking RSA and ECC.',
        'Unauthorized access and breached confidentiality',
        'Use PQC algorithms, such as CRYSTALS-Kyber or Falcon',
    ),
    COLLISION_ATTACKS: Mitigation(
        COLLISION_ATTACKS,
        'Grover’s algorithm can find the pre-image of a hash function with a quadratic speedup, '
        'reducing the security level.',
        'Data tampering',
        'Use hash-based PQC algorithms like SPHINCS+',
    ),
    REPLAY_ATTACKS: Mitigation(
        REPLAY_ATTACKS,
        'With compromised cryptographic protocols, attackers can intercept and retransmit valid data packets.',
        'System manipulation, repeated transactions, and fraud',
        'Implement time-based protocols and secure communication channels with PQC',
    ),
    IMPERSONATION: Mitigation(
        IMPERSONATION,
        'Attackers can impersonate legitimate users or devices by breaking the underlying cryptographic keys.',
        'Unauthorized actions and security breaches',
        'Adopt lattice-based PQC schemes (i.e., CRYSTALS-Kyber)',
    ),
    EXECUTION_FLOW: Mitigation(
        EXECUTION_FLOW,
        'If the encryption used to secure communication is compromised, attackers can insert malicious code.',
        'System takeover and data breaches',
        'Secure communication with PQC algorithms and implement robust input validation and security checks '
        '(secure PQC coding practices)',
    ),
}

RCE_SUFFIX = 'May be Subject to Elevation of Privilege Using Remote Code Execution'
EXECUTION_FLOW_PREFIX = 'Elevation by Changing the Execution Flow in'


def rce_title(target):
    return f"{target} {RCE_SUFFIX}"


def execution_flow_title(target):
    return f"{EXECUTION_FLOW_PREFIX} {target}"


def vulnerability_class(title):
    """Collapse per-target elevation titles onto their vulnerability class"""
    text = ' '.join(str(title).split())
    lowered = text.lower()
    if lowered.endswith(RCE_SUFFIX.lower()) or lowered.startswith(EXECUTION_FLOW_PREFIX.lower()):
        return EXECUTION_FLOW
    for name in MITIGATIONS:
        if lowered == name.lower():
            return name
    raise MitigationLookupError(_("No mitigation recorded for: {title}").format(title=title))


def mitigation_for(title):
    return MITIGATIONS[vulnerability_class(title)]
