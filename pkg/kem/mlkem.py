# kem/mlkem.py
"""ML-KEM key generation, encapsulation and decapsulation.

The inner public-key scheme (K-PKE) is wrapped in the Fujisaki-Okamoto
transform with implicit rejection, so decapsulating a tampered ciphertext
yields a pseudorandom secret instead of an error.
"""
import hashlib
import hmac
from dataclasses import dataclass, field

from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import InputError

from . import polynomials as poly
from .params import coerce_variant, params_for

KEYGEN_SEED_BYTES = 64
ENCAPS_SEED_BYTES = 32


def _h(data):
    return hashlib.sha3_256(data).digest()


def _g(data):
    digest = hashlib.sha3_512(data).digest()
    return digest[:32], digest[32:]


def _j(data):
    return hashlib.shake_256(data).digest(32)


# ==================== KEY MATERIAL ====================

@dataclass(frozen=True)
class KeyPair:
    public_key: bytes
    secret_key: bytes = field(repr=False)
    variant: str

    def __post_init__(self):
        params = params_for(self.variant)
        if len(self.public_key) != params.pk_len or len(self.secret_key) != params.sk_len:
            raise InputError(_("Key lengths do not match {variant}.").format(variant=params.label))


@dataclass(frozen=True)
class Ciphertext:
    data: bytes
    variant: str

    def __post_init__(self):
        params = params_for(self.variant)
        if len(self.data) != params.ct_len:
            raise InputError(
                _("Ciphertext for {variant} must be {expected} bytes, got {actual}.").format(
                    variant=params.label, expected=params.ct_len, actual=len(self.data)
                )
            )

    def __len__(self):
        return len(self.data)


class SharedSecret:
    """32-byte KEM output; compared in constant time, wiped on disposal"""

    __slots__ = ('_buf',)
    __hash__ = None

    def __init__(self, data):
        if len(data) != 32:
            raise InputError(_("Shared secret must be 32 bytes."))
        self._buf = bytearray(data)

    def __bytes__(self):
        return bytes(self._buf)

    def __len__(self):
        return len(self._buf)

    def __eq__(self, other):
        if isinstance(other, SharedSecret):
            other = other._buf
        if not isinstance(other, (bytes, bytearray)):
            return NotImplemented
        return hmac.compare_digest(bytes(self._buf), bytes(other))

    def __repr__(self):
        return 'SharedSecret(<redacted>)'

    def wipe(self):
        for i in range(len(self._buf)):
            self._buf[i] = 0

    def __del__(self):
        if hasattr(self, '_buf'):
            self.wipe()


# ==================== K-PKE ====================

def _expand_matrix(rho, k, transpose=False):
    if transpose:
        return [[poly.sample_ntt(rho, j, i) for j in range(k)] for i in range(k)]
    return [[poly.sample_ntt(rho, i, j) for j in range(k)] for i in range(k)]


def _pke_keygen(params, d):
    k = params.k
    rho, sigma = _g(d + bytes([k]))
    a_hat = _expand_matrix(rho, k)
    nonce = 0
    s_hat = []
    for _ in range(k):
        s_hat.append(poly.ntt(poly.sample_cbd(poly.prf(params.eta1, sigma, nonce), params.eta1)))
        nonce += 1
    e_hat = []
    for _ in range(k):
        e_hat.append(poly.ntt(poly.sample_cbd(poly.prf(params.eta1, sigma, nonce), params.eta1)))
        nonce += 1
    t_hat = [poly.poly_add(poly.inner_product_ntt(a_hat[i], s_hat), e_hat[i]) for i in range(k)]
    ek = b''.join(poly.byte_encode(t, 12) for t in t_hat) + rho
    dk = b''.join(poly.byte_encode(s, 12) for s in s_hat)
    return ek, dk


def _pke_encrypt(params, ek, message, r):
    k = params.k
    t_hat = [poly.byte_decode(ek[384 * i:384 * (i + 1)], 12) for i in range(k)]
    rho = ek[384 * k:]
    a_hat_t = _expand_matrix(rho, k, transpose=True)
    nonce = 0
    y_hat = []
    for _ in range(k):
        y_hat.append(poly.ntt(poly.sample_cbd(poly.prf(params.eta1, r, nonce), params.eta1)))
        nonce += 1
    e1 = []
    for _ in range(k):
        e1.append(poly.sample_cbd(poly.prf(params.eta2, r, nonce), params.eta2))
        nonce += 1
    e2 = poly.sample_cbd(poly.prf(params.eta2, r, nonce), params.eta2)

    u = [poly.poly_add(poly.ntt_inv(poly.inner_product_ntt(a_hat_t[i], y_hat)), e1[i]) for i in range(k)]
    mu = poly.decompress(poly.byte_decode(message, 1), 1)
    v = poly.poly_add(poly.poly_add(poly.ntt_inv(poly.inner_product_ntt(t_hat, y_hat)), e2), mu)

    c1 = b''.join(poly.byte_encode(poly.compress(u_i, params.du), params.du) for u_i in u)
    c2 = poly.byte_encode(poly.compress(v, params.dv), params.dv)
    return c1 + c2


def _pke_decrypt(params, dk_pke, ct):
    k, du, dv = params.k, params.du, params.dv
    step = 32 * du
    u = [poly.decompress(poly.byte_decode(ct[step * i:step * (i + 1)], du), du) for i in range(k)]
    v = poly.decompress(poly.byte_decode(ct[step * k:], dv), dv)
    s_hat = [poly.byte_decode(dk_pke[384 * i:384 * (i + 1)], 12) for i in range(k)]
    w = poly.poly_sub(v, poly.ntt_inv(poly.inner_product_ntt(s_hat, [poly.ntt(u_i) for u_i in u])))
    return poly.byte_encode(poly.compress(w, 1), 1)


# ==================== INPUT CHECKS ====================

def _public_key_is_reduced(params, public_key):
    """Every 12-bit coefficient of t_hat must already lie in [0, q)"""
    t_part = public_key[:384 * params.k]
    canonical = b''.join(
        poly.byte_encode(poly.byte_decode(t_part[384 * i:384 * (i + 1)], 12), 12) for i in range(params.k)
    )
    return hmac.compare_digest(canonical, t_part)


def _split_secret_key(params, secret_key):
    k = params.k
    dk_pke = secret_key[:384 * k]
    ek = secret_key[384 * k:768 * k + 32]
    h = secret_key[768 * k + 32:768 * k + 64]
    z = secret_key[768 * k + 64:]
    return dk_pke, ek, h, z


# ==================== PUBLIC API ====================

def keygen(variant, seed):
    """Derive a key pair from 64 bytes of entropy (d || z)"""
    params = params_for(variant)
    if len(seed) != KEYGEN_SEED_BYTES:
        raise InputError(
            _("keygen requires a {expected}-byte seed, got {actual}.").format(expected=KEYGEN_SEED_BYTES, actual=len(seed))
        )
    d, z = bytes(seed[:32]), bytes(seed[32:])
    ek, dk_pke = _pke_keygen(params, d)
    secret_key = dk_pke + ek + _h(ek) + z
    return KeyPair(public_key=ek, secret_key=secret_key, variant=params.variant)


def encaps(public_key, variant, seed):
    """Encapsulate against ``public_key``; returns (Ciphertext, SharedSecret)"""
    params = params_for(variant)
    public_key = bytes(public_key)
    if len(public_key) != params.pk_len:
        raise InputError(
            _("{variant} public key must be {expected} bytes, got {actual}.").format(
                variant=params.label, expected=params.pk_len, actual=len(public_key)
            )
        )
    if len(seed) != ENCAPS_SEED_BYTES:
        raise InputError(
            _("encaps requires a {expected}-byte seed, got {actual}.").format(expected=ENCAPS_SEED_BYTES, actual=len(seed))
        )
    if not _public_key_is_reduced(params, public_key):
        raise InputError(_("Public key coefficients are not reduced modulo q."))

    message = bytes(seed)
    shared, r = _g(message + _h(public_key))
    ct = _pke_encrypt(params, public_key, message, r)
    return Ciphertext(data=ct, variant=params.variant), SharedSecret(shared)


def decaps(secret_key, ciphertext):
    """Recover the shared secret; tampered ciphertexts get the implicit-rejection value"""
    if not isinstance(ciphertext, Ciphertext):
        raise InputError(_("decaps expects a Ciphertext."))
    params = params_for(ciphertext.variant)
    secret_key = bytes(secret_key)
    if len(secret_key) != params.sk_len:
        raise InputError(
            _("{variant} secret key must be {expected} bytes, got {actual}.").format(
                variant=params.label, expected=params.sk_len, actual=len(secret_key)
            )
        )
    dk_pke, ek, h, z = _split_secret_key(params, secret_key)
    if not hmac.compare_digest(_h(ek), h):
        raise InputError(_("Secret key failed its embedded public-key hash check."))

    ct = ciphertext.data
    message = bytearray(_pke_decrypt(params, dk_pke, ct))
    candidate, r = _g(bytes(message) + h)
    rejection = _j(z + ct)
    try:
        reencrypted = _pke_encrypt(params, ek, bytes(message), r)
        accepted = hmac.compare_digest(reencrypted, ct)
        # mask is 0xFF on acceptance and 0x00 otherwise
        mask = -int(accepted) & 0xFF
        chosen = bytes((a & mask) | (b & ~mask & 0xFF) for a, b in zip(candidate, rejection))
        return SharedSecret(chosen)
    finally:
        for i in range(len(message)):
            message[i] = 0


def coerce_ciphertext(data, variant):
    """Wrap raw bytes received off the wire"""
    return Ciphertext(data=bytes(data), variant=coerce_variant(variant))
