# kem/polynomials.py
"""Arithmetic over Z_q[X]/(X^256 + 1) for ML-KEM.

Polynomials are plain lists of 256 ints in [0, q). The NTT domain
holds 128 degree-one residues, evaluated at the odd powers of 17.
"""
import hashlib

Q = 3329
N = 256

# 128^-1 mod q
_N_INV = 3303


def _bitrev7(value):
    result = 0
    for _ in range(7):
        result = (result << 1) | (value & 1)
        value >>= 1
    return result


# 17 is a primitive 256th root of unity mod 3329
ZETAS = [pow(17, _bitrev7(i), Q) for i in range(128)]
GAMMAS = [pow(17, 2 * _bitrev7(i) + 1, Q) for i in range(128)]


# ==================== TRANSFORMS ====================

def ntt(poly):
    """Forward number-theoretic transform (returns a new list)"""
    f = list(poly)
    i = 1
    length = 128
    while length >= 2:
        for start in range(0, N, 2 * length):
            zeta = ZETAS[i]
            i += 1
            for j in range(start, start + length):
                t = zeta * f[j + length] % Q
                f[j + length] = (f[j] - t) % Q
                f[j] = (f[j] + t) % Q
        length >>= 1
    return f


def ntt_inv(poly):
    """Inverse transform, including the 128^-1 scaling"""
    f = list(poly)
    i = 127
    length = 2
    while length <= 128:
        for start in range(0, N, 2 * length):
            zeta = ZETAS[i]
            i -= 1
            for j in range(start, start + length):
                t = f[j]
                f[j] = (t + f[j + length]) % Q
                f[j + length] = zeta * (f[j + length] - t) % Q
        length <<= 1
    return [x * _N_INV % Q for x in f]


def multiply_ntts(f, g):
    """Pointwise product in the NTT domain (128 base-case multiplications)"""
    h = [0] * N
    for i in range(128):
        a0, a1 = f[2 * i], f[2 * i + 1]
        b0, b1 = g[2 * i], g[2 * i + 1]
        h[2 * i] = (a0 * b0 + a1 * b1 % Q * GAMMAS[i]) % Q
        h[2 * i + 1] = (a0 * b1 + a1 * b0) % Q
    return h


def poly_add(f, g):
    return [(a + b) % Q for a, b in zip(f, g)]


def poly_sub(f, g):
    return [(a - b) % Q for a, b in zip(f, g)]


def inner_product_ntt(row, vector):
    """Sum of pointwise products of two NTT-domain vectors"""
    acc = [0] * N
    for f, g in zip(row, vector):
        acc = poly_add(acc, multiply_ntts(f, g))
    return acc


# ==================== ENCODING ====================

def byte_encode(poly, d):
    """Pack 256 d-bit integers little-endian"""
    acc = 0
    shift = 0
    for coeff in poly:
        acc |= coeff << shift
        shift += d
    return acc.to_bytes(32 * d, 'little')


def byte_decode(data, d):
    """Unpack 256 d-bit integers; 12-bit values are reduced mod q"""
    if len(data) != 32 * d:
        raise ValueError(f"byte_decode_{d}: expected {32 * d} bytes, got {len(data)}")
    acc = int.from_bytes(data, 'little')
    mask = (1 << d) - 1
    out = []
    for _ in range(N):
        out.append(acc & mask)
        acc >>= d
    if d == 12:
        out = [c % Q for c in out]
    return out


def compress(poly, d):
    mask = (1 << d) - 1
    return [((c << d) + Q // 2) // Q & mask for c in poly]


def decompress(poly, d):
    half = 1 << (d - 1)
    return [(c * Q + half) >> d for c in poly]


# ==================== SAMPLING ====================

def sample_ntt(rho, i, j):
    """Rejection-sample a uniform NTT-domain polynomial from SHAKE-128(rho || j || i)"""
    seed = rho + bytes([j, i])
    length = 840
    stream = hashlib.shake_128(seed).digest(length)
    coeffs = []
    pos = 0
    while len(coeffs) < N:
        if pos + 3 > len(stream):
            length += 168
            stream = hashlib.shake_128(seed).digest(length)
        d1 = stream[pos] | ((stream[pos + 1] & 0x0F) << 8)
        d2 = (stream[pos + 1] >> 4) | (stream[pos + 2] << 4)
        pos += 3
        if d1 < Q:
            coeffs.append(d1)
        if d2 < Q and len(coeffs) < N:
            coeffs.append(d2)
    return coeffs


def sample_cbd(data, eta):
    """Centered binomial distribution from 64*eta bytes"""
    if len(data) != 64 * eta:
        raise ValueError(f"sample_cbd: expected {64 * eta} bytes, got {len(data)}")
    stream = int.from_bytes(data, 'little')
    half_mask = (1 << eta) - 1
    out = []
    for _ in range(N):
        x = (stream & half_mask).bit_count()
        stream >>= eta
        y = (stream & half_mask).bit_count()
        stream >>= eta
        out.append((x - y) % Q)
    return out


def prf(eta, seed, nonce):
    return hashlib.shake_256(seed + bytes([nonce])).digest(64 * eta)
