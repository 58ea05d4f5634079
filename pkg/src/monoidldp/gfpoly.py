"""Arithmetic over small finite fields and enumeration of monic irreducibles.

Supports GF(q) for q in {2, 3, 4, 5, 7, 8, 9}. Prime-power fields are built
as F_p[x]/(m(x)) with a fixed irreducible modulus; field elements are encoded
as integers 0..q-1 via base-p coefficient digits, so tables are exhaustively
checkable. A monic polynomial of degree d over GF(q) is encoded by the
integer index of its d low coefficients in base q (the leading 1 is implicit)
and has norm q^d.

Irreducibles of degree n are found by sieving: every reducible monic P of
degree n factors as f*h with f a minimal-degree irreducible factor, so
deg f <= n/2, and marking f*h over all irreducible f and all monic h of the
complementary degree covers exactly the reducibles. For q = 2 polynomials
are bit masks and the products are carryless multiplies, done in bulk with
numpy. The count of monic irreducibles of degree n is (1/n) sum_{d|n}
mu(d) q^(n/d), which serves as an independent oracle.
"""
from __future__ import annotations

import functools

import numpy as np

from .errors import ParameterError

SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)

# modulus coefficients low -> high for the non-prime fields
_MODULI = {
    4: (2, (1, 1, 1)),      # x^2 + x + 1 over F_2
    8: (2, (1, 1, 0, 1)),   # x^3 + x + 1 over F_2
    9: (3, (1, 0, 1)),      # x^2 + 1 over F_3
}


class GF:
    """Table-driven finite field of order q."""

    def __init__(self, q: int, p: int, k: int, add, mul, inv):
        self.q = q
        self.p = p
        self.k = k
        self.add = add
        self.mul = mul
        self.inv = inv


def _digit_mul_mod(p: int, mod: tuple[int, ...], a: list[int], b: list[int]) -> list[int]:
    k = len(mod) - 1
    out = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    # reduce by the monic modulus
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
    return out[:k]


@functools.cache
def field(q: int) -> GF:
    """Construct GF(q) with full add/mul/inv tables."""
    if q not in SUPPORTED_Q:
        raise ParameterError(f"unsupported field order q={q}; supported: {SUPPORTED_Q}")
    if q in _MODULI:
        p, mod = _MODULI[q]
        k = len(mod) - 1
    else:
        p, k, mod = q, 1, (0, 1)

    def digits(e: int) -> list[int]:
        return [(e // p**i) % p for i in range(k)]

    def undigits(ds: list[int]) -> int:
        return sum(d * p**i for i, d in enumerate(ds))

    add = tuple(
        tuple(undigits([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(undigits(_digit_mul_mod(p, mod, digits(a), digits(b))) for b in range(q))
        for a in range(q)
    )
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
    return GF(q, p, k, add, mul, tuple(inv))


def monic_coeffs(q: int, degree: int, index: int) -> tuple[int, ...]:
    """Low-to-high coefficients of the monic polynomial with this index."""
    low = [(index // q**i) % q for i in range(degree)]
    return tuple(low) + (1,)


def encode_low(q: int, low: tuple[int, ...]) -> int:
    return sum(c * q**i for i, c in enumerate(low))


def poly_mul(gf: GF, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Coefficient convolution over GF(q); inputs low-to-high."""
    out = [0] * (len(a) + len(b) - 1)
    add, mul = gf.add, gf.mul
    for i, ai in enumerate(a):
        if ai:
            row = mul[ai]
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = add[out[i + j]][row[bj]]
    return tuple(out)


@functools.cache
def irreducible_indices(q: int, n: int) -> tuple[int, ...]:
    """Sorted indices of all monic irreducibles of degree exactly n."""
    if q not in SUPPORTED_Q:
        raise ParameterError(f"unsupported field order q={q}; supported: {SUPPORTED_Q}")
    if n < 1:
        raise ParameterError(f"degree must be >= 1, got {n}")
    if q == 2:
        return _irreducible_indices_gf2(n)
    gf = field(q)
    reducible = bytearray(q**n)
    for a in range(1, n // 2 + 1):
        b = n - a
        for fi in irreducible_indices(q, a):
            f = monic_coeffs(q, a, fi)
            for hi in range(q**b):
                prod = poly_mul(gf, f, monic_coeffs(q, b, hi))
                reducible[encode_low(q, prod[:n])] = 1
    return tuple(i for i in range(q**n) if not reducible[i])


def _irreducible_indices_gf2(n: int) -> tuple[int, ...]:
    # bit i of the mask is the coefficient of t^i; bulk carryless multiply
    top = np.uint64(1 << n)
    reducible = np.zeros(1 << n, dtype=bool)
    for a in range(1, n // 2 + 1):
        b = n - a
        h = np.arange(1 << b, 1 << (b + 1), dtype=np.uint64)
        for fi in irreducible_indices(2, a):
            fbits = fi | (1 << a)
            acc = np.zeros(h.shape, dtype=np.uint64)
            shift = 0
            while fbits:
                if fbits & 1:
                    acc ^= h << np.uint64(shift)
                fbits >>= 1
                shift += 1
            reducible[(acc ^ top).astype(np.int64)] = True
    return tuple(int(i) for i in np.flatnonzero(~reducible))


def monic_label(q: int, degree: int, index: int) -> str:
    """Human-readable form, e.g. "t^3+t+1" or "2t^2+t+2" for q=3."""
    coeffs = monic_coeffs(q, degree, index)
    terms = []
    for i in range(degree, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}t" if i == 1 else f"{head}t^{i}")
    return "+".join(terms)


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    m, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


def necklace_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over GF(q), by Moebius sum."""
    if q < 2 or n < 1:
        raise ParameterError(f"necklace_count needs q >= 2 and n >= 1, got q={q}, n={n}")
    total = sum(_mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n
