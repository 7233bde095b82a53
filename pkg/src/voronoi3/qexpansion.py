"""Exact integer q-expansions for the built-in symmetric-square seed.

The discriminant cusp form is expanded as q * prod(1 - q^n)^24 in pure
integer arithmetic.  The 24th power is reached from the cube of the
Euler product (whose expansion is the sparse signed-triangular-number
series) by three truncated squarings.  Truncated products are computed
by Kronecker substitution: coefficients are packed into one big integer
with fixed-width signed digits, multiplied once, and unpacked, which
keeps everything exact while delegating the convolution to bignum
multiplication.
"""

from __future__ import annotations

from functools import lru_cache


def _pack_signed(coeffs: list[int], digit_bytes: int) -> int:
    """Pack coefficients as base-2^(8*digit_bytes) digits of one integer."""
    pos = bytearray()
    neg = bytearray()
    zero = bytes(digit_bytes)
    for c in coeffs:
        if c >= 0:
            pos += c.to_bytes(digit_bytes, "little")
            neg += zero
        else:
            pos += zero
            neg += (-c).to_bytes(digit_bytes, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _unpack_signed(value: int, digit_bytes: int, count: int) -> list[int]:
    """Inverse of _pack_signed for a product whose digits fit the width."""
    half = 1 << (8 * digit_bytes - 1)
    # Add half to every digit so all digits become nonnegative, then the
    # plain byte representation splits cleanly.  No carries occur as long
    # as every true digit c satisfies |c| < half.
    bias_block = (half).to_bytes(digit_bytes, "little")
    bias = int.from_bytes(bias_block * count, "little")
    shifted = value + bias
    if shifted < 0:
        raise ValueError("digit width too small for packed product")
    raw = shifted.to_bytes(digit_bytes * count, "little")
    out = []
    for i in range(count):
        d = int.from_bytes(raw[i * digit_bytes : (i + 1) * digit_bytes], "little")
        out.append(d - half)
    return out


def poly_mul_trunc(a: list[int], b: list[int], n_terms: int) -> list[int]:
    """Exact truncated product of integer polynomials (degree < n_terms)."""
    a = a[:n_terms]
    b = b[:n_terms]
    if not a or not b:
        return [0] * n_terms
    ma = max(1, max(abs(c) for c in a))
    mb = max(1, max(abs(c) for c in b))
    bound = min(len(a), len(b)) * ma * mb
    digit_bytes = (bound.bit_length() + 2 + 7) // 8 + 1
    prod = _pack_signed(a, digit_bytes) * _pack_signed(b, digit_bytes)
    out = _unpack_signed(prod, digit_bytes, min(n_terms, len(a) + len(b) - 1))
    out += [0] * (n_terms - len(out))
    return out[:n_terms]


def euler_cube(n_terms: int) -> list[int]:
    """Coefficients of prod(1 - q^n)^3 = sum (-1)^k (2k+1) q^(k(k+1)/2)."""
    out = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (2 * k + 1) * (1 if k % 2 == 0 else -1)
        k += 1
    return out


@lru_cache(maxsize=4)
def ramanujan_tau_list(n_max: int) -> tuple[int, ...]:
    """tau(1..n_max) as exact integers; index i holds tau(i+1)."""
    if n_max < 1:
        return ()
    p3 = euler_cube(n_max)
    p6 = poly_mul_trunc(p3, p3, n_max)
    p12 = poly_mul_trunc(p6, p6, n_max)
    p24 = poly_mul_trunc(p12, p12, n_max)
    return tuple(p24)


def ramanujan_tau(n: int) -> int:
    """tau(n) for a single index (builds the series up to n)."""
    if n < 1:
        raise ValueError("tau is indexed from 1")
    return ramanujan_tau_list(n)[n - 1]


def delta_expansion_bruteforce(n_terms: int) -> list[int]:
    """Slow reference expansion of prod(1 - q^n)^24, term-by-term factors.

    Kept deliberately naive (repeated sparse binomial multiplication) so
    it shares no code path with the fast route above.
    """
    coeffs = [0] * n_terms
    coeffs[0] = 1
    for n in range(1, n_terms):
        for _ in range(24):
            # multiply by (1 - q^n) in place
            for i in range(n_terms - 1, n - 1, -1):
                coeffs[i] -= coeffs[i - n]
    return coeffs
