"""Exact Kloosterman sums S(h, m; k) with CRT fast path and Weil auditing.

Phases are always taken from the reduced residue of (h*x + m*xbar) mod k,
never from accumulated floating-point angles, so the only rounding in a
value is the final cosine/sine lookup and the pairwise sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotInvertible
from .numerics import pairwise_sum, unit_circle_table


def mod_inverse(a: int, k: int) -> int:
    """Inverse of a modulo k, in [0, k); k = 1 returns 0 by convention."""
    if k < 1:
        raise ValueError("modulus must be positive")
    if k == 1:
        return 0
    try:
        return pow(a % k, -1, k)
    except ValueError:
        raise NotInvertible(a, k) from None


@dataclass(frozen=True)
class ReducedFraction:
    """A reduced twist h/k together with the modular inverse of h."""

    h: int
    k: int
    h_bar: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("denominator must be positive")
        if math.gcd(self.h, self.k) != 1:
            raise ValueError(f"{self.h}/{self.k} is not reduced")
        if not (0 <= self.h_bar < self.k) and self.k > 1:
            raise ValueError("h_bar must be the least nonnegative inverse")
        if self.k > 1 and (self.h * self.h_bar) % self.k != 1:
            raise ValueError("h_bar is not an inverse of h")

    @classmethod
    def make(cls, h: int, k: int) -> "ReducedFraction":
        return cls(h=h, k=k, h_bar=mod_inverse(h, k))


@lru_cache(maxsize=2048)
def _units_and_inverses(k: int) -> tuple[np.ndarray, np.ndarray]:
    xs = np.arange(1, k, dtype=np.int64)
    xs = xs[np.gcd(xs, k) == 1]
    inv = np.array([pow(int(x), -1, k) for x in xs], dtype=np.int64)
    return xs, inv


@lru_cache(maxsize=2048)
def _phase_table(k: int) -> np.ndarray:
    return unit_circle_table(k)


def kloosterman_direct(h: int, m: int, k: int) -> complex:
    """S(h, m; k) by summation over the full unit group mod k."""
    if k < 1:
        raise ValueError("modulus must be positive")
    if k == 1:
        return 1.0 + 0.0j
    xs, inv = _units_and_inverses(k)
    r = (h % k * xs + m % k * inv) % k
    return pairwise_sum(_phase_table(k)[r])


def _factorize(k: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            e = 0
            while k % d == 0:
                k //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if k > 1:
        out.append((k, 1))
    return out


def kloosterman_crt(h: int, m: int, k: int) -> complex:
    """S(h, m; k) via twisted multiplicativity over the prime-power parts.

    For coprime c1*c2 = k the sum factors as
    S(h, m; c1*c2) = S(h, m*c2bar^2; c1) * S(h, m*c1bar^2; c2),
    and prime-power moduli are evaluated directly.
    """
    if k < 1:
        raise ValueError("modulus must be positive")
    if k == 1:
        return 1.0 + 0.0j
    factors = _factorize(k)
    value = 1.0 + 0.0j
    for p, e in factors:
        c1 = p**e
        c2 = k // c1
        if c2 == 1:
            value *= kloosterman_direct(h, m, c1)
        else:
            c2bar = mod_inverse(c2, c1)
            value *= kloosterman_direct(h, m * c2bar * c2bar, c1)
    return value


def divisor_count(k: int) -> int:
    return math.prod(e + 1 for _, e in _factorize(k)) if k > 1 else 1


@dataclass(frozen=True)
class WeilCheck:
    value: complex
    bound: float
    ok: bool


def weil_check(h: int, m: int, k: int, method: str = "direct") -> WeilCheck:
    """Evaluate S(h, m; k) and compare against d(k) (h,m,k)^(1/2) k^(1/2)."""
    if method == "direct":
        value = kloosterman_direct(h, m, k)
    elif method == "crt":
        value = kloosterman_crt(h, m, k)
    else:
        raise ValueError(f"unknown method {method!r}")
    g = math.gcd(math.gcd(abs(h), abs(m)), k)
    if g == 0:
        g = k
    bound = divisor_count(k) * math.sqrt(g) * math.sqrt(k)
    return WeilCheck(value=value, bound=bound, ok=abs(value) <= bound + 1e-9)


def kloosterman_residue_row(h: int, c: int) -> np.ndarray:
    """S(h, r; c) for every residue r in [0, c).

    The sum only depends on the second argument mod c, so downstream
    consumers index this row instead of recomputing per term.
    """
    if c == 1:
        return np.ones(1, dtype=np.complex128)
    xs, inv = _units_and_inverses(c)
    tab = _phase_table(c)
    base = (h % c) * xs % c
    out = np.empty(c, dtype=np.complex128)
    for r in range(c):
        out[r] = pairwise_sum(tab[(base + r * inv) % c])
    return out


@dataclass(frozen=True)
class WeilAuditSummary:
    """Worst-case deviations over an exhaustive (h, m, k) grid."""

    k_max: int
    triples: int
    max_crt_direct_gap: float  # max |direct - crt| / sqrt(k)
    max_imag: float
    weil_violations: int
    max_symmetry_gap: float  # max |S(h,m;k) - S(m,h;k)|


def weil_audit_grid(k_max: int, h_values, m_values) -> WeilAuditSummary:
    """Exhaustively compare direct and CRT paths and audit the Weil bound."""
    from .numerics import pairwise_fold

    h_values = list(h_values)
    m_values = list(m_values)
    max_gap = 0.0
    max_imag = 0.0
    max_sym = 0.0
    violations = 0
    triples = 0
    for k in range(1, k_max + 1):
        dk = divisor_count(k)
        sqrt_k = math.sqrt(k)
        if k == 1:
            direct_grid = np.ones((len(h_values), len(m_values)), dtype=np.complex128)
        else:
            xs, inv = _units_and_inverses(k)
            tab = _phase_table(k)
            hs = np.array([h % k for h in h_values], dtype=np.int64)
            ms = np.array([m % k for m in m_values], dtype=np.int64)
            # residues for all (h, m) pairs at once: shape (H, M, phi(k))
            r = (hs[:, None, None] * xs[None, None, :] + ms[None, :, None] * inv[None, None, :]) % k
            direct_grid = pairwise_fold(tab[r])
        for i, h in enumerate(h_values):
            for j, m in enumerate(m_values):
                direct = complex(direct_grid[i, j])
                crt = kloosterman_crt(h, m, k)
                triples += 1
                max_gap = max(max_gap, abs(direct - crt) / sqrt_k)
                max_imag = max(max_imag, abs(direct.imag))
                g = math.gcd(math.gcd(h, m), k)
                if abs(direct) > dk * math.sqrt(g) * sqrt_k + 1e-9:
                    violations += 1
                if m in h_values and h in m_values:
                    sym = complex(direct_grid[h_values.index(m), m_values.index(h)])
                    max_sym = max(max_sym, abs(direct - sym))
    return WeilAuditSummary(
        k_max=k_max,
        triples=triples,
        max_crt_direct_gap=max_gap,
        max_imag=max_imag,
        weil_violations=violations,
        max_symmetry_gap=max_sym,
    )
