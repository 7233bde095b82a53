"""Doubly indexed Hecke-multiplicative coefficient tables A(m1, m2).

Three sources are supported:

* ``d3``        -- the ternary-divisor proxy, Satake (1, 1, 1) at every
                   prime; all values are assembled in integer arithmetic.
* ``sym2_gl2``  -- symmetric-square lift of a holomorphic GL(2) form.
                   The built-in seed takes lambda(p) from the exact
                   q-expansion of the discriminant form, and prime-power
                   values are carried as exact rationals until the final
                   float conversion.
* ``file``      -- user-provided JSON seeds (per-prime Satake triples or
                   GL(2) eigenvalues).

Every composite value is the product of prime-power values, so Hecke
multiplicativity holds by construction up to float product rounding.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .errors import LimitExceeded, MalformedSeedFile, MissingPrimeSeed
from .qexpansion import ramanujan_tau_list

_VANDERMONDE_FLOOR = 1e-8


@dataclass(frozen=True)
class SatakeSeed:
    """Satake parameters (alpha, beta, gamma) at one prime, product 1."""

    p: int
    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        prod = self.alpha * self.beta * self.gamma
        if abs(prod - 1.0) > 1e-9:
            raise ValueError(f"Satake product at p={self.p} is {prod}, not 1")

    def is_self_dual(self, tol: float = 1e-9) -> bool:
        """True when {alpha, beta, gamma} is closed under inversion."""
        triple = (self.alpha, self.beta, self.gamma)
        for x in triple:
            if min(abs(1.0 / x - y) for y in triple) > tol:
                return False
        return True


@dataclass(frozen=True)
class SpectralParams:
    """Spectral parameters (nu1, nu2) and the derived archimedean triple."""

    nu1: complex
    nu2: complex

    @property
    def alpha_arch(self) -> complex:
        return -self.nu1 - 2 * self.nu2 + 1

    @property
    def beta_arch(self) -> complex:
        return -self.nu1 + self.nu2

    @property
    def gamma_arch(self) -> complex:
        return 2 * self.nu1 + self.nu2 - 1


@dataclass(frozen=True)
class ThetaBound:
    """Exponent toward Ramanujan-Petersson plus the epsilon slack."""

    vartheta: float = 5.0 / 14.0
    epsilon: float = 0.05

    def __post_init__(self):
        if not (0.0 <= self.vartheta < 1.0):
            raise ValueError("vartheta must lie in [0, 1)")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")


def _ssyt_schur(a: int, b: int, xs: tuple[complex, complex, complex]) -> complex:
    """Monomial sum over column-strict tableaux of shape (a+b, b)."""
    n1, n2 = a + b, b
    total = 0.0 + 0.0j
    for row1 in combinations_with_replacement((0, 1, 2), n1):
        for row2 in combinations_with_replacement((0, 1, 2), n2):
            if any(row2[j] <= row1[j] for j in range(n2)):
                continue
            term = 1.0 + 0.0j
            for i in row1:
                term *= xs[i]
            for i in row2:
                term *= xs[i]
            total += term
    return total


def schur_coefficient(a: int, b: int, seed: SatakeSeed) -> complex:
    """A(p^a, p^b) as the Schur polynomial of shape (a+b, b, 0).

    Uses the bialternant ratio of 3x3 determinants; when the Vandermonde
    determinant of the Satake triple drops below 1e-8 in magnitude the
    tableau monomial sum is used instead (repeated parameters make the
    ratio 0/0).
    """
    if a < 0 or b < 0:
        raise ValueError("exponents must be nonnegative")
    xs = (complex(seed.alpha), complex(seed.beta), complex(seed.gamma))
    x, y, z = xs
    vandermonde = (x - y) * (x - z) * (y - z)
    if abs(vandermonde) < _VANDERMONDE_FLOOR:
        return _ssyt_schur(a, b, xs)
    e1, e2, e3 = a + b + 2, b + 1, 0
    det = (
        x**e1 * (y**e2 * z**e3 - z**e2 * y**e3)
        - y**e1 * (x**e2 * z**e3 - z**e2 * x**e3)
        + z**e1 * (x**e2 * y**e3 - y**e2 * x**e3)
    )
    return det / vandermonde


def _d3_prime_power(a: int, b: int) -> int:
    """Integer Schur value at (1,1,1): (a+1)(b+1)(a+b+2)/2."""
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def _schur_from_e1(a: int, b: int, e1):
    """Schur value for a self-dual triple with elementary symmetrics (e1, e1, 1).

    Works over any field element type (Fraction or float).  Complete
    homogeneous values follow the three-term recurrence
    h_j = e1*h_{j-1} - e1*h_{j-2} + h_{j-3}, and the shape (a+b, b, 0)
    value is h_{a+b} h_b - h_{a+b+1} h_{b-1}.
    """
    top = a + b + 1
    h = [e1 * 0 + 1, e1]  # h_0 = 1, h_1 = e1
    while len(h) <= top:
        j = len(h)
        val = e1 * h[j - 1] - e1 * h[j - 2]
        if j >= 3:
            val = val + h[j - 3]
        elif j == 2:
            val = val + 0  # h_{-1} contributes nothing
        h.append(val)
    hm1 = 0
    s = h[a + b] * h[b] - h[a + b + 1] * (h[b - 1] if b >= 1 else hm1)
    return s


def sym2_elementary_from_tau(p: int, tau_p: int) -> Fraction:
    """lambda(p)^2 - 1 as an exact rational, tau normalized by p^(11/2)."""
    return Fraction(tau_p * tau_p - p**11, p**11)


@dataclass
class CoefficientTable:
    """Immutable map (m1, m2) -> A(m1, m2).

    Covers every pair with m1^2*m2 <= limit_pairs and every pair with
    m1*m2^2 <= limit_pairs.  Construction is single-threaded; once built
    the table is never mutated and may be shared freely across threads.
    """

    limit_pairs: int
    source_tag: str
    entries: dict = field(repr=False)

    def covers(self, m1: int, m2: int) -> bool:
        return (
            m1 >= 1
            and m2 >= 1
            and (m1 * m1 * m2 <= self.limit_pairs or m1 * m2 * m2 <= self.limit_pairs)
        )

    def value(self, m1: int, m2: int) -> complex:
        if not self.covers(m1, m2):
            raise LimitExceeded(
                f"A({m1},{m2}) outside coverage (limit_pairs={self.limit_pairs})"
            )
        return self.entries.get((m1, m2), 0.0 + 0.0j)

    def am1_array(self, m_max: int) -> np.ndarray:
        """A(m, 1) for m = 1..m_max as a complex vector."""
        if m_max > self.limit_pairs:
            raise LimitExceeded(f"A(m,1) needed to {m_max} > {self.limit_pairs}")
        out = np.zeros(m_max, dtype=np.complex128)
        for m in range(1, m_max + 1):
            out[m - 1] = self.entries.get((m, 1), 0.0)
        return out

    def adm_array(self, d: int, m_max: int) -> np.ndarray:
        """A(d, m) for m = 1..m_max as a complex vector."""
        if m_max >= 1 and not self.covers(d, m_max):
            raise LimitExceeded(
                f"A({d},m) needed to m={m_max} > coverage {self.limit_pairs}"
            )
        out = np.zeros(max(m_max, 0), dtype=np.complex128)
        for m in range(1, m_max + 1):
            out[m - 1] = self.entries.get((d, m), 0.0)
        return out

    def is_real(self) -> bool:
        return all(abs(v.imag) == 0.0 for v in self.entries.values())

    def scaled(self, factor: float) -> "CoefficientTable":
        return CoefficientTable(
            limit_pairs=self.limit_pairs,
            source_tag=self.source_tag,
            entries={key: factor * v for key, v in self.entries.items()},
        )


def coverage_pairs(limit: int):
    """All (m1, m2) with m1^2*m2 <= limit or m1*m2^2 <= limit."""
    seen = set()
    m1 = 1
    while m1 * m1 <= limit:
        for m2 in range(1, limit // (m1 * m1) + 1):
            seen.add((m1, m2))
        m1 += 1
    for m1 in range(1, limit + 1):
        top = math.isqrt(limit // m1)
        for m2 in range(1, top + 1):
            seen.add((m1, m2))
    return sorted(seen)


def _smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    return spf


def _factor_with_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def _needed_exponent_pairs(p: int, limit: int):
    """Exponent pairs (a, b) at p that any covered index can require."""
    pairs = []
    a = 0
    while p ** (2 * a) <= limit or p**a <= limit:
        b = 0
        while p ** (2 * a + b) <= limit or p ** (a + 2 * b) <= limit:
            if a or b:
                pairs.append((a, b))
            b += 1
        a += 1
        if p**a > limit:
            break
    return pairs


def _primes_up_to(n: int) -> list[int]:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def lambda_seeds_from_tau(limit: int) -> dict[int, Fraction]:
    """Exact lambda(p)^2 - 1 seeds for every prime up to limit."""
    taus = ramanujan_tau_list(limit)
    return {p: sym2_elementary_from_tau(p, taus[p - 1]) for p in _primes_up_to(limit)}


def _prime_power_values_d3(limit: int) -> dict[tuple[int, int, int], complex]:
    values: dict[tuple[int, int, int], complex] = {}
    for p in _primes_up_to(limit):
        for a, b in _needed_exponent_pairs(p, limit):
            values[(p, a, b)] = complex(_d3_prime_power(a, b))
    return values


def _prime_power_values_sym2(
    limit: int, lambdas: dict | None
) -> dict[tuple[int, int, int], complex]:
    if lambdas is None:
        seeds = lambda_seeds_from_tau(limit)
    else:
        seeds = {}
        for p in _primes_up_to(limit):
            if p not in lambdas:
                raise MissingPrimeSeed(p)
            lam = lambdas[p]
            seeds[p] = lam * lam - 1.0
    values: dict[tuple[int, int, int], complex] = {}
    for p, e1 in seeds.items():
        for a, b in _needed_exponent_pairs(p, limit):
            v = _schur_from_e1(a, b, e1)
            values[(p, a, b)] = complex(float(v)) if isinstance(v, Fraction) else complex(v)
    return values


def _prime_power_values_satake(
    limit: int, seeds: dict[int, SatakeSeed]
) -> dict[tuple[int, int, int], complex]:
    values: dict[tuple[int, int, int], complex] = {}
    for p in _primes_up_to(limit):
        if p not in seeds:
            raise MissingPrimeSeed(p)
        for a, b in _needed_exponent_pairs(p, limit):
            values[(p, a, b)] = schur_coefficient(a, b, seeds[p])
    return values


def _parse_seed_file(path: str) -> tuple[str, dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedSeedFile(f"{path}: {exc}") from None
    if not isinstance(doc, dict) or "source" not in doc:
        raise MalformedSeedFile(f"{path}: missing 'source' field")
    source = doc["source"]
    if source == "sym2_gl2":
        if set(doc) != {"source", "lambda"}:
            raise MalformedSeedFile(f"{path}: unexpected fields {sorted(set(doc) - {'source', 'lambda'})}")
        lambdas = {}
        for i, row in enumerate(doc["lambda"]):
            if not isinstance(row, dict) or set(row) != {"p", "value"}:
                raise MalformedSeedFile(f"{path}: lambda entry {i} malformed")
            lambdas[int(row["p"])] = float(row["value"])
        return "sym2_gl2", lambdas
    if source == "satake":
        if set(doc) != {"source", "primes"}:
            raise MalformedSeedFile(f"{path}: unexpected fields {sorted(set(doc) - {'source', 'primes'})}")
        seeds = {}
        for i, row in enumerate(doc["primes"]):
            if not isinstance(row, dict) or set(row) != {"p", "alpha", "beta", "gamma"}:
                raise MalformedSeedFile(f"{path}: satake entry {i} malformed")
            try:
                p = int(row["p"])
                seeds[p] = SatakeSeed(
                    p=p,
                    alpha=complex(row["alpha"][0], row["alpha"][1]),
                    beta=complex(row["beta"][0], row["beta"][1]),
                    gamma=complex(row["gamma"][0], row["gamma"][1]),
                )
            except (TypeError, ValueError, IndexError) as exc:
                raise MalformedSeedFile(f"{path}: satake entry {i}: {exc}") from None
        return "satake", seeds
    raise MalformedSeedFile(f"{path}: unknown source {source!r}")


def build_table(
    source: str,
    limit: int,
    lambdas: dict | None = None,
    path: str | None = None,
) -> CoefficientTable:
    """Build the coefficient table for one source up to the given limit.

    ``source`` is one of ``d3``, ``sym2_gl2`` or ``file``.  For
    ``sym2_gl2`` without explicit ``lambdas`` the built-in discriminant
    form seed is used.  For ``file``, ``path`` must name a JSON seed
    file; its ``source`` field decides the interpretation.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    tag = source
    if source == "d3":
        ppv = _prime_power_values_d3(limit)
    elif source == "sym2_gl2":
        ppv = _prime_power_values_sym2(limit, lambdas)
    elif source == "file":
        if path is None:
            raise ValueError("file source needs a path")
        kind, seeds = _parse_seed_file(path)
        if kind == "sym2_gl2":
            ppv = _prime_power_values_sym2(limit, seeds)
        else:
            ppv = _prime_power_values_satake(limit, seeds)
        tag = "file"
    else:
        raise ValueError(f"unknown source {source!r}")

    spf = _smallest_prime_factors(limit)
    entries: dict[tuple[int, int], complex] = {}
    for m1, m2 in coverage_pairs(limit):
        exps: dict[int, list[int]] = {}
        for p, e in _factor_with_spf(m1, spf).items():
            exps.setdefault(p, [0, 0])[0] = e
        for p, e in _factor_with_spf(m2, spf).items():
            exps.setdefault(p, [0, 0])[1] = e
        v = 1.0 + 0.0j
        for p, (a, b) in exps.items():
            v *= ppv[(p, a, b)]
        entries[(m1, m2)] = v
    return CoefficientTable(limit_pairs=limit, source_tag=tag, entries=entries)


@dataclass(frozen=True)
class RankinSelbergRow:
    x: float
    sum_sq: float
    ratio: float


def rankin_selberg_report(table: CoefficientTable, x_grid) -> list[RankinSelbergRow]:
    """Rows (x, sum_{d^2 m <= x} |A(d,m)|^2, sum/x)."""
    rows = []
    for x in x_grid:
        if x > table.limit_pairs:
            raise LimitExceeded(f"x={x} beyond table limit {table.limit_pairs}")
        total = 0.0
        d = 1
        while d * d <= x:
            m_top = int(x / (d * d))
            while d * d * m_top > x:
                m_top -= 1
            for m in range(1, m_top + 1):
                v = table.entries.get((d, m), 0.0)
                total += (v * v.conjugate()).real if isinstance(v, complex) else abs(v) ** 2
            d += 1
        rows.append(RankinSelbergRow(x=float(x), sum_sq=total, ratio=total / float(x)))
    return rows


def hecke_bound_fit(table: CoefficientTable, theta: ThetaBound) -> float:
    """Smallest C with |A(m1,m2)| <= C*(m1*m2)^(vartheta+epsilon) on the table."""
    worst = 0.0
    exponent = theta.vartheta + theta.epsilon
    for (m1, m2), v in table.entries.items():
        worst = max(worst, abs(v) / float(m1 * m2) ** exponent)
    return worst


def tau_normalized_lambda(p: int, tau_p: int) -> float:
    """lambda(p) = tau(p) / p^(11/2) in floating point."""
    return tau_p / math.sqrt(float(p) ** 11)


def satake_from_lambda(p: int, lam: float) -> SatakeSeed:
    """Symmetric-square Satake triple {beta^2, 1, beta^-2} from lambda(p)."""
    disc = cmath.sqrt(complex(lam * lam - 4.0))
    beta = (lam + disc) / 2.0
    b2 = beta * beta
    return SatakeSeed(p=p, alpha=b2, beta=1.0 + 0.0j, gamma=1.0 / b2)
