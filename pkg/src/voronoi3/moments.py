"""Second-moment and pointwise audits of the twisted coefficient sums.

The mean-square integrand |S(x)|^2 is piecewise constant between
consecutive integers, so the moment integral is evaluated as an exact
step sum rather than by quadrature.  The smooth main-term square
|M(x)|^2 is integrated by Gauss-Legendre panels in the variable
u = x^(1/3), where M is a plain trigonometric polynomial times u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolated, LimitExceeded
from .hecke_coefficients import CoefficientTable, ThetaBound
from .kloosterman import ReducedFraction, kloosterman_residue_row
from .numerics import KahanAccumulator, pairwise_sum, unit_circle_table
from .voronoi import NkSelection, _divisors, direct_sum


def second_moment_exact(
    X: float,
    fraction: ReducedFraction,
    table: CoefficientTable,
    lower: float = 1.0,
) -> float:
    """Exact step integral of |S(x)|^2 over [lower, X].

    S is updated coefficient by coefficient; the only floating error is
    summation rounding.  The prefix accumulation is sequential on
    purpose (it is a prefix sum) and compensated.
    """
    if X <= lower:
        return 0.0
    m_max = math.floor(X)
    if m_max < 1:
        return 0.0
    values = table.am1_array(m_max)
    k = fraction.k
    phases = unit_circle_table(k)
    residues = (np.arange(1, m_max + 1, dtype=np.int64) * (fraction.h % k)) % k
    terms = values * phases[residues]

    acc = KahanAccumulator()
    s_re = KahanAccumulator()
    s_im = KahanAccumulator()
    for n in range(1, m_max + 1):
        t = terms[n - 1]
        s_re.add(t.real)
        s_im.add(t.imag)
        left = max(float(n), lower)
        right = min(float(n + 1), X)
        if right > left:
            acc.add((s_re.total**2 + s_im.total**2) * (right - left))
    return acc.total


@dataclass(frozen=True)
class MomentReport:
    X: float
    k: int
    integral: float
    bound: float
    ratio: float
    trivial_regime: bool = False  # k^3 > X^2, where the bound holds trivially


def theorem2_report(
    X_grid,
    fraction: ReducedFraction,
    table: CoefficientTable,
    theta: ThetaBound,
    c: float,
) -> list[MomentReport]:
    """Rows integral vs c * k^2 * X^(5/3 + 2*vartheta + eps)."""
    rows = []
    k = fraction.k
    for X in X_grid:
        integral = second_moment_exact(float(X), fraction, table)
        bound = c * k * k * float(X) ** (5.0 / 3.0 + 2.0 * theta.vartheta + theta.epsilon)
        rows.append(
            MomentReport(
                X=float(X),
                k=k,
                integral=integral,
                bound=bound,
                ratio=integral / bound if bound > 0 else math.inf,
                trivial_regime=k**3 > float(X) ** 2,
            )
        )
    return rows


def ratios_dominated(rows: list[MomentReport], slack: float = 1e-9) -> bool:
    """True when the bound dominates more strongly as X grows."""
    ordered = sorted(rows, key=lambda r: r.X)
    return all(
        ordered[i + 1].ratio <= ordered[i].ratio * (1.0 + slack)
        for i in range(len(ordered) - 1)
    )


def _main_term_frequencies(
    fraction: ReducedFraction, nk: NkSelection, table: CoefficientTable
):
    """Coefficients and u-frequencies of M(u^3) = u/(pi sqrt 3) * sum c_j cos(w_j u)."""
    k = fraction.k
    n_k = nk.N_k
    if n_k > table.limit_pairs:
        raise LimitExceeded(f"N_k={n_k} beyond table coverage {table.limit_pairs}")
    coefs = []
    freqs = []
    for d in _divisors(k):
        m_top = n_k // (d * d)
        if m_top < 1:
            continue
        c = k // d
        s_row = kloosterman_residue_row(fraction.h_bar, c)
        values = table.adm_array(d, m_top).real
        m = np.arange(1, m_top + 1, dtype=np.float64)
        kloos = s_row[np.arange(1, m_top + 1, dtype=np.int64) % c].real
        coefs.append(values * m ** (-2.0 / 3.0) * kloos / d)
        freqs.append((6.0 * math.pi * d ** (2.0 / 3.0) / k) * m ** (1.0 / 3.0))
    if not coefs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(coefs), np.concatenate(freqs)


def main_term_second_moment(
    X: float,
    fraction: ReducedFraction,
    nk: NkSelection,
    table: CoefficientTable,
    theta: ThetaBound = ThetaBound(),
    c: float = 1.0,
    rel_tol: float = 1e-7,
) -> tuple[float, float]:
    """(integral of M^2 over [X, 2X], c * k^2 * X^(5/3+vartheta+eps)).

    Substituting u = x^(1/3) gives (1/pi^2) int u^4 C(u)^2 du with C a
    cosine polynomial, integrated by panelled Gauss-Legendre sized from
    the largest frequency, then refined once for an error estimate.
    """
    coefs, freqs = _main_term_frequencies(fraction, nk, table)
    k = fraction.k
    bound = c * k * k * X ** (5.0 / 3.0 + theta.vartheta + theta.epsilon)
    if coefs.size == 0:
        return 0.0, bound

    u_lo = X ** (1.0 / 3.0)
    u_hi = (2.0 * X) ** (1.0 / 3.0)
    w_max = float(freqs.max())
    nodes_gl, weights_gl = np.polynomial.legendre.leggauss(8)

    def cosine_sum(u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        # chunk the outer product to keep memory flat
        step = max(1, int(2e6 / max(coefs.size, 1)))
        for i in range(0, u.size, step):
            block = np.cos(np.outer(u[i : i + step], freqs))
            out[i : i + step] = block @ coefs
        return out

    def integrate(n_panels: int) -> float:
        edges = np.linspace(u_lo, u_hi, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        u = (mid[:, None] + half[:, None] * nodes_gl[None, :]).ravel()
        w = (half[:, None] * weights_gl[None, :]).ravel()
        integrand = u**4 * cosine_sum(u) ** 2
        return pairwise_sum(w * integrand) / math.pi**2

    n_panels = max(8, int(2.0 * w_max * (u_hi - u_lo) / 0.5))
    value = integrate(n_panels)
    while True:
        value_fine = integrate(2 * n_panels)
        if abs(value_fine - value) <= rel_tol * max(abs(value_fine), 1.0):
            return value_fine, bound
        n_panels *= 2
        value = value_fine
        if n_panels > 1_000_000:
            from .errors import BudgetExceeded

            raise BudgetExceeded("main-term moment quadrature did not settle")


@dataclass(frozen=True)
class PointwiseRow:
    x: float
    k: int
    abs_sum: float
    bound_a: float
    ratio_a: float
    bound_b: float | None
    ratio_b: float | None
    n_used: float
    note: str = ""


def pointwise_report(
    x_grid,
    fraction: ReducedFraction,
    table: CoefficientTable,
    theta: ThetaBound,
    c: float,
    c_hyp: float = 1.0,
) -> list[PointwiseRow]:
    """|S(x)| against the two pointwise bounds.

    bound_a uses the N = x choice,
        c * (k^(1/2+eps) x^(2/3) + k x^(1/3+vartheta+eps));
    bound_b uses N = k^(3/4) x^(1/2+3*vartheta/2) and needs
    vartheta <= 1/3 and k <= c_hyp * x^(2/3-2*vartheta); rows outside
    that range carry an empty bound_b.
    """
    rows = []
    k = fraction.k
    vt, eps = theta.vartheta, theta.epsilon
    for x in x_grid:
        x = float(x)
        s = abs(direct_sum(x, fraction, table))
        bound_a = c * (k ** (0.5 + eps) * x ** (2.0 / 3.0) + k * x ** (1.0 / 3.0 + vt + eps))
        n_used = x
        bound_b = None
        ratio_b = None
        note = ""
        try:
            if vt > 1.0 / 3.0:
                raise HypothesisViolated(f"vartheta={vt} > 1/3")
            if k > c_hyp * x ** (2.0 / 3.0 - 2.0 * vt):
                raise HypothesisViolated(f"k={k} > {c_hyp} * x^(2/3-2vt)")
            bound_b = c * (
                k ** (3.0 / 4.0) * x ** (0.5 + vt / 2.0 + eps)
                + k ** (9.0 / 8.0 + 3.0 * vt / 4.0)
                * x ** (0.25 + 1.5 * vt * vt + 0.75 * vt + eps)
            )
            ratio_b = s / bound_b
            n_used = k ** (3.0 / 4.0) * x ** (0.5 + 1.5 * vt)
        except HypothesisViolated as exc:
            note = str(exc)
        rows.append(
            PointwiseRow(
                x=x,
                k=k,
                abs_sum=s,
                bound_a=bound_a,
                ratio_a=s / bound_a,
                bound_b=bound_b,
                ratio_b=ratio_b,
                n_used=n_used,
                note=note,
            )
        )
    return rows
