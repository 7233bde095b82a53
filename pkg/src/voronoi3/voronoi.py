"""Term-by-term evaluation of the truncated Voronoi identity.

The left-hand side is the sharp twisted sum

    S(x, h/k) = sum_{m <= x} A(m, 1) e(m h / k),

and the approximating main term is the finite Kloosterman-cosine sum

    M(x, h/k) = x^(1/3) / (pi sqrt(3))
                * sum_{d | k} (1/d) sum_{d^2 m <= N_k}
                  A(d, m) m^(-2/3) S(hbar, m; k/d)
                  * cos(6 pi d^(2/3) (m x)^(1/3) / k),

where N_k is an integer in [N, 2N] whose shifted fractional parts
(N_k + 1/2)/d^2 stay away from integers for every divisor d | k.  The
difference S - M is audited against the two-power error budget

    c1 * k * x^(2/3+vartheta+eps) * N^(-1/3)
    + c2 * k * x^(1/6+eps) * N^(1/6+vartheta),

whose constants are calibrated once and frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LimitExceeded, NoAdmissibleNk
from .hecke_coefficients import CoefficientTable, ThetaBound
from .kloosterman import ReducedFraction, kloosterman_residue_row
from .numerics import pairwise_sum, unit_circle_table


@dataclass(frozen=True)
class VoronoiParams:
    """Inputs for one identity evaluation, with the implied-constant knobs."""

    x: float
    N: float
    fraction: ReducedFraction
    theta: ThetaBound = ThetaBound()
    c_nk: float = 1.0 / 20.0
    c_k_small: float = 0.1
    c_x_ratio: float = 1.0  # allowed N/x ratio

    def __post_init__(self):
        k = self.fraction.k
        if self.x < 2.0 or self.N < 2.0:
            raise ValueError("x and N must be at least 2")
        if self.N > self.c_x_ratio * self.x:
            raise ValueError(f"N={self.N} exceeds {self.c_x_ratio} * x")
        if k > self.N:
            raise ValueError(f"k={k} exceeds N={self.N}")
        if k > self.x:
            raise ValueError(f"k={k} exceeds x={self.x}")
        if k > self.c_k_small * (self.N * self.x) ** (1.0 / 3.0):
            raise ValueError(
                f"k={k} exceeds {self.c_k_small} * (N*x)^(1/3); identity untested there"
            )


def _divisors(k: int) -> list[int]:
    out = [d for d in range(1, int(math.isqrt(k)) + 1) if k % d == 0]
    out += [k // d for d in reversed(out) if d * d != k]
    return sorted(out)


@dataclass(frozen=True)
class NkSelection:
    """A chosen N_k together with its per-divisor margin audit trail."""

    N_k: int
    margins: tuple = ()  # (d, margin, threshold) triples


def _margin_exact(n: int, d: int) -> float:
    """Distance of (n + 1/2)/d^2 from the integers, via integer arithmetic."""
    dd = d * d
    r = n % dd
    num = min(2 * r + 1, 2 * dd - (2 * r + 1))
    return num / (2.0 * dd)


def _threshold(d: int, k: int, c_nk: float) -> float:
    lg = math.log(k)
    return c_nk / (d * (1.0 + lg * lg))


def select_nk(N: float, k: int, c_nk: float = 1.0 / 20.0) -> NkSelection:
    """Smallest integer in [N, 2N] passing every divisor margin.

    Margins are computed in exact integer arithmetic; the returned audit
    trail lists (d, margin, threshold) for each divisor d | k with
    d <= sqrt(2N).  Raises NoAdmissibleNk if the whole window fails; the
    documented caller policy is to retry with c_nk halved.
    """
    if N < 2.0:
        raise ValueError("N must be at least 2")
    if k < 1 or k > N:
        raise ValueError("need 1 <= k <= N")
    divisors = [d for d in _divisors(k) if d * d <= 2.0 * N]
    lo = math.ceil(N)
    hi = math.floor(2.0 * N)
    for n in range(lo, hi + 1):
        margins = []
        ok = True
        for d in divisors:
            margin = _margin_exact(n, d)
            thr = _threshold(d, k, c_nk)
            margins.append((d, margin, thr))
            if margin < thr:
                ok = False
                break
        if ok:
            return NkSelection(N_k=n, margins=tuple(margins))
    raise NoAdmissibleNk(f"no admissible N_k in [{lo}, {hi}] for k={k}, c_nk={c_nk}")


def recheck_nk(selection: NkSelection, N: float, k: int, c_nk: float = 1.0 / 20.0) -> bool:
    """Independent float-arithmetic recheck of every divisor margin."""
    n = selection.N_k
    if not (N <= n <= 2.0 * N):
        return False
    for d in _divisors(k):
        if d * d > 2.0 * N:
            continue
        v = (n + 0.5) / (d * d)
        margin = abs(v - round(v))
        if margin < _threshold(d, k, c_nk):
            return False
    return True


def direct_sum(x: float, fraction: ReducedFraction, table: CoefficientTable) -> complex:
    """The sharp twisted sum over m <= x (closed right endpoint)."""
    m_max = math.floor(x)
    if m_max < 1:
        return 0.0 + 0.0j
    values = table.am1_array(m_max)
    k = fraction.k
    phases = unit_circle_table(k)
    residues = (np.arange(1, m_max + 1, dtype=np.int64) * (fraction.h % k)) % k
    return pairwise_sum(values * phases[residues])


def main_term(
    x: float,
    fraction: ReducedFraction,
    nk: NkSelection,
    table: CoefficientTable,
) -> float:
    """The Kloosterman-cosine main term at truncation height N_k.

    Summation is d ascending, m ascending, with a deterministic pairwise
    reduction per divisor block.
    """
    k = fraction.k
    n_k = nk.N_k
    if n_k > table.limit_pairs:
        raise LimitExceeded(f"N_k={n_k} beyond table coverage {table.limit_pairs}")
    total = 0.0 + 0.0j
    x_third = x ** (1.0 / 3.0)
    for d in _divisors(k):
        m_top = n_k // (d * d)
        if m_top < 1:
            continue
        c = k // d
        s_row = kloosterman_residue_row(fraction.h_bar, c)
        values = table.adm_array(d, m_top)
        m = np.arange(1, m_top + 1, dtype=np.float64)
        kloos = s_row[np.arange(1, m_top + 1, dtype=np.int64) % c]
        arg = (6.0 * math.pi * d ** (2.0 / 3.0) / k) * (m * x) ** (1.0 / 3.0)
        block = values * m ** (-2.0 / 3.0) * kloos * np.cos(arg)
        total += pairwise_sum(block) / d
    result = total * (x_third / (math.pi * math.sqrt(3.0)))
    return result.real


def error_budget(
    params: VoronoiParams, c1: float, c2: float
) -> float:
    """c1*k*x^(2/3+vt+eps)*N^(-1/3) + c2*k*x^(1/6+eps)*N^(1/6+vt)."""
    x, N, k = params.x, params.N, params.fraction.k
    vt, eps = params.theta.vartheta, params.theta.epsilon
    first = c1 * k * x ** (2.0 / 3.0 + vt + eps) * N ** (-1.0 / 3.0)
    second = c2 * k * x ** (1.0 / 6.0 + eps) * N ** (1.0 / 6.0 + vt)
    return first + second


@dataclass(frozen=True)
class ResidualRow:
    x: float
    N: float
    N_k: int
    lhs: complex
    main: float
    residual: complex
    budget: float
    note: str = ""


@dataclass
class ResidualReport:
    c1: float
    c2: float
    source_tag: str
    rows: list = field(default_factory=list)

    def max_ratio(self) -> float:
        return max((abs(r.residual) / r.budget for r in self.rows if not r.note), default=0.0)

    def rms_residual(self) -> float:
        vals = [abs(r.residual) ** 2 for r in self.rows if not r.note]
        return math.sqrt(sum(vals) / len(vals)) if vals else 0.0


def evaluate_row(params: VoronoiParams, table: CoefficientTable, c1: float, c2: float) -> ResidualRow:
    nk = select_nk(params.N, params.fraction.k, params.c_nk)
    lhs = direct_sum(params.x, params.fraction, table)
    main = main_term(params.x, params.fraction, nk, table)
    return ResidualRow(
        x=params.x,
        N=params.N,
        N_k=nk.N_k,
        lhs=lhs,
        main=main,
        residual=lhs - main,
        budget=error_budget(params, c1, c2),
    )


def residual_report(
    grid,
    table: CoefficientTable,
    c1: float,
    c2: float,
    workers: int = 1,
) -> ResidualReport:
    """Evaluate every grid row; per-row failures are recorded, not raised.

    Rows are independent and may be computed on a thread pool; results
    are assembled in grid order so output is identical for any worker
    count.
    """
    grid = list(grid)
    report = ResidualReport(c1=c1, c2=c2, source_tag=table.source_tag)

    def one(params: VoronoiParams) -> ResidualRow:
        try:
            return evaluate_row(params, table, c1, c2)
        except Exception as exc:  # aggregated, reported per row
            return ResidualRow(
                x=params.x,
                N=params.N,
                N_k=0,
                lhs=0.0 + 0.0j,
                main=0.0,
                residual=0.0 + 0.0j,
                budget=0.0,
                note=f"{type(exc).__name__}: {exc}",
            )

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            report.rows = list(pool.map(one, grid))
    else:
        report.rows = [one(p) for p in grid]
    return report


def fit_budget_constants(report_rows, safety: float = 1.5) -> tuple[float, float]:
    """Single-constant fit c1 = c2 = safety * max |residual| / (t1 + t2).

    Used once on a calibration grid; the resulting constants are frozen
    in the checked-in constants file and never refit silently.
    """
    worst = 0.0
    for row, params in report_rows:
        t1 = error_budget(params, 1.0, 0.0)
        t2 = error_budget(params, 0.0, 1.0)
        worst = max(worst, abs(row.residual) / (t1 + t2))
    c = worst * safety
    return c, c
