"""Deterministic summation helpers and exact-residue phase tables.

Everything here is written so that a result depends only on the input
values, never on thread count or accumulation order chosen at runtime.
"""

from __future__ import annotations

import math

import numpy as np


def pairwise_fold(values) -> np.ndarray:
    """Reduce the last axis by a fixed balanced binary tree.

    Adjacent elements are paired, an odd trailing element is carried to
    the next level unchanged.  The reduction order is a pure function of
    the axis length, so results are bit-identical across runs and across
    any partitioning of the outer work.
    """
    a = np.asarray(values)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype if a.dtype.kind in "fc" else float)
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            body, tail = a[..., :-1], a[..., -1:]
        else:
            body, tail = a, None
        a = body[..., 0::2] + body[..., 1::2]
        if tail is not None:
            a = np.concatenate([a, tail], axis=-1)
    return a[..., 0]


def pairwise_sum(values) -> complex:
    """Scalar pairwise sum of a one-dimensional array."""
    a = np.asarray(values)
    if a.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-d array")
    if a.size == 0:
        return 0.0 + 0.0j if np.iscomplexobj(a) else 0.0
    return pairwise_fold(a).item()


class KahanAccumulator:
    """Compensated sequential accumulator for real values."""

    def __init__(self) -> None:
        self.total = 0.0
        self._carry = 0.0

    def add(self, value: float) -> None:
        value += self._carry
        t = self.total + value
        self._carry = value - (t - self.total)
        self.total = t


def unit_circle_table(k: int) -> np.ndarray:
    """Return e(r/k) for r = 0..k-1 with exact conjugate symmetry.

    Values for r > k/2 are stored as conjugates of their mirror images,
    so table[k - r] == conj(table[r]) holds exactly, which makes sums
    whose residue multiset is closed under negation cancel their
    imaginary parts to rounding level.
    """
    if k < 1:
        raise ValueError("modulus must be positive")
    half = k // 2
    ang = 2.0 * math.pi * np.arange(half + 1) / k
    tab = np.empty(k, dtype=np.complex128)
    tab[: half + 1] = np.cos(ang) + 1j * np.sin(ang)
    tab[0] = 1.0
    if k % 2 == 0 and k > 1:
        tab[half] = -1.0  # the self-conjugate point must be exactly real
    if k > 1:
        tab[half + 1 :] = np.conj(tab[1 : k - half][::-1])
    return tab


def cbrt(x: float) -> float:
    """Real cube root of a nonnegative float."""
    return x ** (1.0 / 3.0)
