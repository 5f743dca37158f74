"""Seeded random families of symmetric-matrix subspaces for the duality tests."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _sym(rng, d: int, lo: int = -3, hi: int = 3) -> list[list[Fraction]]:
    a = rng.integers(lo, hi + 1, size=(d, d))
    s = a + a.T
    return [[Fraction(int(x)) for x in row] for row in s]


def _outer(v) -> list[list[Fraction]]:
    return [[Fraction(int(x) * int(y)) for y in v] for x in v]


def _complement_of_psd(rng, d: int) -> list[list[list[Fraction]]]:
    """Matrices orthogonal to a random integer PSD W of rank r (forces a boundary NO)."""
    r = int(rng.integers(1, d + 1))
    vs = [rng.integers(-2, 3, size=d) for _ in range(r)]
    w = np.zeros((d, d), dtype=int)
    for v in vs:
        w += np.outer(v, v)
    if not w.any():
        w[0, 0] = 1
    out = []
    for _ in range(int(rng.integers(1, max(2, d * (d + 1) // 2)))):
        s = np.array(_sym(rng, d), dtype=object)
        # remove the component along W with exact rationals
        ww = np.array([[Fraction(int(x)) for x in row] for row in w], dtype=object)
        c = (s * ww).sum() / (ww * ww).sum()
        out.append([[s[i][j] - c * ww[i][j] for j in range(d)] for i in range(d)])
    return out


def random_subspace(seed: int) -> list[list[list[Fraction]]]:
    """One spanning list in Sym(d), d <= 4, drawn from a seeded mix of families."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    family = seed % 4
    if family == 0:
        return [_sym(rng, d) for _ in range(int(rng.integers(1, d * (d + 1) // 2 + 1)))]
    if family == 1:
        return _complement_of_psd(rng, d)
    if family == 2:
        # contains a PSD matrix of low rank plus noise directions
        v = rng.integers(-2, 3, size=d)
        base = _outer(v)
        return [base] + [_sym(rng, d) for _ in range(int(rng.integers(0, d)))]
    # small spans: one or two matrices, often indefinite
    return [_sym(rng, d, -2, 2) for _ in range(int(rng.integers(1, 3)))]
