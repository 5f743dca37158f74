"""Brute-force reference computations for small instances.

Nothing here shares code with the main pipeline beyond the input types: the
ring dimensions come from row reduction over every monomial in the v-variables,
and PSD is tested by principal minors computed with cofactor expansion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charalg import GradedRingPresentation, as_lambda
from .polytope import SimplePolytope

MAX_N = 4
MAX_M = 10
MAX_DENOMINATOR = 32


class OracleCapExceeded(RuntimeError):
    """Instance is larger than the brute-force routines accept."""


@dataclass(frozen=True)
class MonomialBasis:
    """Standard monomials of the face-ring quotient, per degree, as exponent tuples."""

    by_degree: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.by_degree)


def _sparse_rank_and_free(rows: list[dict], columns: list) -> tuple[int, list]:
    """Gaussian elimination on dict rows; returns (rank, non-pivot columns in order)."""
    pivots: dict = {}  # column -> reduced row with leading entry 1 there
    order = {c: i for i, c in enumerate(columns)}
    for row in rows:
        r = dict(row)
        while r:
            lead = min(r, key=order.__getitem__)
            if lead not in pivots:
                inv = 1 / r[lead]
                pivots[lead] = {c: v * inv for c, v in r.items()}
                break
            factor = r[lead]
            for c, v in pivots[lead].items():
                nv = r.get(c, 0) - factor * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return len(pivots), [c for c in columns if c not in pivots]


def _is_face(p: SimplePolytope, support: Sequence[int]) -> bool:
    s = set(support)
    return any(s <= v for v in map(set, p.vertices))


def _degree_monomials(m: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(m), degree):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def brute_ring_basis(p: SimplePolytope, lam) -> MonomialBasis:
    """Quotient of Q[v_0..v_{m-1}] by non-face monomials and the linear forms, degree by degree."""
    n, m = p.dim, p.num_facets
    if n > MAX_N or m > MAX_M:
        raise OracleCapExceeded(f"n={n}, m={m} exceeds n <= {MAX_N}, m <= {MAX_M}")
    lam = as_lambda(lam)
    thetas = [{i: Fraction(lam.rows[j][i]) for i in range(m) if lam.rows[j][i]} for j in range(n)]
    by_degree = []
    for degree in range(n + 1):
        columns = [e for e in _degree_monomials(m, degree) if _is_face(p, [i for i, x in enumerate(e) if x])]
        alive = set(columns)
        rows = []
        for mono in _degree_monomials(m, degree - 1) if degree else []:
            for theta in thetas:
                row: dict = {}
                for i, c in theta.items():
                    e = list(mono)
                    e[i] += 1
                    e = tuple(e)
                    if e in alive:
                        row[e] = row.get(e, 0) + c
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
        # reverse order so pivots land on the lexicographically large monomials
        _, free = _sparse_rank_and_free(rows, columns[::-1])
        by_degree.append(tuple(sorted(free)))
    return MonomialBasis(tuple(by_degree))


def brute_ring_dims(p: SimplePolytope, lam) -> tuple[int, ...]:
    return brute_ring_basis(p, lam).dims


def _det(a: list[list[Fraction]]) -> Fraction:
    if not a:
        return Fraction(1)
    if len(a) == 1:
        return a[0][0]
    total = Fraction(0)
    for j, x in enumerate(a[0]):
        if x:
            minor = [row[:j] + row[j + 1 :] for row in a[1:]]
            total += (-1) ** j * x * _det(minor)
    return total


def psd_by_minors(s: Sequence[Sequence[Fraction]]) -> bool:
    """A symmetric matrix is PSD iff every principal minor is nonnegative."""
    d = len(s)
    for size in range(1, d + 1):
        for idx in itertools.combinations(range(d), size):
            if _det([[s[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def grid(denominator_cap: int, bound: int) -> list[Fraction]:
    """All rationals p/q with 1 <= q <= cap and |p/q| <= bound, simplest first."""
    values = {Fraction(num, q) for q in range(1, denominator_cap + 1) for num in range(-bound * q, bound * q + 1)}
    return sorted(values, key=lambda x: (x.denominator, abs(x), x < 0))


@dataclass(frozen=True)
class OracleSearch:
    found: bool
    gram: tuple[tuple[Fraction, ...], ...] | None
    points: int


def brute_sos_search(
    pres: GradedRingPresentation,
    p1_image: Sequence[Fraction],
    denominator_cap: int,
    *,
    bound: int = 2,
    max_points: int = 200_000,
) -> OracleSearch:
    """Look for a PSD S with class -p_1 among bounded-denominator points of the slice.

    The slice {x : A x = -p_1} is parametrised by its free coordinates in
    reduced row echelon form; each free coordinate runs over ``grid``.
    """
    k = pres.h2_dim
    if k > 3:
        raise OracleCapExceeded(f"dim H^2 = {k} exceeds 3")
    if denominator_cap > MAX_DENOMINATOR:
        raise OracleCapExceeded(f"denominator cap {denominator_cap} exceeds {MAX_DENOMINATOR}")
    monos = [(a, b) for a in range(k) for b in range(a, k)]
    ncols = len(monos)
    a = [list(r) for r in pres.sym2_to_h4]
    rows = [r + [-Fraction(t)] for r, t in zip(a, p1_image)]

    # plain Gauss-Jordan on the augmented system
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return OracleSearch(False, None, 0)
    free = [c for c in range(ncols) if c not in pivots]
    values = grid(denominator_cap, bound)
    total = len(values) ** len(free)
    if total > max_points:
        raise OracleCapExceeded(f"{total} grid points exceed max_points={max_points}")

    points = 0
    for choice in itertools.product(values, repeat=len(free)):
        points += 1
        x = [Fraction(0)] * ncols
        for c, v in zip(free, choice):
            x[c] = v
        for i, c in enumerate(pivots):
            x[c] = rows[i][-1] - sum(rows[i][f] * x[f] for f in free)
        s = [[Fraction(0)] * k for _ in range(k)]
        for val, (i, j) in zip(x, monos):
            if i == j:
                s[i][i] = val
            else:
                s[i][j] = s[j][i] = val / 2
        if psd_by_minors(s):
            return OracleSearch(True, tuple(tuple(row) for row in s), points)
    return OracleSearch(False, None, points)
