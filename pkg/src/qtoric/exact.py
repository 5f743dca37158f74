"""Exact linear algebra over Q.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  Nothing in
here touches floating point; the numeric search in :mod:`qtoric.conic` only
ever proposes candidates that are re-checked with these routines.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def frac_vector(values: Iterable) -> Vector:
    return [Fraction(v) for v in values]


def frac_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def zeros(rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def add(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Sequence[Sequence[Fraction]]) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def combine(coeffs: Sequence[Fraction], mats: Sequence[Matrix], base: Matrix | None = None) -> Matrix:
    """Return ``base + sum(c_i * M_i)``."""
    if base is None:
        d = len(mats[0]) if mats else 0
        out = zeros(d)
    else:
        out = [list(row) for row in base]
    for c, m in zip(coeffs, mats):
        if c == 0:
            continue
        for i, row in enumerate(m):
            orow = out[i]
            for j, x in enumerate(row):
                if x:
                    orow[j] += c * x
    return out


def trace(a: Sequence[Sequence[Fraction]]) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def pairing(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Fraction:
    """Trace pairing <A, B> = tr(A^T B)."""
    return sum((x * y for ra, rb in zip(a, b) for x, y in zip(ra, rb)), Fraction(0))


def is_symmetric(a: Sequence[Sequence[Fraction]]) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def is_zero(a: Sequence[Sequence[Fraction]]) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [list(row) for row in a]
    if not m:
        return [], []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vector]:
    """Basis of the right kernel {x : A x = 0}.

    ``ncols`` is needed when ``a`` has no rows.
    """
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(a[0])
    r, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(r, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int | None = None) -> Vector | None:
    """One solution of A x = b (free variables set to zero), or None."""
    if not a:
        if any(x != 0 for x in b):
            return None
        return [Fraction(0)] * (ncols or 0)
    n = len(a[0])
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    r, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(r, piv):
        x[p] = row[n]
    return x


def affine_solutions(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int) -> tuple[Vector, list[Vector]] | None:
    """Particular solution and kernel basis of A x = b, or None if inconsistent."""
    x0 = solve(a, b, ncols)
    if x0 is None:
        return None
    return x0, nullspace(a, ncols)


def column_basis(a: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Independent columns spanning the column space."""
    _, piv = rref(a)
    return [[row[c] for row in a] for c in piv]


def clear_denominators(a: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale by the positive lcm of all denominators; return integer matrix and factor."""
    c = 1
    for row in a:
        for x in row:
            c = lcm(c, Fraction(x).denominator)
    return [[int(Fraction(x) * c) for x in row] for row in a], c


def primitive(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """Positive rescaling of a nonzero matrix to integers with gcd 1."""
    ints, _ = clear_denominators(a)
    g = 0
    for row in ints:
        for x in row:
            g = gcd(g, x)
    if g == 0:
        return [list(row) for row in a]
    return [[Fraction(x // g) for x in row] for row in ints]


def independent_subset(vectors: Sequence[Sequence[Fraction]]) -> list[int]:
    """Indices of a maximal linearly independent subfamily (first come, first kept)."""
    if not vectors:
        return []
    return rref(transpose(vectors))[1]


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant via Bareiss elimination on the cleared integer matrix."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m, c = clear_denominators(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], c**n)


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def symmetric_pivots(a: Sequence[Sequence[Fraction]]) -> tuple[str, list[Fraction]]:
    """Classify a symmetric rational matrix by fraction-free symmetric elimination.

    The matrix is scaled to integers and eliminated Bareiss-style with diagonal
    pivoting, so every intermediate entry is an integer minor.  Returns the
    classification ``"pd"``, ``"psd"`` or ``"indefinite"`` together with the
    LDL^T pivots found before stopping.
    """
    n = len(a)
    if not is_symmetric(a):
        raise ValueError("matrix is not symmetric")
    if n == 0:
        return "pd", []
    m, c = clear_denominators(a)
    active = list(range(n))
    prev = 1
    pivots: list[Fraction] = []
    while active:
        best = max(active, key=lambda i: m[i][i])
        p = m[best][best]
        if p <= 0:
            if p < 0 or any(m[i][i] < 0 for i in active):
                return "indefinite", pivots
            # zero diagonal: a PSD remainder must vanish identically
            if any(m[i][j] != 0 for i in active for j in active):
                return "indefinite", pivots
            return "psd", pivots
        pivots.append(Fraction(p, prev * c))
        active.remove(best)
        for i in active:
            mi = m[i]
            for j in active:
                num = p * mi[j] - mi[best] * m[best][j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                mi[j] = q
            # rows are updated in place; column `best` is no longer read for i
        prev = p
    return "pd", pivots


def is_pd(a: Sequence[Sequence[Fraction]]) -> bool:
    return symmetric_pivots(a)[0] == "pd"


def is_psd(a: Sequence[Sequence[Fraction]]) -> bool:
    return symmetric_pivots(a)[0] in ("pd", "psd")


def ldl_terms(a: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, Vector]]:
    """Write a PSD matrix as sum of d * l l^T with d > 0 (outer-product LDL^T).

    Raises ValueError if the matrix is not positive semidefinite.
    """
    n = len(a)
    work = [list(row) for row in a]
    terms = []
    remaining = set(range(n))
    while remaining:
        best = max(remaining, key=lambda i: work[i][i])
        d = work[best][best]
        if d <= 0:
            if d < 0 or any(work[i][j] != 0 for i in remaining for j in remaining):
                raise ValueError("matrix is not positive semidefinite")
            break
        col = [work[i][best] / d for i in range(n)]
        for i in remaining:
            if col[i] == 0:
                continue
            for j in remaining:
                work[i][j] -= d * col[i] * col[j]
        remaining.discard(best)
        terms.append((d, col))
    return terms


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def four_squares(q: Fraction) -> list[Fraction]:
    """Rationals whose squares sum to q >= 0 (at most four, zeros dropped)."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative number is not a sum of squares")
    if q == 0:
        return []
    root = rational_sqrt(q)
    if root is not None:
        return [root]
    from sympy.solvers.diophantine.diophantine import sum_of_four_squares

    # q = p/r = (p r) / r^2
    parts = sum_of_four_squares(q.numerator * q.denominator)
    return [Fraction(int(x), q.denominator) for x in parts if x]


def sym_to_sym2(s: Sequence[Sequence[Fraction]], monomials: Sequence[tuple[int, int]]) -> Vector:
    """Coordinates of the quadratic form x^T S x on the monomials x_a x_b (a <= b)."""
    return [s[a][b] if a == b else 2 * s[a][b] for a, b in monomials]


def sym2_to_sym(vec: Sequence[Fraction], monomials: Sequence[tuple[int, int]], d: int) -> Matrix:
    out = zeros(d)
    for c, (a, b) in zip(vec, monomials):
        if a == b:
            out[a][a] = Fraction(c)
        else:
            out[a][b] = out[b][a] = Fraction(c) / 2
    return out


def sym_monomials(d: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(d) for b in range(a, d)]
