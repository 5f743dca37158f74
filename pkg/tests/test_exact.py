from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtoric import exact

small = st.integers(-6, 6)


def sq_matrix(d):
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d)


def sym_matrix(max_d=4):
    return st.integers(1, max_d).flatmap(
        lambda d: sq_matrix(d).map(lambda a: [[Fraction(a[i][j] + a[j][i]) for j in range(d)] for i in range(d)])
    )


@given(st.integers(1, 4).flatmap(sq_matrix))
def test_det_matches_numpy(a):
    d = exact.det(exact.frac_matrix(a))
    assert d.denominator == 1
    assert abs(float(d) - np.linalg.det(np.array(a, dtype=float))) < 1e-6 * max(1.0, abs(float(d)))


@given(st.integers(1, 4).flatmap(sq_matrix))
def test_inverse_is_exact(a):
    m = exact.frac_matrix(a)
    if exact.det(m) == 0:
        with pytest.raises(ZeroDivisionError):
            exact.inverse(m)
        return
    assert exact.matmul(m, exact.inverse(m)) == exact.identity(len(a))


@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace_and_rank(a):
    m = exact.frac_matrix(a)
    null = exact.nullspace(m)
    assert exact.rank(m) + len(null) == 5
    for v in null:
        assert exact.matvec(m, v) == [0] * len(a)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_solve_consistent_system(a, x):
    m = exact.frac_matrix(a)
    b = exact.matvec(m, exact.frac_vector(x))
    sol = exact.solve(m, b)
    assert sol is not None and exact.matvec(m, sol) == b


def test_solve_inconsistent():
    assert exact.solve([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]], [Fraction(1), Fraction(3)]) is None


@given(sym_matrix())
def test_symmetric_pivots_agree_with_eigenvalues(s):
    kind, _ = exact.symmetric_pivots(s)
    eig = np.linalg.eigvalsh(np.array(s, dtype=float))
    if kind == "pd":
        assert eig.min() > 0
    elif kind == "psd":
        assert eig.min() > -1e-9 and abs(eig).min() < 1e-6
    else:
        assert eig.min() < 0


@given(st.integers(1, 4).flatmap(lambda d: st.lists(st.lists(small, min_size=d, max_size=d), min_size=1, max_size=3)))
def test_gram_products_are_psd_and_decompose(vs):
    d = len(vs[0])
    s = exact.zeros(d)
    for v in vs:
        for i in range(d):
            for j in range(d):
                s[i][j] += v[i] * v[j]
    assert exact.is_psd(s)
    total = exact.zeros(d)
    for coeff, col in exact.ldl_terms(s):
        assert coeff > 0
        for i in range(d):
            for j in range(d):
                total[i][j] += coeff * col[i] * col[j]
    assert total == s


def test_ldl_rejects_indefinite():
    with pytest.raises(ValueError):
        exact.ldl_terms([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]])


def test_psd_with_zero_pivot_needs_pivoting():
    s = exact.frac_matrix([[0, 0, 0], [0, 2, 1], [0, 1, 1]])
    assert exact.symmetric_pivots(s)[0] == "psd"
    assert exact.symmetric_pivots(exact.frac_matrix([[0, 1], [1, 0]]))[0] == "indefinite"
    assert exact.symmetric_pivots(exact.frac_matrix([[0, 0], [0, -1]]))[0] == "indefinite"


@given(st.integers(0, 10**6), st.integers(1, 10**4))
def test_four_squares(p, q):
    r = Fraction(p, q)
    parts = exact.four_squares(r)
    assert sum(x * x for x in parts) == r
    assert len(parts) <= 4


def test_rational_sqrt():
    assert exact.rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact.rational_sqrt(Fraction(2)) is None


@given(sym_matrix())
def test_sym2_round_trip(s):
    d = len(s)
    monos = exact.sym_monomials(d)
    vec = exact.sym_to_sym2(s, monos)
    assert exact.sym2_to_sym(vec, monos, d) == s
    # the trace pairing is the dot product with the unscaled upper triangle
    t = exact.frac_matrix([[i + j for j in range(d)] for i in range(d)])
    upper = [t[a][b] for a, b in monos]
    assert exact.pairing(s, t) == sum(x * y for x, y in zip(vec, upper))


def test_primitive_rescales_positively():
    m = exact.frac_matrix([[Fraction(2, 3), Fraction(-4, 3)], [Fraction(-4, 3), Fraction(10, 3)]])
    assert exact.primitive(m) == exact.frac_matrix([[1, -2], [-2, 5]])
