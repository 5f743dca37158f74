from fractions import Fraction

import pytest

from qtoric import exact
from qtoric.catalogue import catalogue, hirzebruch_lambda, projective_lambda, standard_lambda
from qtoric.charalg import pontrjagin_p1, presentation
from qtoric.oracle import (
    OracleCapExceeded,
    brute_ring_basis,
    brute_ring_dims,
    brute_sos_search,
    grid,
    psd_by_minors,
)
from qtoric.polytope import cube, h_vector, simplex
from qtoric.qtype import Verdict, p1_negative_sos

small = [b for b in catalogue() if b.polytope.dim <= 4 and b.polytope.num_facets <= 10]


def test_examples():
    assert brute_ring_dims(cube(2), standard_lambda(2)) == (1, 2, 1)
    assert brute_ring_dims(simplex(3), projective_lambda(3)) == (1, 1, 1, 1)
    assert brute_ring_dims(cube(3), standard_lambda(3)) == (1, 3, 3, 1)


@pytest.mark.parametrize("b", small, ids=lambda b: b.name)
def test_ring_dims_match_h_vector_and_presentation(b):
    dims = brute_ring_dims(b.polytope, b.lam)
    assert dims == tuple(h_vector(b.polytope))
    assert dims == presentation(b.polytope, b.lam).betti()


def test_monomial_basis_is_square_free_on_faces():
    basis = brute_ring_basis(cube(2), standard_lambda(2))
    assert basis.by_degree[0] == ((0, 0, 0, 0),)
    assert all(sum(e) == 1 for e in basis.by_degree[1])


def test_caps():
    with pytest.raises(OracleCapExceeded):
        brute_ring_dims(cube(5), standard_lambda(5))
    pres = presentation(cube(4), standard_lambda(4))
    with pytest.raises(OracleCapExceeded):
        brute_sos_search(pres, (0,) * pres.h4_dim, 2)
    pres = presentation(cube(2), standard_lambda(2))
    with pytest.raises(OracleCapExceeded):
        brute_sos_search(pres, (0,), 64)
    with pytest.raises(OracleCapExceeded):
        brute_sos_search(presentation(cube(3), standard_lambda(3)), (0, 0, 0), 32, bound=8, max_points=1000)


def test_psd_by_minors():
    F = Fraction
    assert psd_by_minors([[F(1), F(1)], [F(1), F(1)]])
    assert not psd_by_minors([[F(0), F(1)], [F(1), F(0)]])
    assert not psd_by_minors([[F(1), F(0)], [F(0), F(-1)]])


def test_grid():
    g = grid(2, 1)
    assert g[0] == 0
    assert set(g) == {Fraction(x, 2) for x in range(-2, 3)}


def test_sos_examples():
    pres = presentation(cube(2), standard_lambda(2))
    found = brute_sos_search(pres, (Fraction(0),), 1)
    assert found.found and all(x == 0 for row in found.gram for x in row)
    pres = presentation(simplex(2), projective_lambda(2))
    for cap in (1, 8, 32):
        assert not brute_sos_search(pres, (Fraction(3),), cap, bound=20).found


@pytest.mark.parametrize("b", [b for b in small if presentation(b.polytope, b.lam).h2_dim <= 3], ids=lambda b: b.name)
def test_agreement_with_solver(b):
    pres = presentation(b.polytope, b.lam)
    p1 = pontrjagin_p1(b.polytope, b.lam, pres)
    solver = p1_negative_sos(pres, p1.image)
    oracle = brute_sos_search(pres, p1.image, 2, bound=2)
    if oracle.found:
        assert solver.verdict is Verdict.YES
    if solver.verdict is Verdict.NO:
        assert not oracle.found
    if solver.verdict is Verdict.YES:
        # a certificate whose coordinates all lie on the grid must be found by the oracle
        vec = exact.sym_to_sym2(exact.frac_matrix(solver.evidence.psd_gram), pres.monomials)
        on_grid = all(abs(x) <= 2 and x.denominator <= 2 for x in vec)
        assert oracle.found or not on_grid


@pytest.mark.parametrize("a", range(-3, 4))
def test_hirzebruch_agreement(a):
    lam = hirzebruch_lambda(a)
    pres = presentation(cube(2), lam)
    p1 = pontrjagin_p1(cube(2), lam, pres)
    assert brute_sos_search(pres, p1.image, 2).found
    assert p1_negative_sos(pres, p1.image).verdict is Verdict.YES
