from math import comb

import pytest

from qtoric.bounds import (
    EXCEPTIONAL,
    cohomogeneity_one_predictions,
    homogeneous_check,
    lie_table,
    match_cohomogeneity_one,
    product_label,
    semisimple_candidates,
    symmetry_report,
)
from qtoric.catalogue import lookup, projective_lambda, standard_lambda
from qtoric.polytope import cube, simplex
from qtoric.qtype import Verdict


def labels(cands):
    return {product_label(c) for c in cands}


def test_lie_table_dimension_bound():
    table = lie_table(8)
    assert all(e.dim >= 3 * e.rank for e in table)
    assert [e.label for e in table if e.dim == 3 * e.rank] == ["A1"]
    assert {e.label for e in EXCEPTIONAL} <= {e.label for e in table}


def test_lie_table_known_entries():
    by = {e.label: e for e in lie_table(8)}
    assert (by["A2"].dim, by["A2"].weyl_order) == (8, 6)
    assert (by["B2"].dim, by["B2"].weyl_order) == (10, 8)
    assert (by["G2"].dim, by["G2"].weyl_order) == (14, 12)
    assert (by["D4"].dim, by["D4"].weyl_order) == (28, 192)
    assert by["E8"].dim == 248
    # B2 = C2 and A3 = D3 are listed once
    assert "C2" not in by and "D3" not in by


@pytest.mark.parametrize("r", range(1, 7))
def test_tight_budget_leaves_only_su2_power(r):
    assert labels(semisimple_candidates(3 * r, r)) == {"A1" if r == 1 else f"A1^{r}"}


def test_rank_at_most_enumeration():
    assert labels(semisimple_candidates(6, 2, exact_rank=False)) == {"A1", "A1^2"}
    assert labels(semisimple_candidates(8, 2, exact_rank=False)) == {"A1", "A1^2", "A2"}
    assert semisimple_candidates(2, 1) == []
    with pytest.raises(ValueError):
        semisimple_candidates(-1, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_cube_report(n):
    rep = symmetry_report(cube(n), standard_lambda(n), Verdict.YES)
    assert (rep.m, rep.edim, rep.t_lower, rep.t_upper, rep.nss_upper) == (2 * n, n, n, n, 3 * n)
    assert rep.facet_bound_ok and not rep.contradiction
    assert all(c.passed for c in rep.verdicts)


def test_cp2_report():
    rep = symmetry_report(simplex(2), projective_lambda(2), Verdict.NO)
    assert not rep.facet_bound_ok
    assert any(c.detail == "m=3 < 2n=4: not q-type" for c in rep.verdicts)


def test_contradiction_flag():
    rep = symmetry_report(simplex(2), projective_lambda(2), Verdict.YES)
    assert rep.contradiction


def test_homogeneous_examples():
    assert homogeneous_check(cube(2), standard_lambda(2), Verdict.YES).status == "consistent with (S^2)^2"
    assert homogeneous_check(simplex(2), projective_lambda(2), Verdict.NO).status == "not applicable"
    b = lookup("bott211")
    verdict = homogeneous_check(b.polytope, b.lam, Verdict.YES)
    assert verdict.status == "excluded as homogeneous"
    assert [c.name for c in verdict.checks if not c.passed] == ["p1_vanishes"]


@pytest.mark.parametrize("k", range(1, 7))
def test_predictions(k):
    pred = cohomogeneity_one_predictions(k)
    assert pred.euler_characteristic == 2 ** (k + 1) == 2 * pred.weyl_order
    assert pred.n == k + 1
    assert pred.base_poincare == tuple(comb(k, i) for i in range(k + 1))
    assert sum(pred.base_poincare) == 2**k
    assert pred.total_h2 == k + 1 == pred.torus_bound
    assert pred.structure == f"S^2-bundle over (S^2)^{k}"
    assert cohomogeneity_one_predictions(k, with_circle=True).group_dim == 3 * k + 1


def test_prediction_examples():
    assert cohomogeneity_one_predictions(2).base_poincare == (1, 2, 1)
    p3 = cohomogeneity_one_predictions(3)
    assert (p3.euler_characteristic, p3.total_h2) == (16, 4)
    with pytest.raises(ValueError):
        cohomogeneity_one_predictions(0)


def test_match_cohomogeneity_one():
    for n in range(2, 5):
        assert match_cohomogeneity_one(cube(n), standard_lambda(n)) == [n - 1]
    assert match_cohomogeneity_one(simplex(2), projective_lambda(2)) == []
    assert match_cohomogeneity_one(cube(1), standard_lambda(1)) == []


def test_product_of_intervals_attains_semisimple_bound():
    from qtoric.polytope import product

    p = product(product(cube(1), cube(1)), cube(1))
    lam = [[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]]
    rep = symmetry_report(p, lam, Verdict.YES)
    su2_cubed = semisimple_candidates(9, 3)[0]
    assert rep.nss_upper == 9 == sum(f.dim for f in su2_cubed)
    assert labels(semisimple_candidates(3, 1)) == {"A1"}
