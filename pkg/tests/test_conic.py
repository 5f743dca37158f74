from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from qtoric import conic, exact

F = Fraction


def m(rows):
    return exact.frac_matrix(rows)


@given(st.fractions(min_value=-100, max_value=100, max_denominator=50))
def test_rationalize_recovers_small_fractions(x):
    assert conic.rationalize([float(x)], 1000) == [x]


def test_interior_point_is_rational_and_strict():
    z = conic.find_psd_point(m([[0, 0], [0, 0]]), [m([[1, 0], [0, 0]]), m([[0, 0], [0, 1]])], strict=True)
    assert z is not None
    assert exact.is_pd(exact.combine(z, [m([[1, 0], [0, 0]]), m([[0, 0], [0, 1]])]))


def test_unique_boundary_point():
    # [[0, z], [z, 1]] is PSD only at z = 0
    f0, fs = m([[0, 0], [0, 1]]), [m([[0, 1], [1, 0]])]
    assert conic.find_psd_point(f0, fs) == [0]
    assert conic.find_psd_point(f0, fs, strict=True) is None


def test_face_with_rational_kernel():
    # F(z) = v v^T + z (w w^T - v v^T) with v, w independent: PSD exactly for z in [0, 1]
    v, w = [1, F(1, 3), F(2, 7)], [0, 1, F(-1, 5)]
    vv = [[a * b for b in v] for a in v]
    ww = [[a * b for b in w] for a in w]
    fs = [exact.add(ww, exact.scale(-1, vv)), [[F(0)] * 3 for _ in range(3)]]
    z = conic.find_psd_point(vv, fs)
    assert z is not None and 0 <= z[0] <= 1


def test_infeasible_returns_none():
    log = conic.SearchLog()
    assert conic.find_psd_point(m([[-1, 0], [0, -1]]), [m([[0, 1], [1, 0]])], log_=log) is None
    assert log.margins and log.margins[0] < 0
    assert "margins" in log.to_json()


def test_empty_family():
    assert conic.find_psd_point(m([[1]]), []) == []
    assert conic.find_psd_point(m([[-1]]), []) is None


def test_seeded_runs_repeat():
    rng_a, rng_b = np.random.default_rng(5), np.random.default_rng(5)
    f0 = m([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    fs = [m([[1, 0, 0], [0, 0, 0], [0, 0, 0]]), m([[0, 0, 0], [0, 1, 0], [0, 0, 0]])]
    assert conic.find_psd_point(f0, fs, rng=rng_a) == conic.find_psd_point(f0, fs, rng=rng_b)
