from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from instances import random_subspace
from qtoric import exact
from qtoric.catalogue import projective_lambda, standard_lambda
from qtoric.charalg import pontrjagin_p1, presentation
from qtoric.polytope import cube, simplex
from qtoric.qtype import (
    CertificateError,
    DualWitness,
    ImplicationViolation,
    PdCertificate,
    SosCertificate,
    Undecided,
    Verdict,
    is_q_type,
    lemma_consistency,
    p1_negative_sos,
    pd_in_subspace,
    try_pd_certificate,
    try_subspace_witness,
    verify_affine_witness,
    verify_pd_certificate,
    verify_sos_certificate,
    verify_subspace_witness,
)

F = Fraction


def m(rows):
    return exact.frac_matrix(rows)


def test_identity_is_certified():
    out = pd_in_subspace([[[1, 0], [0, 1]]])
    assert isinstance(out, PdCertificate)
    assert exact.frac_matrix(out.form) == m([[1, 0], [0, 1]])


def test_indefinite_line_is_refuted_by_identity():
    out = pd_in_subspace([[[1, 0], [0, -1]]])
    assert isinstance(out, DualWitness)
    assert exact.frac_matrix(out.witness) == m([[1, 0], [0, 1]])


def test_input_errors():
    with pytest.raises(ValueError):
        pd_in_subspace([])
    with pytest.raises(ValueError):
        pd_in_subspace([[[1, 0], [0, 1]], [[1]]])
    with pytest.raises(ValueError):
        pd_in_subspace([[[1, 2], [0, 1]]])


def test_square_kernel_contains_pd():
    pres = presentation(cube(2), standard_lambda(2))
    assert isinstance(pd_in_subspace(pres.kernel_forms()), PdCertificate)


@pytest.mark.parametrize("n", range(1, 5))
def test_cubes_are_q_type_with_zero_sos(n):
    pres = presentation(cube(n), standard_lambda(n))
    qt = is_q_type(pres)
    assert qt.verdict is Verdict.YES and qt.meets_facet_bound
    sos = p1_negative_sos(pres, pontrjagin_p1(cube(n), standard_lambda(n), pres).image)
    assert sos.verdict is Verdict.YES
    assert exact.is_zero(exact.frac_matrix(sos.evidence.psd_gram))
    assert sos.evidence.square_list == ()


def test_s2_form_is_u_squared():
    pres = presentation(simplex(1), projective_lambda(1))
    qt = is_q_type(pres)
    assert qt.verdict is Verdict.YES
    assert qt.definite_form == [[F(1)]]


def test_cp2_refutations():
    pres = presentation(simplex(2), projective_lambda(2))
    assert is_q_type(pres).verdict is Verdict.NO
    sos = p1_negative_sos(pres, (F(3),))
    assert sos.verdict is Verdict.NO
    w = sos.evidence
    assert exact.frac_matrix(w.witness) == [[F(1)]]
    # -p1 = -3u^2 on the one-dimensional slice
    assert w.pairing < 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_projective_spaces_fail_screen_and_solver(n):
    pres = presentation(simplex(n), projective_lambda(n))
    qt = is_q_type(pres)
    assert not qt.meets_facet_bound
    assert qt.verdict is Verdict.NO


def test_lemma_consistency_examples():
    rep = lemma_consistency(presentation(cube(2), standard_lambda(2)))
    assert (rep.q_type, rep.negative_sos, rep.consistent) == (Verdict.YES, Verdict.YES, True)
    rep = lemma_consistency(presentation(simplex(2), projective_lambda(2)))
    assert (rep.q_type, rep.negative_sos) == (Verdict.NO, Verdict.NO)


def test_lemma_consistency_sweep(catalogue_bundles):
    for b in catalogue_bundles:
        rep = lemma_consistency(presentation(b.polytope, b.lam))
        assert rep.consistent


def test_nontrivial_sos_certificates():
    from qtoric.catalogue import lookup

    for name in ("bott110", "bott211", "pentagon", "hexagon"):
        b = lookup(name)
        pres = presentation(b.polytope, b.lam)
        p1 = pontrjagin_p1(b.polytope, b.lam, pres)
        assert not p1.vanishes
        sos = p1_negative_sos(pres, p1.image)
        assert sos.verdict is Verdict.YES
        assert sos.evidence.square_list
        verify_sos_certificate(sos.evidence, pres.sym2_to_h4, p1.image)


# -- verifiers reject tampered evidence -----------------------------------------


def test_tampered_pd_certificate():
    cert = pd_in_subspace([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    assert isinstance(cert, PdCertificate)
    bad = PdCertificate(cert.form, tuple(c + 1 for c in cert.coefficients), cert.pivots)
    with pytest.raises(CertificateError):
        verify_pd_certificate(bad, [m([[1, 0], [0, 1]]), m([[0, 1], [1, 0]])])
    with pytest.raises(CertificateError):
        verify_pd_certificate(PdCertificate(((F(0),),), (F(0),), ()), [[[F(1)]]])


def test_tampered_witnesses():
    span = [m([[1, 0], [0, -1]])]
    with pytest.raises(CertificateError):
        verify_subspace_witness(DualWitness(((F(1), F(0)), (F(0), F(2)))), span)
    with pytest.raises(CertificateError):
        verify_subspace_witness(DualWitness(((F(0), F(0)), (F(0), F(0)))), span)
    with pytest.raises(CertificateError):
        verify_subspace_witness(DualWitness(((F(1), F(2)), (F(2), F(1)))), [m([[0, 0], [0, 0]])])
    with pytest.raises(CertificateError):
        verify_affine_witness(DualWitness(((F(1),),)), [], [[F(3)]])


def test_tampered_sos_certificate():
    a = [[F(1), F(0), F(1)]]
    good = SosCertificate(((F(1), F(0)), (F(0), F(0))), ((F(1), F(0)),))
    verify_sos_certificate(good, a, [F(-1)])
    with pytest.raises(CertificateError):
        verify_sos_certificate(good, a, [F(1)])
    with pytest.raises(CertificateError):
        verify_sos_certificate(SosCertificate(good.psd_gram, ((F(1), F(1)),)), a, [F(-1)])
    with pytest.raises(CertificateError):
        verify_sos_certificate(SosCertificate(((F(-1), F(0)), (F(0), F(0))), ()), a, [F(1)])


# -- duality properties on random subspaces -------------------------------------


@pytest.mark.parametrize("seed", range(0, 240, 3))
def test_never_both(seed):
    span = random_subspace(seed)
    cert = try_pd_certificate(span, rng=np.random.default_rng(seed))
    wit = try_subspace_witness(span, rng=np.random.default_rng(seed))
    assert cert is None or wit is None
    assert cert is not None or wit is not None


def _neg(span):
    return [[[-x for x in row] for row in mat] for mat in span]


def _scale(c, span):
    return [[[c * x for x in row] for row in mat] for mat in span]


def _kind(out):
    return type(out).__name__


@pytest.mark.parametrize("seed", range(1, 160, 7))
def test_negation_and_scaling(seed):
    span = random_subspace(seed)
    base = _kind(pd_in_subspace(span, seed=seed))
    assert base != "Undecided"
    assert _kind(pd_in_subspace(_neg(span), seed=seed)) == base
    assert _kind(pd_in_subspace(_scale(F(7, 3), span), seed=seed)) == base


@given(st.integers(1, 3), st.data())
def test_explicit_pd_member_is_found(d, data):
    # span of a random PD matrix plus arbitrary extras always contains a PD member
    vs = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=d, max_size=d))
    g = [[sum(v[i] * v[j] for v in vs) + (i == j) for j in range(d)] for i in range(d)]
    extra = data.draw(st.lists(st.integers(-3, 3), min_size=d * d, max_size=d * d))
    e = [[extra[i * d + j] + extra[j * d + i] for j in range(d)] for i in range(d)]
    out = pd_in_subspace([e, g])
    assert isinstance(out, PdCertificate)


def test_implication_violation_is_raised(monkeypatch):
    import qtoric.qtype as qt

    pres = presentation(cube(2), standard_lambda(2))
    real = qt.is_q_type

    def fake(p, **kw):
        r = real(p, **kw)
        return qt.QTypeResult(Verdict.NO, DualWitness(((F(1), F(0)), (F(0), F(1)))), r.spanning, r.meets_facet_bound)

    monkeypatch.setattr(qt, "is_q_type", fake)
    with pytest.raises(ImplicationViolation):
        qt.lemma_consistency(pres)


def test_undecided_is_blocked_from_consistency(monkeypatch):
    import qtoric.qtype as qt

    pres = presentation(cube(2), standard_lambda(2))
    real = qt.p1_negative_sos
    monkeypatch.setattr(
        qt, "p1_negative_sos", lambda *a, **k: qt.SosResult(Verdict.UNDECIDED, Undecided("x"), real(*a, **k).slice_point)
    )
    with pytest.raises(ValueError):
        qt.lemma_consistency(pres)
