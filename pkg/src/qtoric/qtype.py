"""Exact feasibility decisions: q-type and p_1 = -(sum of squares).

Two conic questions about forms in the u-basis of H^2:

* does the quadratic part of the defining ideal contain a positive definite
  form?  (a definite form, up to sign)
* is there a PSD Gram matrix S whose class in H^4 is -p_1?

Each answer carries an object that can be re-checked with exact rational
arithmetic alone: a PD member / PSD Gram matrix with explicit rational squares
on the YES side, a PSD dual witness on the NO side.  When the numeric search
cannot produce something that verifies, the outcome is :class:`Undecided`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import conic, exact
from .charalg import GradedRingPresentation
from .exact import Matrix


class CertificateError(ValueError):
    """A certificate or witness failed exact verification."""


class ImplicationViolation(AssertionError):
    """p_1 = -(sum of squares) was certified but q-type was not."""


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


def _freeze(m: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _thaw(m) -> Matrix:
    return [list(row) for row in m]


@dataclass(frozen=True)
class PdCertificate:
    """A positive definite member of a subspace, with its coordinates."""

    form: tuple[tuple[Fraction, ...], ...]
    coefficients: tuple[Fraction, ...]
    pivots: tuple[Fraction, ...]


@dataclass(frozen=True)
class DualWitness:
    """Nonzero PSD matrix orthogonal to the subspace.

    For the affine problem ``pairing`` is <witness, S> for any S on the slice,
    and is negative.
    """

    witness: tuple[tuple[Fraction, ...], ...]
    pairing: Fraction | None = None


@dataclass(frozen=True)
class Undecided:
    reason: str
    numeric: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SosCertificate:
    """PSD Gram matrix S with class -p_1 in H^4, and rational a_k with sum a_k a_k^T = S."""

    psd_gram: tuple[tuple[Fraction, ...], ...]
    square_list: tuple[tuple[Fraction, ...], ...]


SubspaceOutcome = Union[PdCertificate, DualWitness, Undecided]


def _check_family(mats: Sequence[Matrix]) -> int:
    if not mats:
        raise ValueError("empty spanning list")
    d = len(mats[0])
    if d < 1:
        raise ValueError("matrices must have dimension at least 1")
    for m in mats:
        if len(m) != d or any(len(r) != d for r in m):
            raise ValueError("spanning matrices have mismatched dimensions")
        if not exact.is_symmetric(m):
            raise ValueError("spanning matrices must be symmetric")
    return d


def _orthogonal_equations(mats: Sequence[Matrix], d: int) -> list[list[Fraction]]:
    """Rows expressing <W, M> = 0 in the upper-triangular coordinates of W."""
    monos = exact.sym_monomials(d)
    return [[m[a][b] if a == b else 2 * m[a][b] for a, b in monos] for m in mats]


def _upper_to_sym(w: Sequence[Fraction], d: int) -> Matrix:
    out = exact.zeros(d)
    for c, (a, b) in zip(w, exact.sym_monomials(d)):
        out[a][b] = out[b][a] = Fraction(c)
    return out


# -- verification ----------------------------------------------------------


def verify_pd_certificate(cert: PdCertificate, spanning: Sequence[Matrix]) -> None:
    form = _thaw(cert.form)
    if len(cert.coefficients) != len(spanning):
        raise CertificateError("coefficient count does not match the spanning list")
    if exact.combine(list(cert.coefficients), [_thaw(m) for m in spanning]) != form:
        raise CertificateError("form is not the stated combination of the spanning matrices")
    kind, pivots = exact.symmetric_pivots(form)
    if kind != "pd":
        raise CertificateError(f"form is {kind}, not positive definite")


def verify_subspace_witness(w: DualWitness, spanning: Sequence[Matrix]) -> None:
    wm = _thaw(w.witness)
    if not exact.is_symmetric(wm):
        raise CertificateError("witness is not symmetric")
    if exact.is_zero(wm):
        raise CertificateError("witness is zero")
    if not exact.is_psd(wm):
        raise CertificateError("witness is not PSD")
    for i, m in enumerate(spanning):
        if exact.pairing(wm, _thaw(m)) != 0:
            raise CertificateError(f"witness is not orthogonal to spanning matrix {i}")


def verify_sos_certificate(cert: SosCertificate, sym2_to_h4: Sequence[Sequence[Fraction]], p1_image: Sequence[Fraction]) -> None:
    s = _thaw(cert.psd_gram)
    d = len(s)
    if not exact.is_symmetric(s):
        raise CertificateError("Gram matrix is not symmetric")
    if not exact.is_psd(s):
        raise CertificateError("Gram matrix is not PSD")
    image = exact.matvec(sym2_to_h4, exact.sym_to_sym2(s, exact.sym_monomials(d)))
    if image != [-Fraction(x) for x in p1_image]:
        raise CertificateError("Gram matrix does not represent -p1 in H^4")
    total = exact.zeros(d)
    for a in cert.square_list:
        if len(a) != d:
            raise CertificateError("square has the wrong length")
        for i in range(d):
            for j in range(d):
                total[i][j] += a[i] * a[j]
    if total != s:
        raise CertificateError("squares do not sum to the Gram matrix")


def verify_affine_witness(w: DualWitness, kernel: Sequence[Matrix], slice_point: Matrix) -> None:
    """``slice_point`` is any symmetric S whose class is -p_1 (e.g. minus the p_1 Gram matrix)."""
    verify_subspace_witness(DualWitness(w.witness), kernel)
    pair = exact.pairing(_thaw(w.witness), slice_point)
    if pair >= 0:
        raise CertificateError("witness pairs nonnegatively with the affine slice")
    if w.pairing is not None and w.pairing != pair:
        raise CertificateError("stated pairing does not match")


# -- decisions -------------------------------------------------------------


def _prepare(spanning) -> tuple[list[Matrix], int]:
    mats = [exact.frac_matrix(m) for m in spanning]
    return mats, _check_family(mats)


def try_pd_certificate(
    spanning: Sequence[Sequence[Sequence]],
    *,
    rng: np.random.Generator | None = None,
    denom_cap: int = conic.DEFAULT_DENOM_CAP,
    log_: conic.SearchLog | None = None,
) -> PdCertificate | None:
    """Search for a verified positive definite member of span(spanning)."""
    mats, d = _prepare(spanning)
    rng = np.random.default_rng(0) if rng is None else rng
    monos = exact.sym_monomials(d)
    keep = exact.independent_subset([exact.sym_to_sym2(m, monos) for m in mats])
    basis = [mats[i] for i in keep]
    if not basis:
        return None
    z = conic.find_psd_point(exact.zeros(d), basis, strict=True, denom_cap=denom_cap, rng=rng, log_=log_)
    if z is None:
        return None
    raw = exact.combine(z, basis)
    form = exact.primitive(raw)
    factor = form[0][0] / raw[0][0]
    coeffs = [Fraction(0)] * len(mats)
    for i, zi in zip(keep, z):
        coeffs[i] = zi * factor
    cert = PdCertificate(_freeze(form), tuple(coeffs), tuple(exact.symmetric_pivots(form)[1]))
    verify_pd_certificate(cert, mats)
    return cert


def try_subspace_witness(
    spanning: Sequence[Sequence[Sequence]],
    *,
    rng: np.random.Generator | None = None,
    denom_cap: int = conic.DEFAULT_DENOM_CAP,
    log_: conic.SearchLog | None = None,
) -> DualWitness | None:
    """Search for a verified nonzero PSD W orthogonal to span(spanning).

    Nonzero PSD matrices have positive trace, so the search runs over the
    slice {W : <W, L_i> = 0, tr W = 1}.
    """
    mats, d = _prepare(spanning)
    rng = np.random.default_rng(0) if rng is None else rng
    monos = exact.sym_monomials(d)
    rows = _orthogonal_equations(mats, d)
    rows.append([Fraction(int(a == b)) for a, b in monos])
    rhs = [Fraction(0)] * len(mats) + [Fraction(1)]
    sol = exact.affine_solutions(rows, rhs, len(monos))
    if sol is None:
        # the identity lies in the span
        return None
    w0, null = sol
    f0 = _upper_to_sym(w0, d)
    fs = [_upper_to_sym(n, d) for n in null]
    y = conic.find_psd_point(f0, fs, denom_cap=denom_cap, rng=rng, log_=log_)
    if y is None:
        return None
    wit = DualWitness(_freeze(exact.primitive(exact.combine(y, fs, f0))))
    verify_subspace_witness(wit, mats)
    return wit


def pd_in_subspace(
    spanning: Sequence[Sequence[Sequence]],
    *,
    seed: int = 0,
    denom_cap: int = conic.DEFAULT_DENOM_CAP,
) -> SubspaceOutcome:
    """Decide whether span(spanning) contains a positive definite matrix.

    Returns a verified :class:`PdCertificate`, a verified :class:`DualWitness`
    (nonzero PSD W with <W, L> = 0 for all L), or :class:`Undecided`.
    """
    _prepare(spanning)
    rng = np.random.default_rng(seed)
    slog = conic.SearchLog()
    cert = try_pd_certificate(spanning, rng=rng, denom_cap=denom_cap, log_=slog)
    if cert is not None:
        return cert
    wit = try_subspace_witness(spanning, rng=rng, denom_cap=denom_cap, log_=slog)
    if wit is not None:
        return wit
    return Undecided("no certificate or witness verified exactly", slog.to_json())


@dataclass(frozen=True)
class QTypeResult:
    verdict: Verdict
    evidence: SubspaceOutcome
    spanning: tuple[tuple[tuple[Fraction, ...], ...], ...]
    meets_facet_bound: bool

    @property
    def definite_form(self) -> Matrix | None:
        return _thaw(self.evidence.form) if isinstance(self.evidence, PdCertificate) else None


def facet_screen(pres: GradedRingPresentation) -> bool:
    """Necessary condition for q-type: m >= 2n."""
    p = pres.polytope
    return p.num_facets >= 2 * p.dim


def ideal_quadrics(pres: GradedRingPresentation) -> list[Matrix]:
    """Spanning forms of the quadratic part of the ideal (the zero form if it is trivial)."""
    forms = pres.kernel_forms()
    return forms if forms else [exact.zeros(pres.h2_dim)]


def is_q_type(pres: GradedRingPresentation, *, seed: int = 0, denom_cap: int = conic.DEFAULT_DENOM_CAP) -> QTypeResult:
    """Decide whether the quadratic part of the defining ideal holds a definite form."""
    spanning = ideal_quadrics(pres)
    outcome = pd_in_subspace(spanning, seed=seed, denom_cap=denom_cap)
    verdict = {PdCertificate: Verdict.YES, DualWitness: Verdict.NO}.get(type(outcome), Verdict.UNDECIDED)
    screen = facet_screen(pres)
    if verdict is Verdict.YES and not screen:
        raise AssertionError("q-type certified although m < 2n")
    return QTypeResult(verdict, outcome, tuple(_freeze(m) for m in spanning), screen)


@dataclass(frozen=True)
class SosResult:
    verdict: Verdict
    evidence: Union[SosCertificate, DualWitness, Undecided]
    slice_point: tuple[tuple[Fraction, ...], ...]


def squares_of(s: Matrix) -> list[list[Fraction]]:
    """Rational vectors a_k with sum a_k a_k^T = s, via LDL^T and four squares per pivot."""
    out = []
    for d, col in exact.ldl_terms(s):
        for c in exact.four_squares(d):
            out.append([c * x for x in col])
    return out


def p1_negative_sos(
    pres: GradedRingPresentation,
    p1_image: Sequence[Fraction],
    *,
    seed: int = 0,
    denom_cap: int = conic.DEFAULT_DENOM_CAP,
) -> SosResult:
    """Decide whether -p_1 is represented by a PSD Gram matrix, i.e. p_1 = -sum a_i^2."""
    k = pres.h2_dim
    monos = list(pres.monomials)
    a = [list(r) for r in pres.sym2_to_h4]
    target = [-Fraction(x) for x in p1_image]
    x0 = exact.solve(a, target, len(monos))
    if x0 is None:
        raise ValueError("p1 image is not in the image of Sym^2(H^2)")
    s0 = exact.sym2_to_sym(x0, monos, k)
    kernel = pres.kernel_forms()
    rng = np.random.default_rng(seed)
    slog = conic.SearchLog()

    if exact.is_psd(s0):
        z = [Fraction(0)] * len(kernel)
    else:
        z = conic.find_psd_point(s0, kernel, denom_cap=denom_cap, rng=rng, log_=slog)
    if z is not None:
        s = exact.combine(z, kernel, s0)
        cert = SosCertificate(_freeze(s), tuple(tuple(v) for v in squares_of(s)))
        verify_sos_certificate(cert, a, p1_image)
        return SosResult(Verdict.YES, cert, _freeze(s0))

    # witnesses: {W : <W, K_i> = 0, <W, S0> = -1}
    rows = _orthogonal_equations(kernel, k) + _orthogonal_equations([s0], k)
    rhs = [Fraction(0)] * len(kernel) + [Fraction(-1)]
    sol = exact.affine_solutions(rows, rhs, len(monos))
    if sol is not None:
        w0, null = sol
        f0 = _upper_to_sym(w0, k)
        fs = [_upper_to_sym(n, k) for n in null]
        y = conic.find_psd_point(f0, fs, denom_cap=denom_cap, rng=rng, log_=slog)
        if y is not None:
            wm = exact.primitive(exact.combine(y, fs, f0))
            wit = DualWitness(_freeze(wm), exact.pairing(wm, s0))
            verify_affine_witness(wit, kernel, s0)
            return SosResult(Verdict.NO, wit, _freeze(s0))
    return SosResult(Verdict.UNDECIDED, Undecided("no certificate or witness verified exactly", slog.to_json()), _freeze(s0))


@dataclass(frozen=True)
class ConsistencyReport:
    q_type: Verdict
    negative_sos: Verdict
    consistent: bool


def lemma_consistency(pres: GradedRingPresentation, p1_image: Sequence[Fraction] | None = None, *, seed: int = 0) -> ConsistencyReport:
    """Check that a certified p_1 = -(sum of squares) comes with a certified q-type."""
    if p1_image is None:
        from .charalg import pontrjagin_p1

        p1_image = pontrjagin_p1(pres.polytope, pres.lam, pres).image
    qt = is_q_type(pres, seed=seed)
    sos = p1_negative_sos(pres, p1_image, seed=seed)
    if Verdict.UNDECIDED in (qt.verdict, sos.verdict):
        raise ValueError("consistency check needs both decisions; one was undecided")
    if sos.verdict is Verdict.YES and qt.verdict is not Verdict.YES:
        raise ImplicationViolation("p1 is minus a sum of squares but no definite quadric was found")
    return ConsistencyReport(qt.verdict, sos.verdict, True)
