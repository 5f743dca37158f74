"""JSON documents for certificates and witnesses, and their standalone verification.

Rationals are written as ``[numerator, denominator]`` integer pairs.  A
document carries everything a third party needs: the linear map
``sym2_to_h4`` (and ``p1_image`` where relevant) plus the evidence.  The
verifier recomputes the ideal from ``sym2_to_h4`` instead of trusting any
stated spanning set; if the input bundle is embedded it also recomputes the
presentation and p_1 from (P, lambda).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import exact
from .catalogue import InputBundle
from .charalg import pontrjagin_p1, presentation
from .exact import Matrix
from .qtype import (
    CertificateError,
    DualWitness,
    PdCertificate,
    SosCertificate,
    SosResult,
    QTypeResult,
    verify_affine_witness,
    verify_pd_certificate,
    verify_sos_certificate,
    verify_subspace_witness,
)

FORMAT = "qtoric-certificate"
VERSION = 1
KINDS = ("q_type", "negative_sos", "subspace")


def enc(x) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def dec(pair) -> Fraction:
    if (
        not isinstance(pair, list)
        or len(pair) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
        or pair[1] == 0
    ):
        raise CertificateError(f"expected a [numerator, denominator] pair, got {pair!r}")
    return Fraction(pair[0], pair[1])


def enc_vec(v: Sequence) -> list:
    return [enc(x) for x in v]


def enc_mat(m: Sequence[Sequence]) -> list:
    return [enc_vec(r) for r in m]


def dec_vec(v) -> list[Fraction]:
    if not isinstance(v, list):
        raise CertificateError("expected a list of rationals")
    return [dec(x) for x in v]


def dec_mat(m) -> Matrix:
    if not isinstance(m, list):
        raise CertificateError("expected a matrix")
    rows = [dec_vec(r) for r in m]
    if rows and len({len(r) for r in rows}) != 1:
        raise CertificateError("ragged matrix")
    return rows


def _document(kind: str, outcome: str, data: dict, bundle: dict | None, name: str | None) -> dict:
    doc: dict[str, Any] = {"format": FORMAT, "version": VERSION, "kind": kind, "outcome": outcome}
    if name:
        doc["name"] = name
    doc["data"] = data
    if bundle is not None:
        doc["input"] = bundle
    return doc


def qtype_document(result: QTypeResult, pres, *, bundle: dict | None = None, name: str | None = None) -> dict | None:
    """Serialize the evidence of a decided q-type question (None if undecided)."""
    data = {
        "h2_dim": pres.h2_dim,
        "base_vertex": list(pres.base_vertex),
        "sym2_to_h4": enc_mat(pres.sym2_to_h4),
        "spanning": [enc_mat(m) for m in result.spanning],
    }
    ev = result.evidence
    if isinstance(ev, PdCertificate):
        data["form"] = enc_mat(ev.form)
        data["coefficients"] = enc_vec(ev.coefficients)
        return _document("q_type", "certificate", data, bundle, name)
    if isinstance(ev, DualWitness):
        data["witness"] = enc_mat(ev.witness)
        return _document("q_type", "witness", data, bundle, name)
    return None


def sos_document(result: SosResult, pres, p1_image, *, bundle: dict | None = None, name: str | None = None) -> dict | None:
    data = {
        "h2_dim": pres.h2_dim,
        "base_vertex": list(pres.base_vertex),
        "sym2_to_h4": enc_mat(pres.sym2_to_h4),
        "p1_image": enc_vec(p1_image),
    }
    ev = result.evidence
    if isinstance(ev, SosCertificate):
        data["psd_gram"] = enc_mat(ev.psd_gram)
        data["squares"] = enc_mat(ev.square_list)
        return _document("negative_sos", "certificate", data, bundle, name)
    if isinstance(ev, DualWitness):
        data["witness"] = enc_mat(ev.witness)
        data["pairing"] = enc(ev.pairing)
        return _document("negative_sos", "witness", data, bundle, name)
    return None


def subspace_document(spanning: Sequence[Matrix], outcome, *, name: str | None = None) -> dict | None:
    data: dict[str, Any] = {"spanning": [enc_mat(m) for m in spanning]}
    if isinstance(outcome, PdCertificate):
        data["form"] = enc_mat(outcome.form)
        data["coefficients"] = enc_vec(outcome.coefficients)
        return _document("subspace", "certificate", data, None, name)
    if isinstance(outcome, DualWitness):
        data["witness"] = enc_mat(outcome.witness)
        return _document("subspace", "witness", data, None, name)
    return None


@dataclass(frozen=True)
class VerifyReport:
    kind: str
    outcome: str
    checks: tuple[str, ...]

    @property
    def summary(self) -> str:
        claim = {
            ("q_type", "certificate"): "q-type: YES (definite form in the ideal)",
            ("q_type", "witness"): "q-type: NO (PSD witness orthogonal to the ideal)",
            ("negative_sos", "certificate"): "p1 = -(sum of squares): YES",
            ("negative_sos", "witness"): "p1 = -(sum of squares): NO (separating PSD witness)",
            ("subspace", "certificate"): "subspace contains a PD matrix",
            ("subspace", "witness"): "subspace contains no PD matrix",
        }[(self.kind, self.outcome)]
        return f"verified: {claim}"


def _field(data: dict, key: str):
    if key not in data:
        raise CertificateError(f"certificate data is missing {key!r}")
    return data[key]


def _sym_dim(a: Matrix, k: int) -> int:
    n = k * (k + 1) // 2
    if any(len(r) != n for r in a):
        raise CertificateError(f"sym2_to_h4 must have {n} columns for h2_dim={k}")
    return n


def _ideal_basis(a: Matrix, k: int) -> list[Matrix]:
    monos = exact.sym_monomials(k)
    return [exact.sym2_to_sym(v, monos, k) for v in exact.nullspace(a, len(monos))]


def _check_square(m: Matrix, k: int, what: str) -> None:
    if len(m) != k or any(len(r) != k for r in m):
        raise CertificateError(f"{what} must be {k} x {k}")


def _check_input(doc: dict, data: dict, checks: list[str]) -> None:
    try:
        bundle = InputBundle.from_json(doc["input"])
        pres = presentation(bundle.polytope, bundle.lam, base_vertex=data.get("base_vertex"))
    except (ValueError, KeyError) as err:
        raise CertificateError(f"embedded input is invalid: {err}") from err
    if [list(r) for r in pres.sym2_to_h4] != dec_mat(data["sym2_to_h4"]):
        raise CertificateError("sym2_to_h4 does not match the embedded input")
    checks.append("sym2_to_h4 recomputed from the embedded input")
    if "p1_image" in data:
        image = list(pontrjagin_p1(bundle.polytope, bundle.lam, pres).image)
        if image != dec_vec(data["p1_image"]):
            raise CertificateError("p1_image does not match the embedded input")
        checks.append("p1_image recomputed from the embedded input")


def verify_document(doc) -> VerifyReport:
    """Re-check a serialized certificate with exact arithmetic; raises CertificateError."""
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CertificateError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise CertificateError(f"unsupported version {doc.get('version')!r}")
    kind, outcome = doc.get("kind"), doc.get("outcome")
    if kind not in KINDS or outcome not in ("certificate", "witness"):
        raise CertificateError(f"unknown kind/outcome {kind!r}/{outcome!r}")
    data = doc.get("data")
    if not isinstance(data, dict):
        raise CertificateError("missing data object")
    checks: list[str] = []

    if kind == "subspace":
        spanning = [dec_mat(m) for m in _field(data, "spanning")]
        if not spanning:
            raise CertificateError("empty spanning list")
        for m in spanning:
            if not exact.is_symmetric(m):
                raise CertificateError("spanning matrices must be symmetric")
        if outcome == "certificate":
            cert = PdCertificate(tuple(map(tuple, dec_mat(_field(data, "form")))), tuple(dec_vec(_field(data, "coefficients"))), ())
            verify_pd_certificate(cert, spanning)
            checks.append("form equals the stated combination and is positive definite")
        else:
            w = dec_mat(_field(data, "witness"))
            verify_subspace_witness(DualWitness(tuple(map(tuple, w))), spanning)
            checks.append("witness is nonzero, PSD and orthogonal to every spanning matrix")
        return VerifyReport(kind, outcome, tuple(checks))

    k = _field(data, "h2_dim")
    if not isinstance(k, int) or k < 0:
        raise CertificateError("h2_dim must be a nonnegative integer")
    a = dec_mat(_field(data, "sym2_to_h4"))
    _sym_dim(a, k)
    if "input" in doc:
        _check_input(doc, data, checks)

    if kind == "q_type":
        ideal = _ideal_basis(a, k)
        if outcome == "certificate":
            form = dec_mat(_field(data, "form"))
            _check_square(form, k, "form")
            spanning = [dec_mat(m) for m in _field(data, "spanning")]
            for m in spanning:
                _check_square(m, k, "spanning matrix")
                if exact.matvec(a, exact.sym_to_sym2(m, exact.sym_monomials(k))) != [0] * len(a):
                    raise CertificateError("a spanning matrix is not in the quadratic part of the ideal")
            checks.append("every spanning matrix reduces to zero in H^4")
            cert = PdCertificate(tuple(map(tuple, form)), tuple(dec_vec(_field(data, "coefficients"))), ())
            verify_pd_certificate(cert, spanning)
            checks.append("form equals the stated combination and is positive definite")
        else:
            w = dec_mat(_field(data, "witness"))
            _check_square(w, k, "witness")
            verify_subspace_witness(DualWitness(tuple(map(tuple, w))), ideal)
            checks.append(f"witness is nonzero, PSD and orthogonal to all {len(ideal)} ideal basis forms")
        return VerifyReport(kind, outcome, tuple(checks))

    # negative_sos
    image = dec_vec(_field(data, "p1_image"))
    if len(image) != len(a):
        raise CertificateError("p1_image length does not match sym2_to_h4")
    if outcome == "certificate":
        s = dec_mat(_field(data, "psd_gram"))
        _check_square(s, k, "psd_gram")
        squares = tuple(tuple(v) for v in dec_mat(_field(data, "squares")))
        verify_sos_certificate(SosCertificate(tuple(map(tuple, s)), squares), a, image)
        checks.append("Gram matrix is PSD, represents -p1, and equals the sum of the listed squares")
    else:
        monos = exact.sym_monomials(k)
        x0 = exact.solve(a, [-x for x in image], len(monos))
        if x0 is None:
            # -p1 is not even representable; any witness is moot
            raise CertificateError("-p1 is not in the image of Sym^2(H^2)")
        s0 = exact.sym2_to_sym(x0, monos, k)
        w = dec_mat(_field(data, "witness"))
        _check_square(w, k, "witness")
        pairing = dec(data["pairing"]) if "pairing" in data else None
        verify_affine_witness(DualWitness(tuple(map(tuple, w)), pairing), _ideal_basis(a, k), s0)
        checks.append("witness is nonzero, PSD, orthogonal to the ideal, and negative on the affine slice")
    return VerifyReport(kind, outcome, tuple(checks))
