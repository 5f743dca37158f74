"""Rational cohomology of a quasitoric manifold from (P, lambda).

H*(M; Q) is Q[v_0..v_{m-1}] modulo the Stanley-Reisner ideal of P and the
linear relations sum_i lambda[j][i] v_i = 0.  Picking a base vertex whose
facets carry an invertible minor, the linear relations eliminate those n
classes and the remaining m - n classes u form a basis of H^2.

Sign convention: with B the base-facet block of lambda and N the rest,
``elimination = B^{-1} N`` and each base class is v_j = -(elimination[j] . u).
The first Pontrjagin class sum_i v_i^2 has Gram matrix I + E^T E in u, which
does not depend on that sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import exact
from .exact import Matrix, Vector
from .polytope import InvalidPolytope, SimplePolytope, require_valid


class NondegeneracyError(ValueError):
    """Characteristic matrix has a vertex minor that is not +-1."""


@dataclass(frozen=True)
class CharacteristicMatrix:
    """Integer n x m matrix; column i is the circle vector of facet i."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(r[i] for r in self.rows)

    def minor(self, facets: Sequence[int]) -> Matrix:
        return [[Fraction(r[i]) for i in facets] for r in self.rows]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @classmethod
    def from_json(cls, rows) -> "CharacteristicMatrix":
        if not isinstance(rows, list) or not all(
            isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows
        ):
            raise ValueError("'lambda' must be a list of rows of integers")
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("'lambda' rows have different lengths")
        return cls(tuple(tuple(r) for r in rows))


def as_lambda(lam) -> CharacteristicMatrix:
    return lam if isinstance(lam, CharacteristicMatrix) else CharacteristicMatrix(tuple(map(tuple, lam)))


def _check_shape(p: SimplePolytope, lam: CharacteristicMatrix) -> None:
    if lam.shape != (p.dim, p.num_facets):
        raise ValueError(f"lambda has shape {lam.shape}, expected {(p.dim, p.num_facets)}")


@dataclass(frozen=True)
class NondegeneracyReport:
    ok: bool
    failures: tuple[tuple[tuple[int, ...], int], ...]  # (vertex, determinant)


def check_nondegeneracy(p: SimplePolytope, lam) -> NondegeneracyReport:
    lam = as_lambda(lam)
    _check_shape(p, lam)
    failures = []
    for v in p.vertices:
        d = exact.det(lam.minor(sorted(v)))
        if abs(d) != 1:
            failures.append((tuple(sorted(v)), int(d)))
    return NondegeneracyReport(not failures, tuple(failures))


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric rational Gram matrix in the u-basis."""

    gram: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, m: Matrix) -> "QuadraticForm":
        if not exact.is_symmetric(m):
            raise ValueError("Gram matrix must be symmetric")
        return cls(tuple(tuple(Fraction(x) for x in row) for row in m))

    @property
    def matrix(self) -> Matrix:
        return [list(r) for r in self.gram]

    @property
    def dim(self) -> int:
        return len(self.gram)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _monomials(k: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(k), degree):
        e = [0] * k
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@dataclass(frozen=True, eq=False)
class GradedRingPresentation:
    """H*(M; Q) as a quotient of Q[u] generated in degree two.

    ``sym2_to_h4`` maps coordinates on the monomials ``u_a u_b`` (a <= b, in
    the order of ``monomials``) onto a basis of H^4 given by the standard
    monomials ``h4_basis``.
    """

    polytope: SimplePolytope
    lam: CharacteristicMatrix
    base_vertex: tuple[int, ...]
    basis_labels: tuple[int, ...]
    elimination: tuple[tuple[Fraction, ...], ...]
    monomials: tuple[tuple[int, int], ...]
    relations: tuple[tuple[Fraction, ...], ...]
    sym2_to_h4: tuple[tuple[Fraction, ...], ...]
    h4_basis: tuple[int, ...]

    @property
    def h2_dim(self) -> int:
        return len(self.basis_labels)

    @property
    def h4_dim(self) -> int:
        return len(self.h4_basis)

    def linear_form(self, facet: int) -> Vector:
        """The class v_facet in u-coordinates."""
        k = self.h2_dim
        if facet in self.basis_labels:
            j = self.basis_labels.index(facet)
            return [Fraction(int(i == j)) for i in range(k)]
        j = self.base_vertex.index(facet)
        return [-x for x in self.elimination[j]]

    def reduce(self, sym2_vec: Sequence[Fraction]) -> Vector:
        return exact.matvec(self.sym2_to_h4, sym2_vec)

    def reduce_form(self, gram: Matrix) -> Vector:
        return self.reduce(exact.sym_to_sym2(gram, self.monomials))

    def kernel_forms(self) -> list[Matrix]:
        """Basis of the quadratic part of the defining ideal, as symmetric matrices."""
        return [exact.sym2_to_sym(r, self.monomials, self.h2_dim) for r in self.relations]

    @cached_property
    def _generators(self) -> list[tuple[int, dict]]:
        """Minimal non-faces of P, as products of linear forms in u."""
        p = self.polytope
        k = self.h2_dim
        nonfaces: list[frozenset[int]] = []
        for size in range(2, p.dim + 2):
            for s in itertools.combinations(range(p.num_facets), size):
                fs = frozenset(s)
                if any(nf <= fs for nf in nonfaces) or p.is_face(fs):
                    continue
                nonfaces.append(fs)
        gens = []
        for nf in nonfaces:
            poly = {(0,) * k: Fraction(1)}
            for facet in sorted(nf):
                lin = {}
                for a, c in enumerate(self.linear_form(facet)):
                    if c:
                        e = [0] * k
                        e[a] = 1
                        lin[tuple(e)] = c
                poly = _poly_mul(poly, lin)
            gens.append((len(nf), poly))
        return gens

    def degree_dimension(self, degree: int) -> int:
        """dim H^{2 degree}(M; Q) computed in the u-presentation."""
        k = self.h2_dim
        basis = _monomials(k, degree)
        index = {e: i for i, e in enumerate(basis)}
        rows = []
        for d, g in self._generators:
            if d > degree:
                continue
            for mono in _monomials(k, degree - d):
                prod = _poly_mul(g, {mono: Fraction(1)})
                row = [Fraction(0)] * len(basis)
                for e, c in prod.items():
                    row[index[e]] = c
                rows.append(row)
        return len(basis) - exact.rank(rows)

    def betti(self) -> tuple[int, ...]:
        """(dim H^0, dim H^2, ..., dim H^{2n})."""
        return tuple(self.degree_dimension(d) for d in range(self.polytope.dim + 1))


def _pick_base_vertex(p: SimplePolytope, lam: CharacteristicMatrix) -> tuple[int, ...]:
    for v in p.vertices:
        if exact.det(lam.minor(sorted(v))) != 0:
            return tuple(sorted(v))
    raise InvalidPolytope("no vertex with an invertible characteristic minor")


def presentation(p: SimplePolytope, lam, base_vertex: Sequence[int] | None = None) -> GradedRingPresentation:
    """Build the degree <= 4 presentation of H*(M; Q).

    ``base_vertex`` overrides the default choice (the first vertex in
    ``p.vertices`` with an invertible minor).
    """
    lam = as_lambda(lam)
    require_valid(p)
    _check_shape(p, lam)
    nd = check_nondegeneracy(p, lam)
    if not nd.ok:
        raise NondegeneracyError(f"vertex minors not unimodular at {[list(v) for v, _ in nd.failures]}")
    if base_vertex is None:
        base = _pick_base_vertex(p, lam)
    else:
        base = tuple(sorted(base_vertex))
        if frozenset(base) not in p.vertex_sets:
            raise ValueError(f"{list(base)} is not a vertex")
    rest = tuple(i for i in range(p.num_facets) if i not in base)
    elim = exact.matmul(exact.inverse(lam.minor(base)), lam.minor(rest))
    k = len(rest)
    monos = exact.sym_monomials(k)
    mono_index = {mn: i for i, mn in enumerate(monos)}

    def lin(f: int) -> Vector:
        if f in rest:
            j = rest.index(f)
            return [Fraction(int(i == j)) for i in range(k)]
        return [-x for x in elim[base.index(f)]]

    raw = []
    for i, j in itertools.combinations(range(p.num_facets), 2):
        if p.is_face((i, j)):
            continue
        li, lj = lin(i), lin(j)
        row = [Fraction(0)] * len(monos)
        for a in range(k):
            for b in range(k):
                if li[a] and lj[b]:
                    row[mono_index[(min(a, b), max(a, b))]] += li[a] * lj[b]
        raw.append(row)
    relations, pivots = exact.rref(raw) if raw else ([], [])
    free = [c for c in range(len(monos)) if c not in pivots]
    # normal form: pivot monomial c == -sum_f R[r][f] * (free monomial f)
    reduction = exact.zeros(len(free), len(monos))
    for col, f in enumerate(free):
        reduction[col][f] = Fraction(1)
    for row, pc in zip(relations, pivots):
        for col, f in enumerate(free):
            reduction[col][pc] = -row[f]
    return GradedRingPresentation(
        polytope=p,
        lam=lam,
        base_vertex=base,
        basis_labels=rest,
        elimination=tuple(tuple(r) for r in elim),
        monomials=tuple(monos),
        relations=tuple(tuple(r) for r in relations),
        sym2_to_h4=tuple(tuple(r) for r in reduction),
        h4_basis=tuple(free),
    )


def edim(p: SimplePolytope) -> int:
    """Embedding dimension of H*(M; Q): the number of degree-two generators, m - n."""
    require_valid(p)
    return p.num_facets - p.dim


@dataclass(frozen=True)
class P1Result:
    form: QuadraticForm
    image: tuple[Fraction, ...]
    presentation: GradedRingPresentation

    @property
    def vanishes(self) -> bool:
        return all(x == 0 for x in self.image)


def pontrjagin_p1(p: SimplePolytope, lam, pres: GradedRingPresentation | None = None) -> P1Result:
    """p_1(M) = sum_i v_i^2 as a Gram matrix I + E^T E in u, plus its class in H^4."""
    pres = presentation(p, lam) if pres is None else pres
    k = pres.h2_dim
    e = [list(r) for r in pres.elimination]
    gram = exact.add(exact.identity(k), exact.matmul(exact.transpose(e), e)) if e else exact.identity(k)
    image = tuple(pres.reduce_form(gram))
    return P1Result(QuadraticForm.of(gram), image, pres)
