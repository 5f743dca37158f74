"""Combinatorics of simple polytopes given by vertex-facet incidence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

MAX_DIM = 16


class InvalidPolytope(ValueError):
    """Raised when an operation needs a polytope that fails validation."""


@dataclass(frozen=True)
class SimplePolytope:
    """An n-dimensional simple polytope with m facets.

    Each vertex is recorded as the tuple of facet indices containing it.  The
    constructor does not validate; call :func:`validate` for a diagnosis.
    """

    dim: int
    num_facets: int
    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(int(i) for i in v) for v in self.vertices))

    @property
    def n(self) -> int:
        return self.dim

    @property
    def m(self) -> int:
        return self.num_facets

    @property
    def vertex_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(v) for v in self.vertices)

    def is_face(self, facets: Iterable[int]) -> bool:
        """True if the given facets have a common vertex (so meet in a face)."""
        s = set(facets)
        return any(s <= v for v in self.vertex_sets)

    def to_json(self) -> dict:
        return {"dim": self.dim, "facets": self.num_facets, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "SimplePolytope":
        for key in ("dim", "facets", "vertices"):
            if key not in data:
                raise ValueError(f"polytope object is missing {key!r}")
        if not isinstance(data["dim"], int) or not isinstance(data["facets"], int):
            raise ValueError("'dim' and 'facets' must be integers")
        verts = data["vertices"]
        if not isinstance(verts, list) or not all(
            isinstance(v, list) and all(isinstance(i, int) for i in v) for v in verts
        ):
            raise ValueError("'vertices' must be a list of lists of integers")
        return cls(data["dim"], data["facets"], tuple(tuple(v) for v in verts))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    # polytopality (realisability) is never tested
    warnings: tuple[str, ...] = field(
        default=("incidence structure accepted without a polytopality test",)
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


@dataclass(frozen=True)
class HVector:
    entries: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def validate(p: SimplePolytope) -> ValidationReport:
    """Report every violated structural invariant; never raises."""
    out: list[Violation] = []
    n, m = p.dim, p.num_facets
    if n < 1:
        out.append(Violation("bad dimension", f"dimension {n} must be positive"))
    if n > MAX_DIM:
        out.append(Violation("dimension too large", f"dimension {n} exceeds cap {MAX_DIM}"))
    if m < 1:
        out.append(Violation("bad facet count", f"facet count {m} must be positive"))
    if not p.vertices:
        out.append(Violation("no vertices", "polytope has no vertices"))

    seen: dict[frozenset[int], int] = {}
    for k, v in enumerate(p.vertices):
        if len(set(v)) != len(v):
            out.append(Violation("repeated facet in vertex", f"vertex {k} {list(v)} repeats a facet"))
        if len(v) != n:
            out.append(Violation("wrong vertex size", f"vertex {k} lies on {len(v)} facets, expected {n}"))
        bad = [i for i in v if not 0 <= i < m]
        if bad:
            out.append(Violation("facet index out of range", f"vertex {k} uses facets {bad} outside [0, {m})"))
        key = frozenset(v)
        if key in seen:
            out.append(Violation("duplicate vertex", f"vertex {k} duplicates vertex {seen[key]}"))
        else:
            seen[key] = k

    used = set(itertools.chain.from_iterable(p.vertices))
    missing = [i for i in range(max(m, 0)) if i not in used]
    if missing:
        out.append(Violation("unused facet", f"facets {missing} contain no vertex"))

    if not out:
        h = _h_entries(p)
        if any(x < 0 for x in h):
            out.append(Violation("negative h-vector", f"h-vector {h} has a negative entry"))
        if any(h[i] != h[n - i] for i in range(n + 1)):
            out.append(Violation("Dehn-Sommerville", f"h-vector {h} is not palindromic"))
    return ValidationReport(tuple(out))


def require_valid(p: SimplePolytope) -> None:
    report = validate(p)
    if not report.ok:
        raise InvalidPolytope("; ".join(v.message for v in report.violations))


def face_counts(p: SimplePolytope) -> tuple[int, ...]:
    """g_i = number of i-element facet sets with a common vertex, i = 0..n.

    The faces of codimension i are exactly these intersections, so
    g_i = f_{n-i}.
    """
    n = p.dim
    levels: list[set[frozenset[int]]] = [set() for _ in range(n + 1)]
    for v in p.vertex_sets:
        for i in range(n + 1):
            levels[i].update(frozenset(c) for c in itertools.combinations(sorted(v), i))
    return tuple(len(level) for level in levels)


def f_vector(p: SimplePolytope) -> tuple[int, ...]:
    """(f_0, ..., f_{n-1}): number of faces of each dimension."""
    g = face_counts(p)
    n = p.dim
    return tuple(g[n - k] for k in range(n))


def _h_entries(p: SimplePolytope) -> tuple[int, ...]:
    n = p.dim
    g = face_counts(p)
    return tuple(
        sum((-1) ** (k - i) * comb(n - i, k - i) * g[i] for i in range(k + 1)) for k in range(n + 1)
    )


def h_vector(p: SimplePolytope) -> HVector:
    require_valid(p)
    return HVector(_h_entries(p))


def euler_characteristic(p: SimplePolytope) -> int:
    """Euler characteristic of the quasitoric manifold over p (= number of vertices)."""
    h = h_vector(p)
    chi = sum(h)
    assert chi == len(p.vertices)
    return chi


def cube(n: int) -> SimplePolytope:
    """The n-cube; facets j and j+n are opposite.  The first vertex is {0..n-1}."""
    if n < 1:
        raise ValueError("cube dimension must be at least 1")
    verts = tuple(
        tuple(j + n * bit for j, bit in enumerate(bits)) for bits in itertools.product((0, 1), repeat=n)
    )
    return SimplePolytope(n, 2 * n, verts)


def simplex(n: int) -> SimplePolytope:
    if n < 1:
        raise ValueError("simplex dimension must be at least 1")
    verts = tuple(itertools.combinations(range(n + 1), n))
    return SimplePolytope(n, n + 1, verts)


def product(p1: SimplePolytope, p2: SimplePolytope) -> SimplePolytope:
    """Cartesian product; facets of p2 are shifted past those of p1."""
    shift = p1.num_facets
    verts = tuple(v1 + tuple(i + shift for i in v2) for v1 in p1.vertices for v2 in p2.vertices)
    return SimplePolytope(p1.dim + p2.dim, p1.num_facets + p2.num_facets, verts)


def polygon(m: int) -> SimplePolytope:
    """Convex m-gon; edge i meets edges i-1 and i+1."""
    if m < 3:
        raise ValueError("a polygon needs at least three edges")
    return SimplePolytope(2, m, tuple((i, (i + 1) % m) for i in range(m)))
