"""Degree-of-symmetry bounds and classification checks for quasitoric manifolds.

The numbers here are the cohomological consequences of q-type:
n <= T_t(M) <= edim H*(M) = m - n, N_t^ss(M) <= dim M + edim = n + m, and for
homogeneous or cohomogeneity-one actions the rank/dimension bookkeeping that
forces every simple factor to be SU(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Sequence

from .charalg import GradedRingPresentation, as_lambda, pontrjagin_p1, presentation
from .polytope import SimplePolytope, euler_characteristic, require_valid
from .qtype import Verdict


@dataclass(frozen=True, order=True)
class SimpleLieEntry:
    """A compact simply connected simple Lie group, by Cartan type."""

    dim: int
    rank: int
    label: str
    weyl_order: int

    def __str__(self) -> str:
        return self.label


def _classical(max_rank: int) -> list[SimpleLieEntry]:
    out = []
    for r in range(1, max_rank + 1):
        out.append(SimpleLieEntry(r * (r + 2), r, f"A{r}", factorial(r + 1)))
        if r >= 2:
            out.append(SimpleLieEntry(r * (2 * r + 1), r, f"B{r}", 2**r * factorial(r)))
        if r >= 3:
            out.append(SimpleLieEntry(r * (2 * r + 1), r, f"C{r}", 2**r * factorial(r)))
        if r >= 4:
            out.append(SimpleLieEntry(r * (2 * r - 1), r, f"D{r}", 2 ** (r - 1) * factorial(r)))
    return out


EXCEPTIONAL = (
    SimpleLieEntry(14, 2, "G2", 12),
    SimpleLieEntry(52, 4, "F4", 1152),
    SimpleLieEntry(78, 6, "E6", 51840),
    SimpleLieEntry(133, 7, "E7", 2903040),
    SimpleLieEntry(248, 8, "E8", 696729600),
)


def lie_table(max_rank: int) -> list[SimpleLieEntry]:
    """All simple types of rank <= max_rank, sorted by (dim, rank, label)."""
    entries = _classical(max_rank) + [e for e in EXCEPTIONAL if e.rank <= max_rank]
    return sorted(entries)


LieProduct = tuple[SimpleLieEntry, ...]


def product_label(factors: Sequence[SimpleLieEntry]) -> str:
    if not factors:
        return "1"
    parts = []
    for label in dict.fromkeys(f.label for f in factors):
        count = sum(1 for f in factors if f.label == label)
        parts.append(label if count == 1 else f"{label}^{count}")
    return "x".join(parts)


def semisimple_candidates(dim_budget: int, rank_budget: int, *, exact_rank: bool = True) -> list[LieProduct]:
    """Products of simple factors with total dim <= dim_budget.

    With ``exact_rank`` (the default) the total rank must equal
    ``rank_budget``; otherwise any total rank up to it is allowed.  The empty
    product is never listed.
    """
    if dim_budget < 0 or rank_budget < 0:
        raise ValueError("budgets must be nonnegative")
    table = [e for e in lie_table(max(rank_budget, 1)) if e.dim <= dim_budget]
    out: list[LieProduct] = []

    def extend(start: int, chosen: list[SimpleLieEntry], dim: int, rank: int) -> None:
        if chosen and (rank == rank_budget or not exact_rank):
            out.append(tuple(chosen))
        for i in range(start, len(table)):
            e = table[i]
            if dim + e.dim <= dim_budget and rank + e.rank <= rank_budget:
                chosen.append(e)
                extend(i, chosen, dim + e.dim, rank + e.rank)
                chosen.pop()

    extend(0, [], 0, 0)
    return sorted(out, key=lambda fs: (sum(f.dim for f in fs), len(fs), [f.label for f in fs]))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SymmetryReport:
    n: int
    m: int
    edim: int
    t_lower: int
    t_upper: int
    nss_upper: int
    facet_bound_ok: bool
    chi: int
    q_type: Verdict | None
    verdicts: tuple[Check, ...]

    @property
    def contradiction(self) -> bool:
        return self.q_type is Verdict.YES and not self.facet_bound_ok

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "edim": self.edim,
            "t_lower": self.t_lower,
            "t_upper": self.t_upper,
            "nss_upper": self.nss_upper,
            "facet_bound_ok": self.facet_bound_ok,
            "chi": self.chi,
            "q_type": None if self.q_type is None else self.q_type.value,
            "contradiction": self.contradiction,
            "verdicts": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.verdicts],
        }


def symmetry_report(p: SimplePolytope, lam, qtype_verdict: Verdict | None = None) -> SymmetryReport:
    """Fill in the torus, semisimple and facet-count bounds for M over (p, lam)."""
    require_valid(p)
    n, m = p.dim, p.num_facets
    pres = presentation(p, as_lambda(lam))
    edim = m - n
    chi = euler_characteristic(p)
    facet_ok = m >= 2 * n
    checks = [
        Check("edim_equals_h2", edim == pres.h2_dim, f"edim={edim}, dim H^2={pres.h2_dim}"),
        Check(
            "facet_bound",
            facet_ok,
            f"m={m} >= 2n={2 * n}" if facet_ok else f"m={m} < 2n={2 * n}: not q-type",
        ),
    ]
    if qtype_verdict is Verdict.YES:
        checks.append(Check("q_type_needs_m_ge_2n", facet_ok, "q-type certified" + ("" if facet_ok else " with m < 2n")))
        checks.append(Check("torus_bounds_ordered", n <= edim, f"{n} <= T_t <= {edim}"))
    return SymmetryReport(n, m, edim, n, edim, n + m, facet_ok, chi, qtype_verdict, tuple(checks))


@dataclass(frozen=True)
class HomogeneousVerdict:
    status: str  # "consistent with (S^2)^n", "excluded as homogeneous", "not applicable"
    checks: tuple[Check, ...] = ()

    @property
    def consistent(self) -> bool:
        return self.status.startswith("consistent")


def homogeneous_check(p: SimplePolytope, lam, sos_verdict: Verdict, pres: GradedRingPresentation | None = None) -> HomogeneousVerdict:
    """Necessary conditions for a homogeneous M with p_1 = -(sum of squares) to look like (S^2)^n."""
    if sos_verdict is not Verdict.YES:
        return HomogeneousVerdict("not applicable")
    lam = as_lambda(lam)
    pres = presentation(p, lam) if pres is None else pres
    n, m = p.dim, p.num_facets
    chi = euler_characteristic(p)
    betti = pres.betti()
    p1 = pontrjagin_p1(p, lam, pres)
    checks = (
        Check("m_equals_2n", m == 2 * n, f"m={m}, 2n={2 * n}"),
        Check("chi_equals_2^n", chi == 2**n, f"chi={chi}, 2^n={2**n}"),
        Check("binomial_betti", betti == tuple(comb(n, i) for i in range(n + 1)), f"betti={list(betti)}"),
        Check("p1_vanishes", p1.vanishes, f"p1 image={[str(x) for x in p1.image]}"),
    )
    if all(c.passed for c in checks):
        return HomogeneousVerdict(f"consistent with (S^2)^{n}", checks)
    return HomogeneousVerdict("excluded as homogeneous", checks)


@dataclass(frozen=True)
class Predictions:
    """Cohomological shape forced by a cohomogeneity-one action of SU(2)^k (x S^1)."""

    k: int
    with_circle: bool
    group: str
    group_dim: int
    semisimple_rank: int
    weyl_order: int
    n: int
    manifold_dim: int
    orbit_dim: int  # dim G/T = 2n - 2
    euler_characteristic: int
    base_h2: int
    base_poincare: tuple[int, ...]  # coefficients of t^0, t^2, ..., t^{2k}
    total_h2: int
    torus_bound: int
    structure: str
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


def cohomogeneity_one_predictions(k: int, with_circle: bool = False) -> Predictions:
    if k < 1:
        raise ValueError("need at least one SU(2) factor")
    weyl = 2**k
    n = k + 1
    group = f"SU(2)^{k}" + (" x S^1" if with_circle else "")
    return Predictions(
        k=k,
        with_circle=with_circle,
        group=group,
        group_dim=3 * k + int(with_circle),
        semisimple_rank=k,
        weyl_order=weyl,
        n=n,
        manifold_dim=2 * n,
        orbit_dim=2 * k,
        euler_characteristic=2 * weyl,
        base_h2=k,
        base_poincare=tuple(comb(k, i) for i in range(k + 1)),
        total_h2=k + 1,
        torus_bound=k + 1,
        structure=f"S^2-bundle over (S^2)^{k}",
        notes=(
            "singular orbits are G/T with T a maximal torus",
            "principal orbits are G/S with S of codimension one in T",
            "the centre of G has dimension at most one (not checkable from (P, lambda))",
        ),
    )


def match_cohomogeneity_one(p: SimplePolytope, lam, pres: GradedRingPresentation | None = None) -> list[int]:
    """Values of k whose predictions agree with chi, n and dim H^2 of M."""
    pres = presentation(p, as_lambda(lam)) if pres is None else pres
    chi = euler_characteristic(p)
    k = p.dim - 1
    if k < 1:
        return []
    pred = cohomogeneity_one_predictions(k)
    if chi == pred.euler_characteristic and p.dim == pred.n and pres.h2_dim == pred.total_h2:
        return [k]
    return []
