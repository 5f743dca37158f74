"""Floating-point search for rational points of spectrahedra.

Given an exact affine family F(z) = F0 + sum_i z_i F_i of symmetric rational
matrices, :func:`find_psd_point` looks for a rational z with F(z) PSD (or PD
when ``strict``).  The numeric side maximises the smallest eigenvalue with an
interior-point solver; the candidate is then rationalised by continued
fractions and re-checked exactly.  When the optimum sits on the boundary of
the PSD cone the search restricts to the face spanned by the numeric range
and recurses, so solutions lying on lower-dimensional faces (F(z) = 0, say)
are still found exactly.

Nothing returned from here is trusted: callers verify every point again.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import clarabel
import numpy as np
import scipy.sparse as sp

from . import exact
from .exact import Matrix, Vector

log = logging.getLogger(__name__)

DEFAULT_DENOM_CAP = 10**6
SOLVER_TOL = 1e-9
STRICT_MARGIN = 1e-7
BOUNDARY_MARGIN = 1e-5
BOX = 1e4
MAX_RETRIES = 5


@dataclass
class SearchLog:
    """Numeric diagnostics, kept for reporting Undecided outcomes."""

    margins: list[float] = field(default_factory=list)
    statuses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"margins": self.margins, "statuses": self.statuses, "notes": self.notes}


def _svec_index(d: int) -> list[tuple[int, int]]:
    # clarabel's PSD triangle: upper triangle, column major
    return [(i, j) for j in range(d) for i in range(j + 1)]


def _svec(m: np.ndarray, idx: list[tuple[int, int]]) -> np.ndarray:
    r2 = np.sqrt(2.0)
    return np.array([m[i, j] if i == j else r2 * m[i, j] for i, j in idx])


def _to_float(m: Matrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=float).reshape(len(m), len(m))


def _solve(f0: np.ndarray, fs: Sequence[np.ndarray], q: np.ndarray, margin: float | None, box: float):
    """Shared conic model over x = (z..., t).

    With ``margin`` None, t is free (capped at 1) and F(z) - t I must be PSD;
    otherwise t is fixed to ``margin``.
    """
    d = f0.shape[0]
    k = len(fs)
    idx = _svec_index(d)
    nvar = k + 1
    # PSD block: s = svec(F0) - A x with A = [-svec(F_i) ..., svec(I)]
    a_psd = np.zeros((len(idx), nvar))
    for i, f in enumerate(fs):
        a_psd[:, i] = -_svec(f, idx)
    a_psd[:, k] = _svec(np.eye(d), idx)
    b_psd = _svec(f0, idx)
    # nonnegative block: 1 - t >= 0, box +- z_i >= 0
    a_lin = np.zeros((1 + 2 * k, nvar))
    b_lin = np.full(1 + 2 * k, box)
    a_lin[0, k] = 1.0
    b_lin[0] = 1.0
    for i in range(k):
        a_lin[1 + 2 * i, i] = 1.0
        a_lin[2 + 2 * i, i] = -1.0
    blocks_a, blocks_b = [a_lin], [b_lin]
    cones = [clarabel.NonnegativeConeT(1 + 2 * k)]
    if margin is not None:
        row = np.zeros((1, nvar))
        row[0, k] = 1.0
        blocks_a.append(row)
        blocks_b.append(np.array([margin]))
        cones.append(clarabel.ZeroConeT(1))
    blocks_a.append(a_psd)
    blocks_b.append(b_psd)
    cones.append(clarabel.PSDTriangleConeT(d))
    a = sp.csc_matrix(np.vstack(blocks_a))
    b = np.concatenate(blocks_b)
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    settings.tol_gap_abs = SOLVER_TOL
    settings.tol_gap_rel = SOLVER_TOL
    settings.tol_feas = SOLVER_TOL
    settings.max_iter = 200
    sol = clarabel.DefaultSolver(sp.csc_matrix((nvar, nvar)), q, a, b, cones, settings).solve()
    x = np.array(sol.x)
    return float(x[k]), x[:k], str(sol.status)


def max_min_eigenvalue(f0: np.ndarray, fs: Sequence[np.ndarray], box: float = BOX) -> tuple[float, np.ndarray, str]:
    """Maximise t subject to F(z) - t I PSD, t <= 1, |z_i| <= box.

    Returns (t*, z*, solver status).
    """
    q = np.zeros(len(fs) + 1)
    q[-1] = -1.0
    return _solve(f0, fs, q, None, box)


def min_trace_with_margin(f0: np.ndarray, fs: Sequence[np.ndarray], margin: float, box: float = BOX) -> tuple[np.ndarray, str]:
    """Minimise tr F(z) subject to F(z) - margin I PSD; keeps certificates small."""
    q = np.array([np.trace(f) for f in fs] + [0.0])
    _, z, status = _solve(f0, fs, q, margin, box)
    return z, status


def rationalize(values: Sequence[float], cap: int) -> list[Fraction]:
    """Continued-fraction best approximations with denominators <= cap."""
    return [Fraction(float(v)).limit_denominator(cap) for v in values]


def _caps(cap: int) -> list[int]:
    out, c = [], 1
    while c < cap:
        out.append(c)
        c *= 10
    out.append(cap)
    return out


def _accept(f0: Matrix, fs: Sequence[Matrix], z: Vector, strict: bool) -> bool:
    m = exact.combine(z, fs, f0)
    kind = exact.symmetric_pivots(m)[0]
    return kind == "pd" if strict else kind in ("pd", "psd")


def find_psd_point(
    f0: Matrix,
    fs: Sequence[Matrix],
    *,
    strict: bool = False,
    denom_cap: int = DEFAULT_DENOM_CAP,
    rng: np.random.Generator | None = None,
    log_: SearchLog | None = None,
    _depth: int = 0,
) -> Vector | None:
    """Rational z with F0 + sum z_i F_i PSD (PD if strict), exactly verified, or None."""
    rng = np.random.default_rng(0) if rng is None else rng
    log_ = SearchLog() if log_ is None else log_
    d = len(f0)
    k = len(fs)
    if d == 0:
        return [Fraction(0)] * k
    if k == 0:
        return [] if _accept(f0, fs, [], strict) else None

    scale = max([abs(float(x)) for m in [f0, *fs] for row in m for x in row] + [1e-300])
    f0n = _to_float(f0) / scale
    fsn = [_to_float(f) / scale for f in fs]
    col = [max(np.abs(f).max(), 1e-300) for f in fsn]
    fsn = [f / c for f, c in zip(fsn, col)]
    t, w, status = max_min_eigenvalue(f0n, fsn)
    z_float = w / np.array(col)
    log_.margins.append(t)
    log_.statuses.append(status)
    if not np.isfinite(t) or status not in ("Solved", "AlmostSolved"):
        log_.notes.append(f"numeric solver status {status}")
        if not np.all(np.isfinite(z_float)):
            return None

    if t > STRICT_MARGIN:
        starts = [z_float]
        w2, status2 = min_trace_with_margin(f0n, fsn, t / 2)
        if status2 in ("Solved", "AlmostSolved") and np.all(np.isfinite(w2)):
            starts.insert(0, w2 / np.array(col))
        for attempt in range(MAX_RETRIES + 1):
            for start in starts:
                cand = start
                if attempt:
                    # jitter inside the margin before rationalising again
                    jitter = rng.standard_normal(k) * (t / (10 * (1 + attempt))) / np.array(col)
                    cand = start + jitter
                for cap in _caps(denom_cap):
                    z = rationalize(cand, cap)
                    if _accept(f0, fs, z, strict):
                        return z
        log_.notes.append("rationalization failed inside a strictly feasible region")
        return None
    if strict or t < -BOUNDARY_MARGIN:
        return None

    # boundary: exact rational solution on a face, or nothing
    for cap in _caps(denom_cap):
        z = rationalize(z_float, cap)
        if _accept(f0, fs, z, strict=False):
            return z
    if _depth >= d:
        return None
    numeric = f0n + sum(zi * f for zi, f in zip(w, fsn))
    for r in _candidate_ranks(np.linalg.eigvalsh(numeric)):
        z = _reduce_to_face(f0, fs, numeric, r, denom_cap, rng, log_, _depth)
        if z is not None and _accept(f0, fs, z, strict=False):
            return z
    log_.notes.append(f"facial reduction failed at depth {_depth}")
    return None


def _candidate_ranks(eigs: np.ndarray) -> list[int]:
    """Plausible numeric ranks of a PSD matrix, most plausible first."""
    eigs = np.sort(np.clip(eigs, 0.0, None))[::-1]
    d = len(eigs)
    top = max(eigs[0], 1e-12) if d else 1.0
    ranks = []
    by_threshold = int(np.sum(eigs > 1e-4 * top))
    ranks.append(by_threshold)
    # largest relative gap in the spectrum
    if d > 1:
        logs = np.log10(eigs + 1e-16)
        gaps = logs[:-1] - logs[1:]
        ranks.append(int(np.argmax(gaps)) + 1)
    ranks.extend(range(d))
    seen, out = set(), []
    for r in ranks:
        if r < d and r not in seen:
            seen.add(r)
            out.append(r)
    return out


def _rational_kernels(numeric: np.ndarray, r: int, cap: int) -> list[list[Vector]]:
    """Rational bases guessed for the numeric null space of dimension d - r.

    The orthogonal projector onto a rational subspace has rational entries, so
    the projector is rounded with growing denominator caps; exactly idempotent
    roundings come first.
    """
    d = numeric.shape[0]
    _, vecs = np.linalg.eigh(numeric)
    null_num = vecs[:, : d - r]
    proj = null_num @ null_num.T
    exact_hits, loose_hits, seen = [], [], set()
    for c in _caps(cap):
        proj_q = [rationalize(row, c) for row in proj]
        key = tuple(map(tuple, proj_q))
        if key in seen:
            continue
        seen.add(key)
        kernel = exact.column_basis(proj_q)
        if len(kernel) != d - r:
            continue
        (exact_hits if exact.matmul(proj_q, proj_q) == proj_q else loose_hits).append(kernel)
    return exact_hits + loose_hits


def _reduce_to_face(
    f0: Matrix,
    fs: Sequence[Matrix],
    numeric: np.ndarray,
    r: int,
    cap: int,
    rng: np.random.Generator,
    log_: SearchLog,
    depth: int,
) -> Vector | None:
    for kernel in _rational_kernels(numeric, r, cap):
        z = _solve_on_face(f0, fs, kernel, cap, rng, log_, depth)
        if z is not None:
            return z
    return None


def _solve_on_face(
    f0: Matrix,
    fs: Sequence[Matrix],
    kernel: list[Vector],
    cap: int,
    rng: np.random.Generator,
    log_: SearchLog,
    depth: int,
) -> Vector | None:
    d = len(f0)
    k = len(fs)
    r = d - len(kernel)
    # F(z) U = 0 for every kernel vector U
    rows: list[Vector] = []
    rhs: list[Fraction] = []
    for u in kernel:
        f0u = exact.matvec(f0, u)
        fus = [exact.matvec(f, u) for f in fs]
        for a in range(d):
            rows.append([fu[a] for fu in fus])
            rhs.append(-f0u[a])
    sol = exact.affine_solutions(rows, rhs, k)
    if sol is None:
        return None
    z0, null = sol
    if r == 0:
        return z0
    # on the complement V of the kernel, F is PSD iff V^T F V is
    vt = exact.nullspace(kernel, d) if kernel else exact.identity(d)
    vmat = exact.transpose(vt)

    def restrict(m: Matrix) -> Matrix:
        return exact.matmul(vt, exact.matmul(m, vmat))

    g0 = restrict(exact.combine(z0, fs, f0))
    gs = [restrict(exact.combine(n, fs)) for n in null]
    w = find_psd_point(g0, gs, strict=False, denom_cap=cap, rng=rng, log_=log_, _depth=depth + 1)
    if w is None:
        return None
    z = list(z0)
    for wi, n in zip(w, null):
        z = [a + wi * b for a, b in zip(z, n)]
    return z
