"""Symmetric diagonal scaling of non-negative matrices.

Either every nonzero entry of ``M`` lies on a nonzero permutation diagonal
(total support), in which case a positive ``d`` with ``diag(d) M diag(d)``
doubly stochastic exists and :func:`sinkhorn` finds it, or there are
non-empty index sets ``S``, ``T`` with ``M[S, T] = 0`` and ``|S| + |T| >= n``,
which :func:`support_check` returns.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_bipartite_matching

from .spectral import HermitianWeighting

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000


class ScalingError(RuntimeError):
    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


@dataclass(frozen=True)
class Violator:
    S: tuple[int, ...]
    T: tuple[int, ...]

    def check(self, m: np.ndarray) -> None:
        n = m.shape[0]
        if not self.S or not self.T:
            raise AssertionError("violator sets must be non-empty")
        if np.any(m[np.ix_(self.S, self.T)] != 0):
            raise AssertionError("M[S, T] is not identically zero")
        if len(self.S) + len(self.T) < n:
            raise AssertionError(f"|S| + |T| = {len(self.S) + len(self.T)} < n = {n}")


@dataclass(frozen=True)
class Scaled:
    d: np.ndarray
    deviation: float
    iterations: int


def support_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.any(m < 0):
        raise ValueError("support matrix has negative entries")
    if not np.array_equal(m, m.T):
        raise ValueError("support matrix is not symmetric")
    if np.any(np.diag(m) != 0):
        raise ValueError("support matrix has a nonzero diagonal")
    return m


def _matching(mask: np.ndarray) -> np.ndarray:
    """Maximum matching of the bipartite graph rows x cols; row -> col or -1."""
    if mask.shape[0] == 0:
        return np.zeros(0, dtype=int)
    return np.asarray(maximum_bipartite_matching(csr_matrix(mask.astype(np.int8)),
                                                 perm_type="column"))


def _hall_violator(mask: np.ndarray, row_match: np.ndarray) -> tuple[list[int], set[int]]:
    """Rows reachable by alternating paths from all unmatched rows, and their
    neighbourhood.  For a maximum matching ``|N(S)| = |S| - #unmatched``."""
    ncols = mask.shape[1]
    col_match = np.full(ncols, -1)
    for r, c in enumerate(row_match):
        if c >= 0:
            col_match[c] = r
    start = [r for r in range(mask.shape[0]) if row_match[r] < 0]
    rows, cols = set(start), set()
    queue = deque(start)
    while queue:
        r = queue.popleft()
        for c in np.flatnonzero(mask[r]):
            c = int(c)
            if c in cols:
                continue
            cols.add(c)
            r2 = int(col_match[c])
            if r2 < 0:
                raise AssertionError("augmenting path found; matching was not maximum")
            if r2 not in rows:
                rows.add(r2)
                queue.append(r2)
    return sorted(rows), cols


def edges_outside_perfect_matchings(mask: np.ndarray, row_match: np.ndarray) -> list[tuple[int, int]]:
    """Support entries ``(a, b)`` lying in no perfect matching, given one perfect matching.

    An unmatched entry ``(i, j)`` lies in some perfect matching iff it closes an
    alternating cycle, i.e. ``i`` and the row matched to ``j`` share a strongly
    connected component of the row graph ``i -> col_match[j]``.
    """
    n = mask.shape[0]
    col_match = np.empty(n, dtype=int)
    col_match[row_match] = np.arange(n)
    rows, cols = np.nonzero(mask)
    targets = col_match[cols]
    digraph = csr_matrix((np.ones(len(rows)), (rows, targets)), shape=(n, n))
    _, label = connected_components(digraph, directed=True, connection="strong")
    bad = (label[rows] != label[targets])
    return sorted(zip(rows[bad].tolist(), cols[bad].tolist()))


def support_check(m) -> Violator | None:
    """Return a violating pair ``(S, T)``, or None when ``M`` has total support."""
    m = support_matrix(m)
    n = m.shape[0]
    mask = m != 0
    row_match = _matching(mask)
    if np.any(row_match < 0):
        S, nbrs = _hall_violator(mask, row_match)
        T = tuple(c for c in range(n) if c not in nbrs)
        out = Violator(tuple(S), T)
        out.check(m)
        return out
    bad = edges_outside_perfect_matchings(mask, row_match)
    if not bad:
        return None
    a, b = bad[0]
    # delete row a and column b: the remainder has no perfect matching
    rows = [r for r in range(n) if r != a]
    cols = [c for c in range(n) if c != b]
    sub = mask[np.ix_(rows, cols)]
    S_local, nbrs_local = _hall_violator(sub, _matching(sub))
    S = tuple(rows[r] for r in S_local)
    nbrs = {cols[c] for c in nbrs_local}
    T = tuple(c for c in cols if c not in nbrs)
    out = Violator(S, T)
    out.check(m)
    return out


def sinkhorn(m, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> Scaled:
    """Positive ``d`` with every row sum of ``diag(d) M diag(d)`` within ``tol`` of 1.

    Uses the symmetric fixed-point update ``d <- sqrt(d / (M d))``.  Callers
    should establish total support first; otherwise this runs to ``max_iter``.
    """
    m = support_matrix(m)
    n = m.shape[0]
    d = np.ones(n)
    if n == 0:
        return Scaled(d, 0.0, 0)
    dev = np.inf
    for it in range(max_iter + 1):
        md = m @ d
        rows = d * md
        dev = float(np.abs(rows - 1.0).max())
        if dev <= tol:
            return Scaled(d, dev, it)
        if np.any(md <= 0):
            raise ScalingError("zero row in support matrix; no scaling exists", dev)
        d = np.sqrt(d / md)
    raise ScalingError(f"sinkhorn did not converge in {max_iter} iterations "
                       f"(worst row-sum deviation {dev:.3e})", dev)


def scale(m, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> Scaled | Violator:
    """The scaling dichotomy: a doubly-stochasticising ``d`` or a violating pair."""
    violator = support_check(m)
    if violator is not None:
        return violator
    return sinkhorn(m, tol, max_iter)


def normalize_weighting(a: HermitianWeighting, d) -> HermitianWeighting:
    """``Z A Z`` with ``Z = diag(sqrt(d))``; rows of the result have unit L2 norm
    when ``d`` scales ``|A_ij|^2`` to doubly stochastic."""
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError("scaling vector must be strictly positive")
    z = np.sqrt(d)
    return HermitianWeighting(a.host, a.matrix * np.outer(z, z))
