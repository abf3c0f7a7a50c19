"""Spectral bounds on the independence number and certified lower bounds on n>=0(A).

Upper bounds (ratio, inertia) hold for any graph.  The certificate in
:func:`certify_inertia` lower-bounds the number of non-negative eigenvalues of
a Hermitian weighting of a C4-free graph: it splits off zero blocks found by
the scaling dichotomy and, once the squared moduli have total support,
normalises all rows to unit length and bounds ``P(X > 0)`` for the spectral
distribution from its third and fourth moments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import graphs
from .graphs import CliqueCover, Graph, GraphError
from .scaling import DEFAULT_TOL, Violator, normalize_weighting, sinkhorn, support_check
from .spectral import (HermitianWeighting, WeightingError, default_tau, eigen, eigenvalues,
                       inertia, random_weighting, trace_power_walks)

BETA = math.sqrt(3) - 1.5
HZZ_CONST = 4.0 / 9.0 * (2 * math.sqrt(3) - 3)
SYMMETRIC_M3_TOL = 1e-10
LEAF_ROUNDING = 1e-9
SCHEMA = "inertiabound.certificate/1"


class BoundError(ValueError):
    pass


# ---------------------------------------------------------------------------
# upper bounds on alpha


def ratio_bound(a: Union[Graph, HermitianWeighting], force: bool = False,
                rel_tol: float = 1e-8) -> float:
    """``|lmin / (lmax - lmin)| * n`` for a weighting with equal row sums.

    With ``force=True`` the quantity is returned for unequal row sums too; it is
    then only a heuristic number, not a bound.
    """
    if isinstance(a, Graph):
        a = HermitianWeighting.unweighted(a)
    n = a.n
    if n == 0:
        raise BoundError("ratio bound of the empty graph is undefined")
    sums = a.matrix.sum(axis=1)
    spread = float(np.abs(sums - sums[0]).max())
    if not force and spread > rel_tol * max(1.0, float(np.abs(sums).max())):
        raise BoundError("ratio bound requires equal row sums (use force for a heuristic value)")
    spectrum = eigen(a)
    lmax, lmin = spectrum.lambda_max, spectrum.lambda_min
    if lmax <= 0:
        raise BoundError(f"ratio bound needs lambda_max > 0, got {lmax:.3g}")
    return abs(lmin / (lmax - lmin)) * n


def inertia_upper_bound(a: HermitianWeighting, tau: float | None = None) -> int:
    return inertia(eigen(a), tau).n_nonneg


# ---------------------------------------------------------------------------
# moment inequalities


def hzz_upper(m1: float, m2: float, m4: float, y: float) -> float:
    """Upper bound on ``P(Y >= 0)`` from the first, second and fourth moments."""
    if not y > 0:
        raise ValueError(f"y must be positive, got {y}")
    if m4 < m2 * m2 * (1 - 1e-12):
        raise ValueError("inconsistent moments: m4 < m2^2")
    val = 1.0 - HZZ_CONST * (-2 * m1 / y + 3 * m2 / y ** 2 - m4 / y ** 4)
    return min(1.0, max(0.0, val))


def zelen_lower(m4: float, a: float) -> float:
    """``1 / (2 sqrt(m4) (sqrt(m4) - a))`` for standardised ``Y`` with zero third moment.

    At ``a = 0`` this is a lower bound on ``P(Y < 0)``, which is all the
    certificate uses.  Away from zero it is not a valid bound in general
    (``Y = +-1``, ``a = 1/2`` gives 1 against a true probability of 1/2).
    """
    if m4 < 1:
        raise ValueError(f"a standardised variable has m4 >= 1, got {m4}")
    r = math.sqrt(m4)
    if not -r < a < r:
        raise ValueError(f"a must lie in (-sqrt(m4), sqrt(m4)) = ({-r:.6g}, {r:.6g}), got {a}")
    return 1.0 / (2 * r * (r - a))


def moment_positivity_lower(m3: float, m4: float) -> float:
    """Lower bound on ``P(X > 0)`` for ``X`` with mean 0, variance 1.

    The general branch optimises the HZZ inequality at ``y^2 = 2 m4 / 3``,
    giving ``(2 sqrt3 - 3) / m4``; with a vanishing third moment Zelen's
    inequality at ``a = 0`` may do better.
    """
    if m4 < 1:
        raise ValueError(f"moment-inconsistent input: m4 = {m4} < 1")
    general = (2 * math.sqrt(3) - 3) / m4
    if abs(m3) <= SYMMETRIC_M3_TOL:
        return max(zelen_lower(m4, 0.0), general)
    return general


LeafBound = Callable[[float, float], float]


# ---------------------------------------------------------------------------
# the certificate


@dataclass
class Base:
    n: int

    @property
    def bound(self) -> int:
        return self.n


@dataclass
class MomentLeaf:
    n: int
    vertices: tuple[int, ...]
    m2: float
    m3: float
    m4: float
    p_lower: float
    bound: int
    sinkhorn_iterations: int = 0


@dataclass
class Decompose:
    n: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    left: "Node"
    right: "Node"
    middle_count: int

    @property
    def bound(self) -> int:
        return self.left.bound + self.right.bound + self.middle_count


Node = Union[Base, MomentLeaf, Decompose]


@dataclass
class CertificateResult:
    bound: int
    trace: Node
    n: int
    girth5: bool
    meta: dict = field(default_factory=dict)

    @property
    def floor_c4(self) -> float:
        """Raw beta*n; the guaranteed floor is ceil(beta*n) - 1."""
        return BETA * self.n

    @property
    def floor_girth5(self) -> float:
        """Raw n/4; the guaranteed floor on girth-5 hosts is ceil(n/4) - 1."""
        return self.n / 4

    def leaves(self) -> list[MomentLeaf]:
        out, stack = [], [self.trace]
        while stack:
            node = stack.pop()
            if isinstance(node, MomentLeaf):
                out.append(node)
            elif isinstance(node, Decompose):
                stack.extend((node.right, node.left))
        return out

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "n": self.n, "bound": self.bound, "girth5": self.girth5,
                "meta": self.meta, "trace": _node_to_dict(self.trace)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "CertificateResult":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {data.get('schema')!r}")
        trace = _node_from_dict(data["trace"])
        if trace.bound != data["bound"]:
            raise ValueError("certificate bound disagrees with its trace")
        return cls(data["bound"], trace, data["n"], data["girth5"], data.get("meta", {}))

    @classmethod
    def from_json(cls, text: str) -> "CertificateResult":
        return cls.from_dict(json.loads(text))


def _node_to_dict(node: Node) -> dict:
    if isinstance(node, Base):
        return {"kind": "base", "n": node.n, "bound": node.bound}
    if isinstance(node, MomentLeaf):
        return {"kind": "moment_leaf", "n": node.n, "vertices": list(node.vertices),
                "m2": node.m2, "m3": node.m3, "m4": node.m4, "p_lower": node.p_lower,
                "bound": node.bound, "sinkhorn_iterations": node.sinkhorn_iterations}
    return {"kind": "decompose", "n": node.n, "S": list(node.S), "T": list(node.T),
            "middle_count": node.middle_count, "bound": node.bound,
            "left": _node_to_dict(node.left), "right": _node_to_dict(node.right)}


def _node_from_dict(d: dict) -> Node:
    kind = d["kind"]
    if kind == "base":
        return Base(d["n"])
    if kind == "moment_leaf":
        return MomentLeaf(d["n"], tuple(d["vertices"]), d["m2"], d["m3"], d["m4"],
                          d["p_lower"], d["bound"], d.get("sinkhorn_iterations", 0))
    if kind == "decompose":
        return Decompose(d["n"], tuple(d["S"]), tuple(d["T"]), _node_from_dict(d["left"]),
                         _node_from_dict(d["right"]), d["middle_count"])
    raise ValueError(f"unknown certificate node kind {kind!r}")


def certify_inertia(a: HermitianWeighting, leaf_bound: LeafBound = moment_positivity_lower,
                    tol: float = DEFAULT_TOL, max_iter: int = 100_000) -> CertificateResult:
    """Certified lower bound on ``n>=0(A)`` for a weighting of a C4-free graph.

    Recursion: graphs on at most one vertex are trivial.  Otherwise a violating
    pair ``(S, T)`` for ``M = |A|^2`` splits off ``A[S\\T]`` and ``A[T\\S]``
    (the rows in ``S & T`` give zero eigenvalues of the block ``A[S | T]``,
    which interlaces into ``A``).  With total support the weighting is
    rescaled to unit row norms and the leaf bound ``ceil(n p - 1e-9)`` applies.
    """
    c4 = graphs.find_c4(a.host)
    if c4 is not None:
        raise GraphError(f"certificate needs a C4-free host; found the 4-cycle {c4}")
    girth5 = graphs.girth(a.host) >= 5

    def rec(w: HermitianWeighting, labels: list[int]) -> Node:
        n = w.n
        if n <= 1:
            return Base(n)
        m = w.squared_moduli()
        found = support_check(m)
        if isinstance(found, Violator):
            S, T = set(found.S), set(found.T)
            left_idx = sorted(S - T)
            right_idx = sorted(T - S)
            left = rec(w.restrict(left_idx), [labels[i] for i in left_idx])
            right = rec(w.restrict(right_idx), [labels[i] for i in right_idx])
            return Decompose(n, tuple(labels[i] for i in found.S),
                             tuple(labels[i] for i in found.T), left, right, len(S & T))
        scaled = sinkhorn(m, tol, max_iter)
        b = normalize_weighting(w, scaled.d)
        m2 = trace_power_walks(b, 2) / n
        m3 = trace_power_walks(b, 3) / n
        m4 = trace_power_walks(b, 4) / n
        # P(X > 0) is scale invariant, so standardise with the computed m2
        s3 = m3 / m2 ** 1.5
        s4 = m4 / m2 ** 2
        if 1 - 1e-9 < s4 < 1:
            s4 = 1.0
        p = leaf_bound(s3, s4)
        bound = max(0, math.ceil(n * p - LEAF_ROUNDING))
        return MomentLeaf(n, tuple(labels), m2, m3, m4, p, bound, scaled.iterations)

    trace = rec(a, list(range(a.n)))
    return CertificateResult(trace.bound, trace, a.n, girth5)


# ---------------------------------------------------------------------------
# explicit weightings


def clique_cover_weighting(g: Graph, cover: CliqueCover) -> HermitianWeighting:
    """Unit weights inside each block: a disjoint union of cliques, whose
    non-negative eigenvalues are one per block."""
    cover.validate(g)
    a = np.zeros((g.n, g.n), dtype=complex)
    for block in cover.blocks:
        idx = np.array(block)
        a[np.ix_(idx, idx)] = 1.0
        a[idx, idx] = 0.0
    return HermitianWeighting(g, a)


def _bipartition(g: Graph, comp: list[int]) -> tuple[list[int], list[int]] | None:
    side = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if w not in side:
                side[w] = 1 - side[v]
                stack.append(w)
            elif side[w] == side[v]:
                return None
    left = sorted(v for v in comp if side[v] == 0)
    right = sorted(v for v in comp if side[v] == 1)
    return left, right


def bipartite_block_weighting(g: Graph) -> HermitianWeighting:
    """Weighting of a disjoint union of complete and complete bipartite graphs.

    Cliques get unit weights (one non-negative eigenvalue each); a ``K_{a,b}``
    gets a matching of size ``min(a, b)`` across its sides, so it contributes
    ``max(a, b)`` non-negative eigenvalues, its independence number.
    """
    a = np.zeros((g.n, g.n), dtype=complex)
    for comp in g.components():
        k = len(comp)
        if all(g.degree(v) == k - 1 for v in comp):
            idx = np.array(comp)
            a[np.ix_(idx, idx)] = 1.0
            a[idx, idx] = 0.0
            continue
        parts = _bipartition(g, comp)
        if parts is None or any(g.degree(v) != len(parts[1]) for v in parts[0]) \
                or any(g.degree(v) != len(parts[0]) for v in parts[1]):
            raise GraphError(f"component {comp[:6]}... is neither complete nor complete bipartite")
        left, right = parts
        for u, v in zip(left, right):
            a[u, v] = a[v, u] = 1.0
    return HermitianWeighting(g, a)


# ---------------------------------------------------------------------------
# heuristic search for a weighting with few non-negative eigenvalues


def _score(vals: np.ndarray, tau: float | None) -> tuple[int, float]:
    n = len(vals)
    fro = float(np.sqrt(np.sum(vals ** 2)))
    t = default_tau(fro, n) if tau is None else tau
    k = int(np.sum(vals >= -t))
    # smallest non-negative eigenvalue, relative to the overall scale
    edge = float(vals[k - 1]) / fro if k and fro > 0 else 0.0
    return k, edge


def weight_search(g: Graph, seed: int, restarts: int = 20, steps: int = 200,
                  tau: float | None = None, alpha: int | None = None,
                  law: str = "gaussian-complex", limit: int = 2000
                  ) -> tuple[HermitianWeighting, int]:
    """Random-restart local search for a weighting minimising ``n>=0``.

    Restart 0 starts from the plain adjacency matrix, restart 1 from the greedy
    clique-cover weighting, the rest from random weightings.  Moves perturb
    the real or imaginary part of one edge weight or flip its sign; a move is
    kept when it lowers ``(n>=0, smallest non-negative eigenvalue / |A|_F)``.
    Restart ``r`` draws from ``SeedSequence(seed).spawn(restarts)[r]``.
    """
    if g.n > limit:
        raise GraphError(f"weight search limited to n <= {limit}, got {g.n}")
    edges = np.array(g.edges(), dtype=int).reshape(-1, 2)
    zero = HermitianWeighting.zero(g)
    if len(edges) == 0 or restarts <= 0:
        return zero, g.n
    best_mat, best_score = None, (g.n + 1, math.inf)
    children = np.random.SeedSequence(seed).spawn(restarts)
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        if r == 0:
            mat = g.adjacency_matrix().astype(complex)
        elif r == 1:
            mat = clique_cover_weighting(g, graphs.greedy_clique_cover(g)).matrix.copy()
        else:
            mat = random_weighting(g, int(rng.integers(2 ** 63)), law).matrix.copy()
        score = _score(eigenvalues(mat), tau)
        for _ in range(steps):
            i, j = edges[rng.integers(len(edges))]
            old = mat[i, j]
            move = rng.integers(3)
            if move == 0:
                new = old + rng.standard_normal()
            elif move == 1:
                new = old + 1j * rng.standard_normal()
            else:
                new = -old
            mat[i, j], mat[j, i] = new, np.conj(new)
            cand = _score(eigenvalues(mat), tau)
            if cand < score:
                score = cand
            else:
                mat[i, j], mat[j, i] = old, np.conj(old)
        if score < best_score:
            best_mat, best_score = mat.copy(), score
    best = HermitianWeighting(g, best_mat)
    k = inertia_upper_bound(best, tau)
    if alpha is not None and k < alpha:
        raise AssertionError(f"inertia bound violated: n>=0 = {k} < alpha = {alpha}")
    return best, k


# ---------------------------------------------------------------------------
# aggregated report


REPORT_FIELDS = ("graph", "n", "m", "alpha", "ratio", "ratio_heuristic", "inertia_unweighted",
                 "inertia_weighting", "clique_cover_bound", "certificate")


@dataclass
class BoundReport:
    graph: str
    n: int
    m: int
    alpha_exact: int | None
    ratio: float | None
    ratio_heuristic: bool
    inertia_unweighted: int
    clique_cover_bound: int
    inertia_weighting: int | None = None
    certificate: CertificateResult | None = None

    def check(self) -> None:
        if self.alpha_exact is None:
            return
        uppers = {"inertia_unweighted": self.inertia_unweighted,
                  "clique_cover_bound": self.clique_cover_bound}
        if self.inertia_weighting is not None:
            uppers["inertia_weighting"] = self.inertia_weighting
        if self.ratio is not None and not self.ratio_heuristic:
            uppers["ratio"] = self.ratio
        for name, val in uppers.items():
            if self.alpha_exact > val + 1e-9:
                raise AssertionError(f"alpha = {self.alpha_exact} exceeds {name} = {val}")

    def row(self) -> dict:
        return {"graph": self.graph, "n": self.n, "m": self.m,
                "alpha": "" if self.alpha_exact is None else self.alpha_exact,
                "ratio": "" if self.ratio is None else f"{self.ratio:.10g}",
                "ratio_heuristic": int(self.ratio_heuristic),
                "inertia_unweighted": self.inertia_unweighted,
                "inertia_weighting": "" if self.inertia_weighting is None else self.inertia_weighting,
                "clique_cover_bound": self.clique_cover_bound,
                "certificate": "" if self.certificate is None else self.certificate.bound}


def bound_report(g: Graph, weighting: HermitianWeighting | None = None, tau: float | None = None,
                 exact_limit: int = graphs.DEFAULT_EXACT_LIMIT, force_ratio: bool = False,
                 certify: bool = False) -> BoundReport:
    alpha = graphs.independence_number(g, exact_limit) if g.n <= exact_limit else None
    ratio, heuristic = None, False
    if g.m:
        regular = g.is_regular()
        if regular or force_ratio:
            ratio, heuristic = ratio_bound(g, force=force_ratio), not regular
    unweighted = inertia_upper_bound(HermitianWeighting.unweighted(g), tau)
    cover = len(graphs.greedy_clique_cover(g))
    weighted = inertia_upper_bound(weighting, tau) if weighting is not None else None
    cert = None
    if certify and graphs.is_c4_free(g):
        cert = certify_inertia(weighting if weighting is not None
                               else HermitianWeighting.unweighted(g))
    report = BoundReport(g.name, g.n, g.m, alpha, ratio, heuristic, unweighted, cover,
                         weighted, cert)
    report.check()
    return report


__all__ = [
    "BETA", "Base", "BoundError", "BoundReport", "CertificateResult", "Decompose", "MomentLeaf",
    "WeightingError", "bipartite_block_weighting", "bound_report", "certify_inertia",
    "clique_cover_weighting", "hzz_upper", "inertia_upper_bound", "moment_positivity_lower",
    "ratio_bound", "weight_search", "zelen_lower",
]
