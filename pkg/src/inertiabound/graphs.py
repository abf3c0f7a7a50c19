"""Simple undirected graphs, finite-field generators and exact combinatorial queries.

Vertices are always labelled ``0..n-1``.  A :class:`Graph` is immutable; the
generators return fresh instances and induced subgraphs relabel their
vertices consecutively (the original labels are kept alongside).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_EXACT_LIMIT = 64


class GraphError(ValueError):
    """Rejected graph input (bad parameters, malformed files, unmet preconditions)."""


class ExactSolverLimitError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[frozenset[int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise GraphError(f"adjacency has {len(self.adjacency)} rows, expected {self.n}")
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise GraphError(f"self-loop at vertex {v}")
            for w in nbrs:
                if not 0 <= w < self.n:
                    raise GraphError(f"neighbour {w} of {v} out of range")
                if v not in self.adjacency[w]:
                    raise GraphError(f"edge {v}-{w} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs), name)

    @classmethod
    def from_matrix(cls, mat, name: str = "") -> "Graph":
        """Support graph of a square matrix (nonzero off-diagonal entries)."""
        mat = np.asarray(mat)
        n = mat.shape[0]
        rows, cols = np.nonzero(mat)
        return cls.from_edges(n, ((int(i), int(j)) for i, j in zip(rows, cols) if i < j), name)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on ``vertices``; vertex ``vertices[k]`` becomes ``k``."""
        index = {v: k for k, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise GraphError("repeated vertex in induced subgraph")
        edges = [(index[u], index[w]) for u in vertices for w in self.adjacency[u]
                 if w in index and index[u] < index[w]]
        return Graph.from_edges(len(vertices), edges, self.name)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps


# ---------------------------------------------------------------------------
# generators


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


def paley(q: int) -> Graph:
    """Paley graph on Z_q: i ~ j iff i - j is a nonzero square mod q."""
    if not is_prime(q):
        raise GraphError(f"Paley graph needs a prime order, got {q}")
    if q % 4 != 1:
        raise GraphError(f"Paley graph needs q = 1 (mod 4), got {q}")
    squares = {x * x % q for x in range(1, q)}
    edges = [(i, j) for i in range(q) for j in range(i + 1, q) if (j - i) % q in squares]
    return Graph.from_edges(q, edges, f"paley{q}")


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Points of PG(2, q), normalised so the first nonzero coordinate is 1."""
    pts = []
    for x in itertools.product(range(q), repeat=3):
        nz = [c for c in x if c]
        if nz and nz[0] == 1:
            pts.append(x)
    return pts


def polarity(q: int) -> Graph:
    """Orthogonal-polarity graph of PG(2, q): x ~ y iff x.y = 0 (mod q), x != y."""
    if not is_prime(q):
        raise GraphError(f"polarity graph needs a prime field order, got {q}")
    pts = projective_points(q)
    n = len(pts)
    vecs = np.array(pts, dtype=np.int64)
    dots = (vecs @ vecs.T) % q
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if dots[i, j] == 0]
    return Graph.from_edges(n, edges, f"polarity{q}")


def gnp(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()), f"gnp{n}_{p}_{seed}")


def _positive(*sizes: int) -> None:
    if any(s <= 0 for s in sizes):
        raise GraphError(f"sizes must be positive, got {sizes}")


def cycle(n: int) -> Graph:
    _positive(n)
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), f"C{n}")


def complete(n: int) -> Graph:
    _positive(n)
    return Graph.from_edges(n, itertools.combinations(range(n), 2), f"K{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    _positive(a, b)
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return Graph.from_edges(a + b, edges, f"K{a},{b}")


def star(k: int) -> Graph:
    g = complete_bipartite(1, k)
    return Graph(g.n, g.adjacency, f"star{k}")


def path(n: int) -> Graph:
    _positive(n)
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)), f"P{n}")


def petersen() -> Graph:
    # Kneser graph K(5, 2): 2-subsets of a 5-set, adjacent when disjoint
    subsets = list(itertools.combinations(range(5), 2))
    edges = [(i, j) for i, j in itertools.combinations(range(10), 2)
             if not set(subsets[i]) & set(subsets[j])]
    return Graph.from_edges(10, edges, "petersen")


def empty(n: int) -> Graph:
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    return Graph.from_edges(n, [], f"E{n}")


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    _positive(n)
    if n <= 2:
        return path(n)
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2).tolist()
    deg = [1] * n
    for v in seq:
        deg[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(n) if deg[u] == 1)
        edges.append((leaf, v))
        deg[leaf] -= 1
        deg[v] -= 1
    u, w = [x for x in range(n) if deg[x] == 1]
    edges.append((u, w))
    return Graph.from_edges(n, edges, f"tree{n}_{seed}")


def disjoint_union(*graphs: Graph) -> Graph:
    if not graphs:
        raise GraphError("disjoint union of nothing")
    edges, offset = [], 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph.from_edges(offset, edges, "+".join(g.name for g in graphs))


def remark_graph(d: int) -> Graph:
    """K_{d,d} together with d disjoint copies of K_{d+1}."""
    _positive(d)
    return disjoint_union(complete_bipartite(d, d), *[complete(d + 1) for _ in range(d)])


STRUCTURED = {
    "cycle": cycle,
    "complete": complete,
    "bipartite": complete_bipartite,
    "star": star,
    "path": path,
    "petersen": petersen,
    "empty": empty,
    "remark": remark_graph,
}


def structured(kind: str, *params: int) -> Graph:
    try:
        maker = STRUCTURED[kind]
    except KeyError:
        raise GraphError(f"unknown graph kind {kind!r}; choose from {sorted(STRUCTURED)}") from None
    try:
        return maker(*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {kind}: {params}") from exc


# ---------------------------------------------------------------------------
# queries


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for w in g.adjacency[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def find_c4(g: Graph) -> tuple[int, int, int, int] | None:
    """A 4-cycle ``(a, x, b, y)`` of ``g`` or None.  Two vertices with two common
    neighbours are exactly a 4-cycle."""
    for a in range(g.n):
        seen: dict[int, int] = {}
        for x in sorted(g.adjacency[a]):
            for b in sorted(g.adjacency[x]):
                if b == a:
                    continue
                if b in seen:
                    return (a, seen[b], b, x)
                seen[b] = x
    return None


def is_c4_free(g: Graph) -> bool:
    return find_c4(g) is None


def find_triangle(g: Graph, alive: set[int] | None = None) -> tuple[int, int, int] | None:
    """Lexicographically first triangle ``i < j < k`` among ``alive`` vertices."""
    verts = range(g.n) if alive is None else sorted(alive)
    for i in verts:
        ni = g.adjacency[i] if alive is None else g.adjacency[i] & alive
        for j in sorted(w for w in ni if w > i):
            common = ni & g.adjacency[j]
            later = [k for k in common if k > j]
            if later:
                return (i, j, min(later))
    return None


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for i in range(g.n):
        for j in sorted(w for w in g.adjacency[i] if w > i):
            for k in sorted(g.adjacency[i] & g.adjacency[j]):
                if k > j:
                    out.append((i, j, k))
    return out


def _bitmasks(g: Graph) -> list[int]:
    return [sum(1 << w for w in nbrs) for nbrs in g.adjacency]


def _clique_cover_bound(cand: int, adj: list[int]) -> int:
    """Number of classes in a greedy partition of ``cand`` into cliques."""
    classes: list[int] = []
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        for idx, cls in enumerate(classes):
            if cls & adj[v] == cls:
                classes[idx] = cls | low
                break
        else:
            classes.append(low)
    return len(classes)


def independence_number(g: Graph, limit: int = DEFAULT_EXACT_LIMIT) -> int:
    """Exact independence number by branch and bound.

    Branches on a vertex of maximum degree in the remaining candidate set and
    prunes with a greedy clique partition (a colouring of the complement).
    """
    if g.n > limit:
        raise ExactSolverLimitError(
            f"exact solver limit exceeded: n={g.n} > {limit} (raise --exact-limit to force)")
    adj = _bitmasks(g)
    best = 0

    def search(cand: int, size: int) -> None:
        nonlocal best
        # vertices with no neighbour among candidates can always be taken
        while True:
            free = 0
            rest = cand
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                if not adj[v] & cand:
                    free |= low
            if not free:
                break
            size += bin(free).count("1")
            cand &= ~free
        if not cand:
            best = max(best, size)
            return
        if size + _clique_cover_bound(cand, adj) <= best:
            return
        v, top = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            deg = bin(adj[u] & cand).count("1")
            if deg > top:
                v, top = u, deg
        search(cand & ~(1 << v) & ~adj[v], size + 1)
        search(cand & ~(1 << v), size)

    search((1 << g.n) - 1, 0)
    return best


def is_independent(g: Graph, verts: Iterable[int]) -> bool:
    vs = list(verts)
    return all(not g.has_edge(u, v) for u, v in itertools.combinations(vs, 2))


@dataclass(frozen=True)
class CliqueCover:
    blocks: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def validate(self, g: Graph) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise GraphError("empty block in clique cover")
            for v in block:
                if not 0 <= v < g.n:
                    raise GraphError(f"vertex {v} out of range in clique cover")
                if v in seen:
                    raise GraphError(f"vertex {v} covered twice")
                seen.add(v)
            for u, v in itertools.combinations(block, 2):
                if not g.has_edge(u, v):
                    raise GraphError(f"block {block} is not a clique: {u}, {v} non-adjacent")
        if len(seen) != g.n:
            raise GraphError(f"clique cover misses vertices {sorted(set(range(g.n)) - seen)}")


def greedy_clique_cover(g: Graph) -> CliqueCover:
    """Partition the vertices into cliques, growing each greedily.

    Seeds and extensions are taken in order of decreasing degree, ties broken
    by label.
    """
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    uncovered = set(range(g.n))
    blocks = []
    for seed in order:
        if seed not in uncovered:
            continue
        block = [seed]
        common = set(g.adjacency[seed]) & uncovered
        for v in order:
            if v in common:
                block.append(v)
                common &= g.adjacency[v]
        uncovered.difference_update(block)
        blocks.append(tuple(sorted(block)))
    return CliqueCover(tuple(blocks))


@dataclass(frozen=True)
class Girth5Extraction:
    graph: Graph
    kept: tuple[int, ...]
    source_n: int

    @property
    def retained_fraction(self) -> float:
        return len(self.kept) / self.source_n if self.source_n else 1.0


def extract_girth5(g: Graph) -> Girth5Extraction:
    """Delete vertices of a C4-free graph until no triangle remains.

    Each round takes the first triangle (lexicographic) and removes its vertex
    of largest current degree, lowest label on ties.  Nothing about how many
    vertices survive is guaranteed.
    """
    if not is_c4_free(g):
        raise GraphError("extract_girth5 needs a C4-free input graph")
    alive = set(range(g.n))
    while True:
        tri = find_triangle(g, alive)
        if tri is None:
            break
        victim = max(tri, key=lambda v: (len(g.adjacency[v] & alive), -v))
        alive.discard(victim)
    kept = tuple(sorted(alive))
    sub = g.induced(kept)
    sub = Graph(sub.n, sub.adjacency, f"{g.name}-girth5" if g.name else "girth5")
    return Girth5Extraction(sub, kept, g.n)


# ---------------------------------------------------------------------------
# edge-list format: "n m" then m lines "u v" with u < v


def format_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str, name: str = "") -> Graph:
    lines = [(k, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines(), 1)]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise GraphError("line 1: empty edge-list file")
    k, head = lines[0]
    try:
        n, m = (int(t) for t in head.split())
    except ValueError:
        raise GraphError(f"line {k}: expected header 'n m', got {head!r}") from None
    if n < 0 or m < 0:
        raise GraphError(f"line {k}: negative count in header")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"line {k}: header announces {m} edges, file has {len(body)}")
    edges = set()
    for k, ln in body:
        try:
            u, v = (int(t) for t in ln.split())
        except ValueError:
            raise GraphError(f"line {k}: expected 'u v', got {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {k}: vertex out of range 0..{n - 1}")
        if u == v:
            raise GraphError(f"line {k}: self-loop at {u}")
        if u > v:
            raise GraphError(f"line {k}: edges must be written with u < v")
        if (u, v) in edges:
            raise GraphError(f"line {k}: duplicate edge {u} {v}")
        edges.add((u, v))
    return Graph.from_edges(n, sorted(edges), name)


def read_edgelist(path) -> Graph:
    with open(path) as fh:
        return parse_edgelist(fh.read(), name=str(path))


def write_edgelist(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edgelist(g))
