"""Hermitian weightings of a graph, eigenvalues, inertia and spectral moments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, GraphError, find_c4, triangles

HERMITIAN_TOL = 1e-12
CONDITION_LIMIT = 1e12
LAWS = ("unit-complex", "gaussian-real", "gaussian-complex")


class WeightingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HermitianWeighting:
    """A Hermitian matrix supported on the edges of ``host`` (zero diagonal)."""

    host: Graph
    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=complex)
        n = self.host.n
        if a.shape != (n, n):
            raise WeightingError(f"matrix shape {a.shape} does not match host on {n} vertices")
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        if np.abs(a - a.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
            raise WeightingError("weighting is not Hermitian")
        if np.abs(np.diag(a)).max(initial=0.0) > 0:
            raise WeightingError("weighting has a nonzero diagonal entry")
        mask = self.host.adjacency_matrix() == 0
        bad = np.argwhere(mask & (a != 0))
        if bad.size:
            i, j = bad[0]
            raise WeightingError(f"nonzero weight on non-edge ({i}, {j})")
        a = (a + a.conj().T) / 2
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def n(self) -> int:
        return self.host.n

    @classmethod
    def unweighted(cls, g: Graph) -> "HermitianWeighting":
        return cls(g, g.adjacency_matrix().astype(complex))

    @classmethod
    def zero(cls, g: Graph) -> "HermitianWeighting":
        return cls(g, np.zeros((g.n, g.n), dtype=complex))

    def restrict(self, vertices: Sequence[int]) -> "HermitianWeighting":
        """Principal submatrix on ``vertices`` as a weighting of the induced subgraph."""
        idx = list(vertices)
        return HermitianWeighting(self.host.induced(idx), self.matrix[np.ix_(idx, idx)])

    def squared_moduli(self) -> np.ndarray:
        return np.abs(self.matrix) ** 2

    def is_real(self) -> bool:
        return not np.any(self.matrix.imag)


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, HermitianWeighting):
        return a.matrix
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise WeightingError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    residual: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(self.eigenvalues ** 2)))

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])

    def default_tau(self) -> float:
        return default_tau(self.frobenius, self.n)


def default_tau(frobenius: float, n: int) -> float:
    return 1e-8 * max(1.0, frobenius / np.sqrt(n)) if n else 1e-8


def check_hermitian(a: np.ndarray) -> None:
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
        raise WeightingError("matrix is not Hermitian")


def eigen(a) -> Spectrum:
    """All eigenvalues (descending) with the worst backward residual ``|Av - lv|``."""
    a = _as_matrix(a)
    check_hermitian(a)
    n = a.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), 0.0)
    h = (a + a.conj().T) / 2
    if not np.iscomplexobj(h) or not np.any(h.imag):
        h = h.real
    vals, vecs = np.linalg.eigh(h)
    resid = np.linalg.norm(h @ vecs - vecs * vals, axis=0).max()
    return Spectrum(vals[::-1].copy(), float(resid))


def eigenvalues(a) -> np.ndarray:
    """Descending eigenvalues only; the cheap path used inside search loops."""
    a = _as_matrix(a)
    h = a.real if not np.any(a.imag) else a
    return np.linalg.eigvalsh(h)[::-1]


@dataclass(frozen=True)
class InertiaTriple:
    n_neg: int
    n_zero: int
    n_pos: int
    tau: float

    @property
    def n(self) -> int:
        return self.n_neg + self.n_zero + self.n_pos

    @property
    def n_nonneg(self) -> int:
        return self.n_zero + self.n_pos


def inertia(spectrum: Spectrum | np.ndarray, tau: float | None = None) -> InertiaTriple:
    vals = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else np.asarray(spectrum)
    if tau is None:
        tau = default_tau(float(np.sqrt(np.sum(vals ** 2))), len(vals))
    if tau < 0:
        raise ValueError("tau must be non-negative")
    n_neg = int(np.sum(vals < -tau))
    n_pos = int(np.sum(vals > tau))
    return InertiaTriple(n_neg, len(vals) - n_neg - n_pos, n_pos, tau)


def n_nonneg(a, tau: float | None = None) -> int:
    return inertia(eigenvalues(a), tau).n_nonneg


@dataclass(frozen=True)
class MomentVector:
    m1: float
    m2: float
    m3: float
    m4: float


def esd_moments(spectrum: Spectrum) -> MomentVector:
    vals = spectrum.eigenvalues
    if not len(vals):
        return MomentVector(0.0, 0.0, 0.0, 0.0)
    return MomentVector(*(float(np.mean(vals ** k)) for k in (1, 2, 3, 4)))


def trace_power_walks(a: HermitianWeighting, k: int) -> float:
    """``tr(A^k)`` for k in {2, 3, 4} by summing over closed walks of the host.

    k=2 sums ``|A_ij|^2``; k=3 sums over triangles; k=4 uses the cherry count
    ``2 sum_i r_i^2 - sum_ij |A_ij|^4`` (``r_i`` the squared row norm), which
    is valid only when the host has no 4-cycle.
    """
    sq = a.squared_moduli()
    if k == 2:
        return float(sq.sum())
    if k == 3:
        m = a.matrix
        total = sum((m[i, j] * m[j, l] * m[l, i]).real for i, j, l in triangles(a.host))
        return 6.0 * float(total)
    if k == 4:
        c4 = find_c4(a.host)
        if c4 is not None:
            raise GraphError(f"cherry formula invalid: host contains the 4-cycle {c4}")
        rows = sq.sum(axis=1)
        return float(2.0 * np.sum(rows ** 2) - np.sum(sq ** 2))
    raise ValueError(f"closed-walk trace only implemented for k in (2, 3, 4), got {k}")


def congruence(a, z) -> np.ndarray:
    """``Z A Z*``; rejects numerically singular ``Z``."""
    a = _as_matrix(a)
    z = np.asarray(z)
    check_hermitian(a)
    cond = np.linalg.cond(z) if z.size else 1.0
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise WeightingError(f"congruence matrix is numerically singular (cond={cond:.3g})")
    b = z @ a @ z.conj().T
    return (b + b.conj().T) / 2


def random_weighting(g: Graph, seed: int, law: str = "gaussian-real") -> HermitianWeighting:
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {LAWS}")
    rng = np.random.default_rng(seed)
    edges = g.edges()
    k = len(edges)
    if law == "unit-complex":
        w = np.exp(2j * np.pi * rng.random(k))
    elif law == "gaussian-real":
        w = rng.standard_normal(k).astype(complex)
    else:
        w = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
    a = np.zeros((g.n, g.n), dtype=complex)
    if k:
        iu, ju = np.array(edges).T
        a[iu, ju] = w
        a[ju, iu] = w.conj()
    return HermitianWeighting(g, a)


# ---------------------------------------------------------------------------
# weighting file: "n" then "i j re im" per nonzero upper-triangle entry


def format_weighting(a: HermitianWeighting) -> str:
    m = a.matrix
    lines = [str(a.n)]
    for i in range(a.n):
        for j in range(i + 1, a.n):
            if m[i, j] != 0:
                lines.append(f"{i} {j} {float(m[i, j].real)!r} {float(m[i, j].imag)!r}")
    return "\n".join(lines) + "\n"


def parse_weighting(text: str, host: Graph | None = None) -> HermitianWeighting:
    """Parse a weighting file.  Without ``host`` the support graph is used."""
    lines = [(k, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines(), 1)]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise GraphError("line 1: empty weighting file")
    k, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise GraphError(f"line {k}: expected header 'n', got {head!r}") from None
    if host is not None and host.n != n:
        raise GraphError(f"line {k}: weighting has n={n}, graph has n={host.n}")
    a = np.zeros((n, n), dtype=complex)
    for k, ln in lines[1:]:
        parts = ln.split()
        try:
            i, j = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except (ValueError, IndexError):
            raise GraphError(f"line {k}: expected 'i j re im', got {ln!r}") from None
        if len(parts) != 4:
            raise GraphError(f"line {k}: expected 4 fields, got {len(parts)}")
        if not (0 <= i < j < n):
            raise GraphError(f"line {k}: need 0 <= i < j < {n}, got {i} {j}")
        if host is not None and not host.has_edge(i, j) and (re or im):
            raise GraphError(f"line {k}: weight on non-edge {i} {j}")
        a[i, j] = complex(re, im)
        a[j, i] = complex(re, -im)
    if host is None:
        host = Graph.from_matrix(a)
    return HermitianWeighting(host, a)


def read_weighting(path, host: Graph | None = None) -> HermitianWeighting:
    with open(path) as fh:
        return parse_weighting(fh.read(), host)


def write_weighting(a: HermitianWeighting, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_weighting(a))


def format_spectrum(spectrum: Spectrum) -> str:
    return "".join(f"{float(v)!r}\n" for v in spectrum.eigenvalues)
