import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inertiabound import graphs
from inertiabound.graphs import GraphError
from inertiabound.spectral import (HermitianWeighting, WeightingError, congruence, eigen,
                                   esd_moments, format_spectrum, format_weighting, inertia,
                                   parse_weighting, random_weighting, trace_power_walks)


def closed_walk_sum(mat, k):
    """sum over all vertex k-tuples of A_{i0 i1} ... A_{i(k-1) i0}; tiny n only."""
    n = mat.shape[0]
    total = 0
    for walk in itertools.product(range(n), repeat=k):
        term = 1
        for a, b in zip(walk, walk[1:] + walk[:1]):
            term *= mat[a, b]
            if term == 0:
                break
        total += term
    return total


def test_eigen_zero():
    spectrum = eigen(np.zeros((3, 3)))
    assert np.all(spectrum.eigenvalues == 0)
    assert inertia(spectrum, 1e-8) == inertia(spectrum, 1e-8).__class__(0, 3, 0, 1e-8)


def test_eigen_c5():
    spectrum = eigen(HermitianWeighting.unweighted(graphs.cycle(5)))
    expected = sorted((2 * math.cos(2 * math.pi * k / 5) for k in range(5)), reverse=True)
    assert np.allclose(spectrum.eigenvalues, expected, atol=1e-12)
    assert np.allclose(spectrum.eigenvalues, [2, 0.6180, 0.6180, -1.6180, -1.6180], atol=1e-4)
    assert spectrum.residual <= 1e-9 * max(1, math.sqrt(10))
    t = inertia(spectrum)
    assert (t.n_neg, t.n_zero, t.n_pos) == (2, 0, 3)


def test_eigen_paley17():
    spectrum = eigen(HermitianWeighting.unweighted(graphs.paley(17)))
    r = math.sqrt(17)
    expected = [8.0] + [(-1 + r) / 2] * 8 + [(-1 - r) / 2] * 8
    assert np.allclose(spectrum.eigenvalues, expected, atol=1e-10)
    t = inertia(spectrum)
    assert (t.n_neg, t.n_zero, t.n_pos) == (8, 0, 9)


def test_eigen_rejects_non_hermitian():
    with pytest.raises(WeightingError):
        eigen(np.array([[0, 1], [2, 0]]))


def test_residual_bound_random(rng):
    for _ in range(20):
        g = graphs.gnp(30, 0.3, int(rng.integers(1000)))
        a = random_weighting(g, int(rng.integers(1000)), "gaussian-complex")
        spectrum = eigen(a)
        assert spectrum.residual <= 1e-9 * max(1.0, np.linalg.norm(a.matrix))
        assert abs(spectrum.eigenvalues.sum()) <= 1e-9 * max(1.0, np.linalg.norm(a.matrix))
        assert np.all(np.diff(spectrum.eigenvalues) <= 0)


def test_moments_examples():
    assert esd_moments(eigen(np.zeros((4, 4)))) == esd_moments(eigen(np.zeros((4, 4))))
    assert esd_moments(eigen(np.zeros((4, 4)))).m4 == 0
    k2 = esd_moments(eigen(HermitianWeighting.unweighted(graphs.complete(2))))
    assert np.allclose([k2.m1, k2.m2, k2.m3, k2.m4], [0, 1, 0, 1])
    c5 = graphs.cycle(5).adjacency_matrix() / math.sqrt(2)
    # oracle: 30 closed 4-walks in C5, each weighted (1/sqrt2)^4
    assert closed_walk_sum(graphs.cycle(5).adjacency_matrix(), 4) == 30
    mv = esd_moments(eigen(c5))
    assert np.allclose([mv.m1, mv.m2, mv.m3, mv.m4], [0, 1, 0, 1.5], atol=1e-12)


def test_trace_walks_examples():
    c5 = HermitianWeighting.unweighted(graphs.cycle(5))
    assert trace_power_walks(c5, 4) == pytest.approx(30)
    assert trace_power_walks(c5, 3) == 0
    k3 = HermitianWeighting.unweighted(graphs.complete(3))
    assert trace_power_walks(k3, 3) == pytest.approx(6)
    with pytest.raises(GraphError, match="cherry formula invalid"):
        trace_power_walks(HermitianWeighting.unweighted(graphs.complete(4)), 4)
    with pytest.raises(ValueError):
        trace_power_walks(c5, 5)


@pytest.mark.parametrize("maker", [lambda: graphs.polarity(2), lambda: graphs.cycle(6),
                                   lambda: graphs.petersen(), lambda: graphs.random_tree(7, 1)])
@pytest.mark.parametrize("law", ["unit-complex", "gaussian-real", "gaussian-complex"])
def test_trace_walks_against_enumeration(maker, law):
    a = random_weighting(maker(), 5, law)
    for k in (2, 3):
        assert trace_power_walks(a, k) == pytest.approx(closed_walk_sum(a.matrix, k).real, abs=1e-9)
    if a.n <= 8:
        assert trace_power_walks(a, 4) == pytest.approx(closed_walk_sum(a.matrix, 4).real, abs=1e-9)


def test_trace_walks_against_eigenvalues(rng):
    for q in (3, 5, 7):
        g = graphs.polarity(q)
        for law in ("gaussian-real", "gaussian-complex", "unit-complex"):
            a = random_weighting(g, int(rng.integers(10 ** 6)), law)
            vals = eigen(a).eigenvalues
            for k in (2, 3, 4):
                exact = float(np.sum(vals ** k))
                assert trace_power_walks(a, k) == pytest.approx(exact, rel=1e-8, abs=1e-8)
    # k = 3 works on hosts with 4-cycles too
    a = random_weighting(graphs.paley(13), 3, "gaussian-complex")
    assert trace_power_walks(a, 3) == pytest.approx(float(np.sum(eigen(a).eigenvalues ** 3)),
                                                    rel=1e-8)


def test_congruence_examples():
    a = np.diag([1.0, -1.0])
    assert np.allclose(congruence(a, np.eye(2)), a)
    b = congruence(a, np.diag([2.0, 3.0]))
    assert np.allclose(b, np.diag([4.0, -9.0]))
    assert inertia(eigen(b)) .n_pos == 1 and inertia(eigen(b)).n_neg == 1
    c5 = graphs.cycle(5).adjacency_matrix()
    z = np.eye(5) * 2 ** -0.25
    b = congruence(c5, z)
    assert np.allclose(b, c5 / math.sqrt(2))
    assert np.allclose(np.sum(np.abs(b) ** 2, axis=1), 1)
    with pytest.raises(WeightingError):
        congruence(a, np.array([[1.0, 1.0], [1.0, 1.0]]))


def _random_hermitian(rng, n, rank=None):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (x + x.conj().T) / 2
    if rank is not None:
        vals, vecs = np.linalg.eigh(h)
        vals[rank:] = 0
        h = (vecs * vals) @ vecs.conj().T
    return h


def test_sylvester_small(rng):
    for _ in range(100):
        n = int(rng.integers(2, 9))
        a = _random_hermitian(rng, n)
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(z) > 1e6:
            continue
        sa, sb = eigen(a), eigen(congruence(a, z))
        tau = sa.default_tau()
        if np.min(np.abs(sa.eigenvalues)) < 10 * tau:
            continue
        ta, tb = inertia(sa), inertia(sb)
        assert (ta.n_neg, ta.n_zero, ta.n_pos) == (tb.n_neg, tb.n_zero, tb.n_pos)


def test_interlacing_small(rng):
    for _ in range(100):
        n = int(rng.integers(2, 10))
        a = _random_hermitian(rng, n, rank=int(rng.integers(0, n + 1)))
        keep = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
        sub = a[np.ix_(keep, keep)]
        assert inertia(eigen(sub), 1e-9).n_nonneg <= inertia(eigen(a), 1e-9).n_nonneg


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["unit-complex", "gaussian-real", "gaussian-complex"]))
def test_moment_consistency(seed, law):
    g = graphs.gnp(12, 0.4, seed % 97)
    mv = esd_moments(eigen(random_weighting(g, seed, law)))
    assert mv.m2 >= 0
    assert mv.m4 >= mv.m2 ** 2 * (1 - 1e-12)
    assert abs(mv.m1) <= 1e-12 * max(1, mv.m2)


def test_inertia_partition_and_tau():
    spectrum = eigen(np.diag([1.0, 1e-10, -1e-10, -2.0]))
    t = inertia(spectrum)
    assert (t.n_neg, t.n_zero, t.n_pos) == (1, 2, 1)
    assert t.n == 4 and t.tau == pytest.approx(1e-8 * max(1, math.sqrt(5) / 2))
    with pytest.raises(ValueError):
        inertia(spectrum, -1.0)


def test_random_weighting_examples():
    e = random_weighting(graphs.empty(4), 3)
    assert not np.any(e.matrix)
    g = graphs.petersen()
    for law in ("unit-complex", "gaussian-real", "gaussian-complex"):
        assert np.array_equal(random_weighting(g, 9, law).matrix, random_weighting(g, 9, law).matrix)
    k2 = random_weighting(graphs.complete(2), 17, "unit-complex")
    assert abs(abs(k2.matrix[0, 1]) - 1) < 1e-15
    with pytest.raises(ValueError):
        random_weighting(g, 1, "cauchy")


def test_weighting_invariants_enforced():
    g = graphs.path(3)
    with pytest.raises(WeightingError):
        HermitianWeighting(g, np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]))
    with pytest.raises(WeightingError):
        HermitianWeighting(g, np.array([[1, 1, 0], [1, 0, 1], [0, 1, 0]]))
    with pytest.raises(WeightingError):
        HermitianWeighting(g, np.array([[0, 1j, 0], [1j, 0, 1], [0, 1, 0]]))


def test_weighting_file_roundtrip():
    g = graphs.polarity(3)
    a = random_weighting(g, 4, "gaussian-complex")
    text = format_weighting(a)
    assert text.splitlines()[0] == "13"
    b = parse_weighting(text, g)
    assert np.array_equal(a.matrix, b.matrix)
    c = parse_weighting(text)
    assert c.host.edges() == g.edges()
    with pytest.raises(GraphError, match="line 2"):
        parse_weighting("3\n0 2 1.0 0.0\n", graphs.path(3))
    with pytest.raises(GraphError, match="line 2"):
        parse_weighting("3\n1 0 1.0 0.0\n")


def test_spectrum_export():
    text = format_spectrum(eigen(HermitianWeighting.unweighted(graphs.cycle(5))))
    lines = text.splitlines()
    assert len(lines) == 5 and float(lines[0]) == pytest.approx(2.0)
    assert [float(x) for x in lines] == sorted((float(x) for x in lines), reverse=True)
