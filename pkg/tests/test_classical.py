import itertools

import numpy as np
import pytest

from fiducial import (
    ClassicalModel,
    classical_discreteness_gap,
    classical_model,
    classical_reversible_transforms,
    coin_mix_effect,
    look_in_box,
    probability,
)
from fiducial.classical import extremal_subset, extreme_points, in_convex_hull
from fiducial.errors import DomainError, ResourceError


def enumerate_vertices(a, b, tol=1e-12):
    """Brute-force vertices of {x : a x <= b}: every square subsystem of tight rows."""
    n = a.shape[1]
    out = []
    for rows in itertools.combinations(range(a.shape[0]), n):
        sub = a[list(rows)]
        if abs(np.linalg.det(sub)) < tol:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(a @ x <= b + 1e-9) and not any(np.allclose(x, y) for y in out):
            out.append(x)
    return out


def simplex_constraints(n):
    a = np.vstack([-np.eye(n), np.ones((1, n))])
    b = np.concatenate([np.zeros(n), [1.0]])
    return a, b


def test_model_examples():
    m = classical_model(3)
    assert (m.kind, m.n, m.k) == ("classical", 3, 3)
    assert m.validate_state([1 / 3] * 3)
    assert not m.validate_state([0.5] * 3)
    with pytest.raises(DomainError):
        classical_model(0)


def test_single_box_is_a_segment():
    m = classical_model(1)
    assert m.validate_state([0.0]) and m.validate_state([0.4]) and m.validate_state([1.0])
    assert not m.validate_state([1.1]) and not m.validate_state([-0.1])


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_extreme_points_match_vertex_enumeration(n):
    a, b = simplex_constraints(n)
    oracle = sorted(tuple(np.round(v, 12)) for v in enumerate_vertices(a, b))
    ours = sorted(tuple(v) for v in extreme_points(n))
    assert oracle == ours


def test_bit_extremal_states():
    pts = extreme_points(2)
    assert [list(p) for p in pts] == [[1, 0], [0, 1], [0, 0]]


@pytest.mark.parametrize("n", [2, 3])
def test_lp_finds_exactly_the_vertices(n, rng):
    m = ClassicalModel(n)
    pts = extreme_points(n) + [m.random_state(rng) for _ in range(10)]
    assert extremal_subset(pts) == list(range(n + 1))


@pytest.mark.parametrize("n", [2, 3])
def test_hull_equals_state_set(n, rng):
    m = ClassicalModel(n)
    verts = extreme_points(n)
    for _ in range(50):
        x = rng.uniform(-0.3, 1.0, size=n)
        assert in_convex_hull(verts, x) == m.contains_state(x)


def test_normalized_states_lie_on_far_facet(rng):
    m = ClassicalModel(3)
    for _ in range(20):
        w = rng.dirichlet(np.ones(3))
        assert m.contains_state(w) and abs(w.sum() - 1) < 1e-12
        assert not m.contains_state(w * 1.01)


def test_look_in_box():
    assert list(look_in_box(4, 1)) == [1, 0, 0, 0]
    assert probability(look_in_box(3, 2), [0, 1, 0]) == 1
    assert probability(look_in_box(2, 1), [0.25, 0.75]) == 0.25
    with pytest.raises(DomainError):
        look_in_box(3, 4)


def test_coin_mix_effect():
    r = coin_mix_effect(look_in_box(2, 1), look_in_box(2, 2), 0.5)
    assert list(r) == [0.5, 0.5]
    assert list(coin_mix_effect([1, 0], [0, 1], 1.0)) == [1, 0]
    assert probability(r, [0.25, 0.75]) == 0.5
    assert ClassicalModel(2).validate_effect(r)
    with pytest.raises(DomainError):
        coin_mix_effect([1, 0], [0, 1], 2)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 6), (4, 24)])
def test_reversible_transforms(n, count):
    zs = classical_reversible_transforms(n)
    assert len(zs) == count
    m = ClassicalModel(n)
    for z in zs:
        assert m.is_reversible(z)
        for p in extreme_points(n):
            assert m.validate_state(z @ p)
    assert len({z.tobytes() for z in zs}) == count


def test_reversible_guard():
    with pytest.raises(ResourceError):
        classical_reversible_transforms(9)


def test_substochastic_preserves_states(rng):
    m = ClassicalModel(4)
    for _ in range(20):
        z = rng.uniform(size=(4, 4))
        z = z / z.sum(axis=0) * rng.uniform(0.5, 1.0, size=4)
        assert m.validate_transform(z)
        for _ in range(5):
            assert m.validate_state(z @ m.random_state(rng))


def test_non_permutation_is_not_reversible():
    m = ClassicalModel(2)
    assert not m.is_reversible([[0.5, 0.5], [0.5, 0.5]])
    assert not m.is_reversible([[1, 0], [0, 0.5]])
    assert not m.validate_transform([[1, 1], [0, 0.5]])


def brute_gap(n):
    mats = [np.eye(n)[:, list(p)] for p in itertools.permutations(range(n))]
    return min(np.linalg.norm(a - b) for a, b in itertools.combinations(mats, 2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_discreteness_gap_matches_brute_force(n):
    assert brute_gap(n) == pytest.approx(2.0, abs=1e-15)
    assert classical_discreteness_gap(n) == 2.0


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_discreteness_gap_is_same_for_all_n(n):
    assert classical_discreteness_gap(n) == 2.0


def test_discreteness_gap_domain():
    with pytest.raises(DomainError):
        classical_discreteness_gap(1)
    with pytest.raises(ResourceError):
        classical_discreteness_gap(9)
