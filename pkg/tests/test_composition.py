import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PAULI, QUBIT_KETS, born, proj
from fiducial import ClassicalModel, QuantumModel, compose_models, probability, product_state, separable_span_dim
from fiducial.composition import product_effect, state_span_rank
from fiducial.errors import DomainError
from fiducial.quantum import random_density_matrix, random_effect_operator


@pytest.mark.parametrize(
    "a,b,n,k",
    [
        (ClassicalModel(6), ClassicalModel(6), 36, 36),
        (QuantumModel(2), QuantumModel(2), 4, 16),
        (QuantumModel(2), QuantumModel(3), 6, 36),
    ],
)
def test_compose_counts(a, b, n, k):
    c = compose_models(a, b)
    assert (c.n, c.k, c.kind) == (n, k, a.kind)
    assert c.parts == (a, b)


def test_mixed_kinds_rejected():
    with pytest.raises(DomainError):
        compose_models(ClassicalModel(2), QuantumModel(2))


def test_product_state_examples():
    assert list(product_state([1, 0], [0, 1])) == [0, 1, 0, 0]
    assert not np.any(product_state(np.zeros(4), [0.5, 0.5, 1, 0.5]))


def test_qubit_product_matches_tensor_oracle():
    c = compose_models(QuantumModel(2), QuantumModel(2))
    pa, pb = [1, 0, 0.5, 0.5], [0.5, 0.5, 1, 0.5]
    got = product_state(pa, pb)
    rho = np.kron(proj(PAULI["z+"]), proj(PAULI["x+"]))
    kets = [np.kron(a, b) for a in QUBIT_KETS for b in QUBIT_KETS]
    assert np.abs(got - born(kets, rho)).max() <= 1e-12
    assert np.abs(got - c.p(rho)).max() <= 1e-12


def test_separable_span_dim_examples():
    assert separable_span_dim(QuantumModel(2), QuantumModel(2), 100, seed=1) == 16
    assert separable_span_dim(ClassicalModel(2), ClassicalModel(3), 50, seed=1) == 6
    assert separable_span_dim(QuantumModel(2), QuantumModel(2), 100, seed=1, family="basis") == 4


def test_separable_span_dim_needs_samples():
    with pytest.raises(DomainError):
        separable_span_dim(QuantumModel(2), QuantumModel(2), 25)


@pytest.mark.parametrize("a,b", [(QuantumModel(2), QuantumModel(2)), (QuantumModel(2), QuantumModel(3)), (ClassicalModel(2), ClassicalModel(3))])
def test_rank_saturation(a, b):
    c = compose_models(a, b)
    full = state_span_rank(c, 5 * c.k, seed=3)
    assert full == separable_span_dim(a, b, c.k + 10, seed=4) == a.k * b.k


def test_entangled_state_is_in_product_span():
    c = compose_models(QuantumModel(2), QuantumModel(2))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    p = c.p(np.outer(bell, bell))
    assert c.validate_state(p) and c.is_pure(p)
    rng = np.random.default_rng(0)
    rows = np.array([product_state(QuantumModel(2).random_state(rng, True), QuantumModel(2).random_state(rng, True)) for _ in range(40)])
    coef, *_ = np.linalg.lstsq(rows.T, p, rcond=None)
    assert np.abs(rows.T @ coef - p).max() < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_factorization_quantum(seed):
    rng = np.random.default_rng(seed)
    a, b = QuantumModel(2), QuantumModel(3)
    pa, pb = a.random_state(rng), b.random_state(rng)
    ra = a.frame.inverse.T @ a.frame.coords(random_effect_operator(2, rng)).real
    rb = b.frame.inverse.T @ b.frame.coords(random_effect_operator(3, rng)).real
    joint = probability(product_effect(ra, rb), product_state(pa, pb))
    assert abs(joint - probability(ra, pa) * probability(rb, pb)) <= 1e-12
    c = compose_models(a, b)
    assert c.validate_effect(product_effect(ra, rb))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_factorization_classical(seed):
    rng = np.random.default_rng(seed)
    a, b = ClassicalModel(3), ClassicalModel(2)
    pa, pb = a.random_state(rng), b.random_state(rng)
    ra, rb = rng.uniform(size=3), rng.uniform(size=2)
    assert abs(probability(product_effect(ra, rb), product_state(pa, pb)) - probability(ra, pa) * probability(rb, pb)) <= 1e-12


def test_associativity(rng):
    q = [QuantumModel(2), QuantumModel(2), QuantumModel(2)]
    left = compose_models(compose_models(q[0], q[1]), q[2])
    right = compose_models(q[0], compose_models(q[1], q[2]))
    rhos = [random_density_matrix(2, rng) for _ in range(3)]
    joint = np.kron(np.kron(rhos[0], rhos[1]), rhos[2])
    ps = [m.p(r) for m, r in zip(q, rhos)]
    assert np.allclose(left.p(joint), product_state(product_state(ps[0], ps[1]), ps[2]), atol=1e-13)
    assert np.allclose(right.p(joint), product_state(ps[0], product_state(ps[1], ps[2])), atol=1e-13)
    a = np.kron(np.kron(random_effect_operator(2, rng), random_effect_operator(2, rng)), random_effect_operator(2, rng))
    rl = left.frame.inverse.T @ left.frame.coords(a).real
    rr = right.frame.inverse.T @ right.frame.coords(a).real
    assert probability(rl, left.p(joint)) == pytest.approx(probability(rr, right.p(joint)), abs=1e-12)
