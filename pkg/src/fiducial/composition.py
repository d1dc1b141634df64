"""Composite systems built from two models of the same kind.

The composite fiducial index ``(k, l)`` is flattened row-major, so product
states and product effects are Kronecker products of the components.
"""

import numpy as np

from .classical import ClassicalModel
from .core import as_vector, rank
from .errors import DomainError
from .quantum import QuantumModel


def compose_models(a, b):
    """Composite of ``a`` and ``b`` with ``N = N_A N_B`` and ``K = K_A K_B``."""
    if a.kind != b.kind:
        raise DomainError(f"cannot compose {a.kind} with {b.kind} systems")
    n = a.n * b.n
    if a.kind == "classical":
        return ClassicalModel(n, parts=(a, b), tol=a.tol)
    return QuantumModel(n, frame=a.frame.tensor(b.frame), parts=(a, b), tol=a.tol)


def product_state(p_a, p_b):
    """Joint fiducial probabilities of independent preparations."""
    return as_vector(np.kron(as_vector(p_a, name="p_a"), as_vector(p_b, name="p_b")))


def product_effect(r_a, r_b):
    """Joint effect of measuring ``r_a`` on one part and ``r_b`` on the other."""
    return as_vector(np.kron(as_vector(r_a, name="r_a"), as_vector(r_b, name="r_b")))


def product_states(model_a, model_b, samples, rng, family="generic"):
    """Random product states, one per row.

    ``family="generic"`` draws Haar-random pure quantum components, and
    classical components that are a basis state or a Dirichlet mixture with
    equal odds;
    ``family="basis"`` draws only from the components' canonical basis
    (computational basis states), which cannot span the composite space.
    """
    rows = []
    for _ in range(samples):
        if family == "generic":
            p_a = _generic_member(model_a, rng)
            p_b = _generic_member(model_b, rng)
        elif family == "basis":
            p_a = _basis_member(model_a, rng)
            p_b = _basis_member(model_b, rng)
        else:
            raise DomainError(f"unknown sampling family {family!r}")
        rows.append(product_state(p_a, p_b))
    return np.array(rows)


def _generic_member(model, rng):
    if model.kind == "quantum":
        return model.random_state(rng, pure=True)
    return model.random_state(rng, pure=bool(rng.integers(2)))


def _basis_member(model, rng):
    return model.pure_family()[int(rng.integers(model.n))]


def separable_span_dim(model_a, model_b, samples, seed=0, family="generic"):
    """Rank of the span of ``samples`` random product states."""
    need = model_a.k * model_b.k + 10
    if samples < need:
        raise DomainError(f"need at least {need} samples, got {samples}")
    rng = np.random.default_rng(seed)
    return rank(product_states(model_a, model_b, samples, rng, family), model_a.tol.rank)


def state_span_rank(model, samples, seed=0, pure=False):
    """Rank of the span of ``samples`` random states of ``model``."""
    rng = np.random.default_rng(seed)
    return rank([model.random_state(rng, pure=pure) for _ in range(samples)], model.tol.rank)

