"""Theory-agnostic states, effects and transformations.

A state is a length-``K`` real vector ``p`` of fiducial probabilities, an
effect is a length-``K`` real vector ``r`` with outcome probability ``r . p``
and a transformation is a real ``K x K`` matrix acting as ``p -> Z p``.
Plain read-only ``numpy`` arrays carry all three; a :class:`TheoryModel`
knows which arrays belong to its allowed sets.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class Validity:
    """Outcome of a membership test; truthy iff valid."""

    valid: bool
    reason: str = None

    def __bool__(self):
        return self.valid


VALID = Validity(True)


def invalid(reason):
    return Validity(False, reason)


def as_vector(x, length=None, name="vector"):
    """Return ``x`` as a read-only float64 vector, checking its length."""
    v = np.array(x, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional")
    if length is not None and v.size != length:
        raise DimensionError(f"{name} has length {v.size}, expected {length}")
    v.setflags(write=False)
    return v


def as_matrix(x, size=None, name="matrix"):
    """Return ``x`` as a read-only real square matrix of side ``size``."""
    m = np.array(x, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    if size is not None and m.shape[0] != size:
        raise DimensionError(f"{name} has side {m.shape[0]}, expected {size}")
    m.setflags(write=False)
    return m


def probability(r, p):
    """Outcome probability ``r . p``."""
    r = np.asarray(r, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if r.shape != p.shape or r.ndim != 1:
        raise DimensionError(f"effect shape {r.shape} does not match state shape {p.shape}")
    return float(r @ p)


def mix(p_a, p_b, lam):
    """Prepare ``p_a`` with probability ``lam`` and ``p_b`` otherwise."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing weight {lam} outside [0, 1]")
    p_a = as_vector(p_a, name="p_a")
    p_b = as_vector(p_b, len(p_a), name="p_b")
    return as_vector(lam * p_a + (1.0 - lam) * p_b)


def rank(vectors, rel_tol=DEFAULT.rank):
    """Numerical rank of the span of the rows of ``vectors``."""
    a = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


class TheoryModel:
    """A probabilistic theory at fixed dimension.

    Subclasses supply the three membership tests (states ``S``, effects
    ``R``, transformations ``Gamma``), the unit effect and samplers.

    Parameters
    ----------
    n : int
        Dimension, the largest number of states one measurement can
        distinguish in a single shot.
    k : int
        Number of fiducial probabilities needed to fix a state.
    labels : tuple of int, optional
        Names of the ``n`` perfectly distinguishable basis states, 1-based.
        Restricted models keep the labels of their parent.
    parts : tuple of TheoryModel, optional
        Components of a composite model, outermost first.
    """

    kind = None

    def __init__(self, n, k, labels=None, parts=(), tol=DEFAULT):
        if n < 1:
            raise DomainError(f"dimension must be positive, got {n}")
        self.n = int(n)
        self.k = int(k)
        self.labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
        if len(self.labels) != self.n:
            raise DomainError("need one label per dimension")
        self.parts = tuple(parts)
        self.tol = tol

    def __repr__(self):
        extra = f", parts={self.parts!r}" if self.parts else ""
        return f"{type(self).__name__}(n={self.n}, k={self.k}{extra})"

    def __eq__(self, other):
        return isinstance(other, TheoryModel) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash((self.kind, self.n, self.labels))

    @property
    def is_composite(self):
        return bool(self.parts)

    def descriptor(self):
        """JSON-ready ``{"kind", "n"}`` dict, nested for composites."""
        d = {"kind": self.kind, "n": self.n}
        if self.parts:
            d["parts"] = [m.descriptor() for m in self.parts]
        if self.labels != tuple(range(1, self.n + 1)):
            d["labels"] = list(self.labels)
        return d

    def validate_state(self, p):
        return self._check_state(as_vector(p, self.k, "state"))

    def validate_effect(self, r):
        return self._check_effect(as_vector(r, self.k, "effect"))

    def validate_transform(self, z):
        return self._check_transform(as_matrix(z, self.k, "transform"))

    def contains_state(self, p):
        return self.validate_state(p).valid

    def null_state(self):
        return as_vector(np.zeros(self.k))

    def unit_effect(self):
        """Effect giving the probability that any non-null outcome occurs."""
        raise NotImplementedError

    def normalization(self, p):
        return probability(self.unit_effect(), p)

    def is_pure(self, p):
        raise NotImplementedError

    def random_state(self, rng, pure=False):
        raise NotImplementedError

    def pure_family(self):
        """Canonical list of normalized pure states used by dimension checks."""
        raise NotImplementedError

    def is_reversible(self, z):
        """``Z`` in Gamma, invertible, and ``Z^-1`` in Gamma."""
        z = as_matrix(z, self.k)
        if not self.validate_transform(z):
            return False
        try:
            inv = np.linalg.inv(z)
        except np.linalg.LinAlgError:
            return False
        if np.linalg.cond(z) > 1.0 / self.tol.rank:
            return False
        return self.validate_transform(inv).valid

    _check_state = _check_effect = _check_transform = None


def validate_state(model, p):
    """Membership of ``p`` in the model's state set."""
    return model.validate_state(p)


def validate_effect(model, r):
    """Membership of ``r`` in the model's effect set."""
    return model.validate_effect(r)


def is_pure(model, p):
    """Whether ``p`` is an extremal, non-null state of ``model``.

    Raises
    ------
    DomainError
        For the null state or a state outside the model.
    """
    p = as_vector(p, model.k, "state")
    check = model.validate_state(p)
    if not check:
        raise DomainError(f"not a valid state: {check.reason}")
    if np.all(np.abs(p) <= model.tol.eigenvalue):
        raise DomainError("the null state is neither pure nor mixed")
    return model.is_pure(p)
