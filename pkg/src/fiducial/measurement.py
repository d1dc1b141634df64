"""Instruments, the state update rule and outcome-frequency simulation.

An instrument assigns a transformation ``Z_l`` to every outcome ``l``. The
outcome probability is the normalization of ``Z_l p``; whatever
probability is left over belongs to the null outcome.
"""

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import as_matrix, as_vector, probability
from .errors import CompletenessError, DomainError, MembershipError, ModelError
from .quantum import FiducialFrame, QuantumChannel, QuantumModel, channel_to_Z

NULL = "null"
GENERATOR = f"numpy.random.PCG64 (numpy {np.__version__})"


@dataclass(frozen=True)
class Instrument:
    model: object
    transforms: tuple
    labels: tuple

    def __len__(self):
        return len(self.transforms)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown outcome {label!r}; known: {list(self.labels)}") from None

    def transform(self, label):
        return self.transforms[self.index(label)]

    def effect(self, label):
        """Effect whose value on ``p`` is the probability of ``label``."""
        return as_vector(self.transform(label).T @ self.model.unit_effect())

    def total(self):
        return as_matrix(np.sum(self.transforms, axis=0))

    def probabilities(self, p):
        u = self.model.unit_effect()
        return np.array([probability(u, z @ p) for z in self.transforms])


def make_instrument(model, transforms, labels=None):
    """Validate outcome transformations and their sum against the model.

    Raises
    ------
    MembershipError
        Some ``Z_l`` is not an allowed transformation.
    CompletenessError
        ``sum_l Z_l`` is not an allowed transformation.
    """
    zs = tuple(as_matrix(z, model.k, "transform") for z in transforms)
    if not zs:
        raise DomainError("an instrument needs at least one outcome")
    labels = tuple(str(i) for i in range(1, len(zs) + 1)) if labels is None else tuple(labels)
    if len(labels) != len(zs) or len(set(labels)) != len(labels):
        raise DomainError("need one distinct label per outcome")
    if NULL in labels:
        raise DomainError(f"label {NULL!r} is reserved for the null outcome")
    for label, z in zip(labels, zs):
        check = model.validate_transform(z)
        if not check:
            raise MembershipError(f"outcome {label!r}: {check.reason}")
    check = model.validate_transform(np.sum(zs, axis=0))
    if not check:
        raise CompletenessError(f"sum of outcome transforms: {check.reason}")
    return Instrument(model, zs, labels)


def lueders_instrument(model, projectors, labels=None):
    """Instrument with outcome maps ``rho -> P_l rho P_l``.

    ``model`` may be a quantum model or a bare fiducial frame.

    Raises
    ------
    DomainError
        Projectors that are not idempotent or not mutually orthogonal.
    """
    if isinstance(model, FiducialFrame):
        model = QuantumModel(model.n, frame=model, tol=model.tol)
    frame = model.frame
    tol = model.tol.eigenvalue
    ps = [np.asarray(p, dtype=complex) for p in projectors]
    for i, p in enumerate(ps):
        if p.shape != (frame.n, frame.n):
            raise DomainError(f"projector {i} has shape {p.shape}")
        if np.abs(p @ p - p).max() > tol or np.abs(p - p.conj().T).max() > tol:
            raise DomainError(f"operator {i} is not an orthogonal projector")
        for j in range(i):
            if np.abs(p @ ps[j]).max() > tol:
                raise DomainError(f"projectors {j} and {i} are not orthogonal")
    zs = [channel_to_Z(frame, QuantumChannel.from_kraus([p])) for p in ps]
    return make_instrument(model, zs, labels)


def box_instrument(model):
    """Classical instrument: look in each box, leave the ball where it is."""
    zs = []
    for i in range(model.n):
        z = np.zeros((model.n, model.n))
        z[i, i] = 1.0
        zs.append(z)
    return make_instrument(model, zs, labels=[str(x) for x in model.labels])


def apply_update(instrument, p, outcome):
    """Unnormalized post-measurement state and the outcome's probability."""
    p = as_vector(p, instrument.model.k, "state")
    post = as_vector(instrument.transform(outcome) @ p)
    return post, instrument.model.normalization(post)


def outcome_distribution(instrument, p, tol=1e-9):
    """Outcome probabilities with the null outcome appended last."""
    probs = instrument.probabilities(as_vector(p, instrument.model.k, "state"))
    total = probs.sum()
    if total > 1.0 + tol or probs.min() < -tol:
        raise ModelError(f"outcome probabilities {probs.tolist()} are not a sub-distribution")
    probs = np.clip(probs, 0.0, None)
    return np.append(probs, max(0.0, 1.0 - probs.sum()))


@dataclass(frozen=True)
class FrequencyReport:
    labels: tuple
    counts: tuple
    target: tuple
    n: int
    seed: int
    generator: str = GENERATOR

    @property
    def frequencies(self):
        return tuple(c / self.n for c in self.counts)

    @property
    def max_deviation(self):
        return max(abs(f - t) for f, t in zip(self.frequencies, self.target))

    def to_json(self):
        return {
            "n": self.n,
            "seed": self.seed,
            "generator": self.generator,
            "counts": dict(zip(self.labels, self.counts)),
            "frequencies": dict(zip(self.labels, self.frequencies)),
            "target": dict(zip(self.labels, self.target)),
            "max_deviation": self.max_deviation,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["outcome", "count", "frequency", "target"])
        for row in zip(self.labels, self.counts, self.frequencies, self.target):
            w.writerow([row[0], row[1], repr(row[2]), repr(row[3])])
        return buf.getvalue()


def simulate_frequencies(model, p, instrument, n, seed):
    """Draw ``n`` i.i.d. outcomes (null included) by inverse-CDF sampling.

    Uniforms come from ``numpy.random.Generator(PCG64(seed))``; the result
    is a deterministic function of ``(seed, n)``.
    """
    if n < 1:
        raise DomainError("need at least one trial")
    if instrument.model is not model and instrument.model != model:
        raise DomainError("instrument belongs to a different model")
    target = outcome_distribution(instrument, p)
    cdf = np.cumsum(target)
    cdf[-1] = 1.0
    u = np.random.Generator(np.random.PCG64(seed)).random(n)
    counts = _kernels.inverse_cdf_counts(cdf, u)
    return FrequencyReport(
        labels=instrument.labels + (NULL,),
        counts=tuple(int(c) for c in counts),
        target=tuple(float(t) for t in target),
        n=int(n),
        seed=int(seed),
    )


def convergence_ratio(model, p, instrument, n, seeds, factor=100):
    """Mean max-deviation at ``n`` trials over the mean at ``factor * n``."""
    small = [simulate_frequencies(model, p, instrument, n, s).max_deviation for s in seeds]
    large = [simulate_frequencies(model, p, instrument, factor * n, s).max_deviation for s in seeds]
    return float(np.mean(small) / np.mean(large))
