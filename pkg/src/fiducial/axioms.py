"""Checkable consequences of the structural axioms.

Covers the distinguishability dimension, restriction to subspaces, the
power law ``K = N**r``, affinity of measurement functionals and the
continuity (or discreteness) of reversible paths between pure states.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .classical import ClassicalModel, classical_discreteness_gap
from .config import DEFAULT
from .core import as_vector, is_pure, mix, probability, rank
from .errors import DomainError, FiducialError, ResourceError
from .quantum import FiducialFrame, QuantumModel, fiducial_frame, operator_to_effect, unitary_path

MAX_CANDIDATES = 12


# --- distinguishability -----------------------------------------------------


@dataclass(frozen=True)
class DistinguishabilityCertificate:
    """States of a perfectly distinguishing measurement and its effects.

    ``effects[i] . states[j] == (i == j)`` and the effects sum to at most
    the unit effect.
    """

    states: tuple
    effects: tuple
    indices: tuple = ()

    @property
    def size(self):
        return len(self.states)

    def to_json(self):
        return {
            "size": self.size,
            "indices": list(self.indices),
            "states": [list(map(float, s)) for s in self.states],
            "effects": [list(map(float, r)) for r in self.effects],
        }


def verify_certificate(model, cert, tol=DEFAULT.eigenvalue):
    """Check every invariant of a distinguishability certificate."""
    if len(cert.effects) != len(cert.states):
        return False
    for r in cert.effects:
        if not model.validate_effect(r):
            return False
    total = np.sum(cert.effects, axis=0)
    if not model.validate_effect(total) or not model.validate_effect(model.unit_effect() - total):
        return False
    gram = np.array([[probability(r, p) for p in cert.states] for r in cert.effects])
    return bool(np.abs(gram - np.eye(len(cert.states))).max() <= tol)


def _classical_witness(states, tol):
    # effects r_i in [0,1]^K, sum_i r_i <= 1, r_i . p_j = delta_ij
    m, k = len(states), len(states[0])
    a_eq = np.zeros((m * m, m * k))
    b_eq = np.zeros(m * m)
    for i in range(m):
        for j in range(m):
            a_eq[i * m + j, i * k:(i + 1) * k] = states[j]
            b_eq[i * m + j] = 1.0 if i == j else 0.0
    a_ub = np.tile(np.eye(k), (1, m))
    res = linprog(
        np.zeros(m * k), A_ub=a_ub, b_ub=np.ones(k), A_eq=a_eq, b_eq=b_eq,
        bounds=[(0.0, 1.0)] * (m * k), method="highs",
    )
    if res.status != 0 or np.abs(a_eq @ res.x - b_eq).max() > tol:
        return None
    x = np.clip(res.x, 0.0, 1.0).reshape(m, k)
    return [as_vector(row) for row in x]


def _support_projector(rho, tol):
    w, v = np.linalg.eigh(rho)
    keep = v[:, w > tol]
    return keep @ keep.conj().T


def _quantum_witness(model, states, tol):
    rhos = [model.rho(p) for p in states]
    for i in range(len(rhos)):
        for j in range(i + 1, len(rhos)):
            if abs(np.trace(rhos[i] @ rhos[j])) > tol:
                return None
    return [operator_to_effect(model.frame, _support_projector(r, tol)) for r in rhos]


def _pair_compatible(model, p, q, tol):
    if model.kind == "classical":
        return _classical_witness([p, q], tol) is not None
    return abs(np.trace(model.rho(p) @ model.rho(q))) <= tol


def max_distinguishable(model, candidates):
    """Largest subset of ``candidates`` that one measurement tells apart.

    The search is exhaustive over subsets whose members are pairwise
    distinguishable; each survivor is confirmed by linear programming
    (classical) or by mutual orthogonality of supports (quantum).

    Raises
    ------
    ResourceError
        More than 12 candidates.
    DomainError
        Empty list, or a candidate that is invalid or not normalized.
    """
    if len(candidates) > MAX_CANDIDATES:
        raise ResourceError(f"at most {MAX_CANDIDATES} candidates, got {len(candidates)}")
    if not candidates:
        raise DomainError("no candidate states")
    tol = model.tol.eigenvalue
    states = [as_vector(p, model.k, "candidate") for p in candidates]
    for i, p in enumerate(states):
        check = model.validate_state(p)
        if not check:
            raise DomainError(f"candidate {i} is not a valid state: {check.reason}")
        if abs(model.normalization(p) - 1.0) > tol:
            raise DomainError(f"candidate {i} is not normalized")

    m = len(states)
    adjacency = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            if _pair_compatible(model, states[i], states[j], tol):
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i

    for mask in _kernels.compatible_subsets(adjacency):
        idx = tuple(i for i in range(m) if int(mask) >> i & 1)
        chosen = [states[i] for i in idx]
        if len(idx) == 1:
            effects = [model.unit_effect()]
        elif model.kind == "classical":
            effects = _classical_witness(chosen, tol)
        else:
            effects = _quantum_witness(model, chosen, tol)
        if effects is not None:
            return DistinguishabilityCertificate(tuple(chosen), tuple(effects), idx)
    raise AssertionError("a single state is always distinguishable")


# --- subspaces --------------------------------------------------------------


def subspace_restrict(model, kept):
    """Model of a system confined to the basis states labelled ``kept``.

    Labels are the 1-based names carried in ``model.labels``; the result
    keeps them, so restricting again uses the original names.
    """
    kept = set(kept)
    if not kept:
        raise DomainError("cannot restrict to an empty set of basis states")
    unknown = kept - set(model.labels)
    if unknown:
        raise DomainError(f"labels {sorted(unknown)} not present in model")
    if kept == set(model.labels):
        return model
    labels = tuple(x for x in model.labels if x in kept)
    m = len(labels)
    if model.kind == "classical":
        return ClassicalModel(m, labels=labels, tol=model.tol)
    return QuantumModel(m, frame=_sub_frame(model, labels), labels=labels, tol=model.tol)


def _isometry(model, labels):
    pos = [model.labels.index(x) for x in labels]
    v = np.zeros((model.n, len(pos)))
    v[pos, range(len(pos))] = 1.0
    return v


def _sub_frame(model, labels):
    # parent fiducial projectors living inside the subspace, compressed
    v = _isometry(model, labels)
    m = len(labels)
    inside = []
    for proj in model.frame.projectors:
        comp = v.T @ proj @ v
        if abs(np.trace(comp).real - np.trace(proj).real) <= model.tol.eigenvalue:
            inside.append(comp)
    if len(inside) == m * m:
        try:
            return FiducialFrame(inside, tol=model.tol)
        except FiducialError:
            pass
    return fiducial_frame(m)


def embed_state(parent, restricted, p_local):
    """Fiducial vector, in ``parent``, of a state of ``restricted``."""
    v = _isometry(parent, restricted.labels)
    if parent.kind == "classical":
        return as_vector(v @ as_vector(p_local, restricted.k))
    rho = v @ restricted.rho(p_local) @ v.T
    return parent.p(rho)


def restricted_span_rank(parent, kept, samples=None, seed=0):
    """Span rank of parent-frame vectors of random states confined to ``kept``."""
    sub = subspace_restrict(parent, kept)
    samples = samples or 5 * sub.k + 5
    rng = np.random.default_rng(seed)
    rows = [embed_state(parent, sub, sub.random_state(rng)) for _ in range(samples)]
    return rank(rows, parent.tol.rank)


# --- power law --------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawResult:
    verdict: str
    r: int = None
    witness: dict = field(default=None)

    @property
    def consistent(self):
        return self.verdict == "consistent"

    def to_json(self):
        return {"verdict": self.verdict, "r": self.r, "witness": self.witness}


def _table_items(table):
    out = []
    for row in table:
        if isinstance(row, dict):
            out.append((row["n"], row["k"]))
        else:
            n, k = row
            out.append((n, k))
    return out


def verify_power_law(table):
    """Test a finite ``(N, K)`` table for ``K = N**r`` with integer ``r >= 1``.

    Multiplicativity is only checked on products present in the table, and
    monotonicity between neighbouring entries in increasing ``N``.
    """
    rows = _table_items(table)
    if not rows:
        raise DomainError("empty table")
    ks = {}
    for n, k in rows:
        if n in ks:
            raise DomainError(f"N={n} appears twice")
        ks[n] = k
    if 2 not in ks:
        raise DomainError("table must contain N=2")

    for a in sorted(ks):
        for b in sorted(ks):
            if b < a or a * b not in ks:
                continue
            if ks[a * b] != ks[a] * ks[b]:
                return PowerLawResult(
                    "not_multiplicative",
                    witness={"n_a": a, "n_b": b, "k_ab": ks[a * b], "k_a_times_k_b": ks[a] * ks[b]},
                )
    ns = sorted(ks)
    for lo, hi in zip(ns, ns[1:]):
        if not ks[hi] > ks[lo]:
            return PowerLawResult("not_increasing", witness={"n": lo, "next_n": hi, "k": ks[lo], "next_k": ks[hi]})

    k2 = ks[2]
    if k2 != int(k2) or int(k2) < 2 or int(k2) & (int(k2) - 1):
        return PowerLawResult("not_integer_power", witness={"k_at_2": k2, "exponent": math.log2(k2) if k2 > 0 else None})
    r = int(k2).bit_length() - 1
    for n in ns:
        if ks[n] != n ** r:
            return PowerLawResult("not_integer_power", r=None, witness={"n": n, "k": ks[n], "expected": n ** r})
    return PowerLawResult("consistent", r=r)


# --- affinity ---------------------------------------------------------------


@dataclass(frozen=True)
class AffinityResult:
    affine: bool
    effect: np.ndarray = None
    residual: float = None
    witness: dict = None


def default_affinity_probes(model, seed=0, random_draws=10):
    """Weights 1/4, 1/2, 3/4 and ``random_draws`` uniform ones, over random states."""
    rng = np.random.default_rng(seed)
    lams = [0.25, 0.5, 0.75] + list(rng.uniform(size=random_draws))
    return [(model.random_state(rng), model.random_state(rng), float(lam)) for lam in lams]


def verify_affinity(fn, probes, tol=DEFAULT.eigenvalue, rank_tol=DEFAULT.rank):
    """Check ``fn(mix(a, b, lam)) == lam fn(a) + (1 - lam) fn(b)`` on every probe.

    When affine and the probed states span the whole space, also recover
    the effect ``r`` with ``fn(p) == r . p`` by least squares.
    """
    states, values = [], []
    for p_a, p_b, lam in probes:
        p_c = mix(p_a, p_b, lam)
        f_a, f_b, f_c = float(fn(p_a)), float(fn(p_b)), float(fn(p_c))
        rhs = lam * f_a + (1.0 - lam) * f_b
        if abs(f_c - rhs) > tol:
            return AffinityResult(
                False,
                witness={"p_a": list(map(float, p_a)), "p_b": list(map(float, p_b)), "lam": lam, "lhs": f_c, "rhs": rhs},
            )
        states += [p_a, p_b, p_c]
        values += [f_a, f_b, f_c]
    if not states:
        return AffinityResult(True)
    s = np.array(states)
    f = np.array(values)
    if rank(s, rank_tol) < s.shape[1]:
        return AffinityResult(True)
    r, *_ = np.linalg.lstsq(s, f, rcond=None)
    return AffinityResult(True, effect=as_vector(r), residual=float(np.abs(s @ r - f).max()))


# --- continuity -------------------------------------------------------------


@dataclass(frozen=True)
class ContinuityWitness:
    """Either a continuous path of pure states or a discreteness gap."""

    path: list = None
    gap: float = None

    @property
    def continuous(self):
        return self.path is not None


def continuity_witness(model, pure_from, pure_to, steps=50):
    """Reversible path between two pure states, or why none exists.

    Quantum models return a unitary path; classical models return the
    minimum distance between distinct reversible maps, which bounds every
    step of any reversible route away from zero.
    """
    p_from = as_vector(pure_from, model.k, "pure_from")
    p_to = as_vector(pure_to, model.k, "pure_to")
    for name, p in (("pure_from", p_from), ("pure_to", p_to)):
        if not is_pure(model, p):
            raise DomainError(f"{name} is not a pure state")
    if np.allclose(p_from, p_to, atol=model.tol.eigenvalue, rtol=0):
        return ContinuityWitness(path=[p_from])
    if model.kind == "quantum":
        return ContinuityWitness(path=unitary_path(model.rho(p_from), model.rho(p_to), steps, frame=model.frame))
    return ContinuityWitness(gap=classical_discreteness_gap(model.n))


__all__ = [
    "AffinityResult",
    "ContinuityWitness",
    "DistinguishabilityCertificate",
    "PowerLawResult",
    "continuity_witness",
    "default_affinity_probes",
    "embed_state",
    "max_distinguishable",
    "restricted_span_rank",
    "subspace_restrict",
    "verify_affinity",
    "verify_certificate",
    "verify_power_law",
]
