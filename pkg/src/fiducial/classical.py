"""Classical probability theory: a ball in one of N boxes, or missing.

States live in the sub-normalized simplex ``p_n >= 0, sum(p) <= 1``; the
missing-ball case is the null state. Allowed transformations are the
substochastic matrices.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .config import DEFAULT
from .core import VALID, TheoryModel, as_vector, invalid
from .errors import DomainError, ResourceError

MAX_ENUMERATION = 8


class ClassicalModel(TheoryModel):
    """Ball-in-boxes model with ``K = N``."""

    kind = "classical"

    def __init__(self, n, labels=None, parts=(), tol=DEFAULT):
        super().__init__(n, n, labels=labels, parts=parts, tol=tol)

    def _check_state(self, p):
        eps = self.tol.eigenvalue
        if np.any(p < -eps):
            return invalid(f"negative entry {p.min():.3g}")
        if p.sum() > 1.0 + eps:
            return invalid(f"entries sum to {p.sum():.6g} > 1")
        return VALID

    def _check_effect(self, r):
        eps = self.tol.eigenvalue
        if np.any(r < -eps) or np.any(r > 1.0 + eps):
            return invalid("effect entries must lie in [0, 1]")
        return VALID

    def _check_transform(self, z):
        eps = self.tol.eigenvalue
        if np.any(z < -eps):
            return invalid("negative transition weight")
        cols = z.sum(axis=0)
        if np.any(cols > 1.0 + eps):
            return invalid(f"column sum {cols.max():.6g} > 1")
        return VALID

    def unit_effect(self):
        return as_vector(np.ones(self.n))

    def is_pure(self, p):
        eps = self.tol.eigenvalue
        hot = np.flatnonzero(np.abs(p) > eps)
        return hot.size == 1 and abs(p[hot[0]] - 1.0) <= eps

    def random_state(self, rng, pure=False):
        if pure:
            return basis_state(self.n, int(rng.integers(self.n)) + 1)
        # Dirichlet over boxes plus the missing-ball slot gives the full simplex
        w = rng.dirichlet(np.ones(self.n + 1))
        return as_vector(w[: self.n])

    def pure_family(self):
        return [basis_state(self.n, i) for i in range(1, self.n + 1)]


def classical_model(n):
    """Classical model with ``N = K = n``."""
    if n < 1:
        raise DomainError(f"need at least one box, got {n}")
    return ClassicalModel(n)


def basis_state(n, box):
    """Ball definitely in ``box`` (1-based)."""
    if not 1 <= box <= n:
        raise DomainError(f"box {box} outside 1..{n}")
    e = np.zeros(n)
    e[box - 1] = 1.0
    return as_vector(e)


def look_in_box(n, box):
    """Effect of looking whether the ball is in ``box`` (1-based)."""
    return basis_state(n, box)


def coin_mix_effect(r1, r2, lam):
    """Measure ``r1`` with probability ``lam``, else ``r2``."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"coin bias {lam} outside [0, 1]")
    r1 = as_vector(r1, name="r1")
    r2 = as_vector(r2, len(r1), name="r2")
    return as_vector(lam * r1 + (1.0 - lam) * r2)


def extreme_points(n):
    """Basis states followed by the null state."""
    return [basis_state(n, i) for i in range(1, n + 1)] + [as_vector(np.zeros(n))]


def in_convex_hull(points, x, tol=DEFAULT.eigenvalue):
    """LP feasibility of ``x = sum_i w_i points[i]`` with ``w`` on the simplex."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    x = np.asarray(x, dtype=np.float64)
    m = pts.shape[0]
    a_eq = np.vstack([pts.T, np.ones((1, m))])
    b_eq = np.concatenate([x, [1.0]])
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
    if res.status != 0:
        return False
    return bool(np.abs(a_eq @ res.x - b_eq).max() <= max(tol, 1e-9))


def extremal_subset(points, tol=DEFAULT.eigenvalue):
    """Indices of the points not in the convex hull of the remaining ones."""
    pts = [np.asarray(p, dtype=np.float64) for p in points]
    keep = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not others or not in_convex_hull(others, p, tol):
            keep.append(i)
    return keep


def classical_reversible_transforms(n):
    """All ``n!`` permutation matrices, identity first."""
    if n > MAX_ENUMERATION:
        raise ResourceError(f"refusing to enumerate {n}! permutations (limit N <= {MAX_ENUMERATION})")
    if n < 1:
        raise DomainError(f"need at least one box, got {n}")
    eye = np.eye(n)
    out = []
    for perm in itertools.permutations(range(n)):
        z = eye[:, perm]
        z.setflags(write=False)
        out.append(z)
    return out


def classical_discreteness_gap(n):
    """Smallest Frobenius distance between two distinct permutation matrices.

    Permutation matrices ``P``, ``Q`` with images differing at ``d`` columns
    satisfy ``||P - Q||_F = sqrt(2 d)``.
    """
    if n < 2:
        raise DomainError("the reversible group is trivial for N < 2")
    if n > MAX_ENUMERATION:
        raise ResourceError(f"refusing to enumerate {n}! permutations (limit N <= {MAX_ENUMERATION})")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    # two distinct permutations always differ in at least two places
    d = _kernels.min_row_mismatch(perms, floor=2)
    return math.sqrt(2.0 * d)
