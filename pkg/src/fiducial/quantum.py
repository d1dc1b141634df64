"""Quantum theory in fiducial-probability coordinates.

A :class:`FiducialFrame` fixes ``N**2`` rank-one projectors whose Born
probabilities determine a density matrix. Hermitian operators are carried
through a real orthonormal basis (diagonal units, symmetric and
antisymmetric pair units), so every map between operators and
``p``/``r`` vectors is a real ``K x K`` matrix.
"""

import functools
import math

import numpy as np
from scipy.linalg import expm

from .config import DEFAULT
from .core import VALID, TheoryModel, as_matrix, as_vector, invalid
from .errors import (
    CompletePositivityError,
    DimensionError,
    DomainError,
    FiducialError,
    GammaMembershipError,
)

MAX_DIMENSION = 8
MAX_CANONICAL = 12


def hermitian_basis(n):
    """Real orthonormal basis of ``n x n`` Hermitian matrices, shape ``(n*n, n, n)``.

    Order: ``E_aa`` for each ``a``, then for each pair ``a < b`` the symmetric
    unit ``(E_ab + E_ba)/sqrt 2`` and the antisymmetric unit
    ``i(E_ba - E_ab)/sqrt 2``.
    """
    out = np.zeros((n * n, n, n), dtype=complex)
    for a in range(n):
        out[a, a, a] = 1.0
    j = n
    s = 1.0 / math.sqrt(2.0)
    for a in range(n):
        for b in range(a + 1, n):
            out[j, a, b] = out[j, b, a] = s
            out[j + 1, a, b] = -1j * s
            out[j + 1, b, a] = 1j * s
            j += 2
    out.setflags(write=False)
    return out


def _ket(n, amplitudes):
    v = np.zeros(n, dtype=complex)
    for idx, amp in amplitudes:
        v[idx] = amp
    return v / np.linalg.norm(v)


def _is_hermitian(x, tol):
    return np.abs(x - x.conj().T).max() <= tol * max(1.0, np.abs(x).max())


class FiducialFrame:
    """``N**2`` linearly independent projectors and the maps they induce.

    Attributes
    ----------
    n : int
        Hilbert-space dimension.
    k : int
        Number of fiducial probabilities, ``n**2``.
    projectors : ndarray, shape (k, n, n)
    basis : ndarray, shape (k, n, n)
        Real orthonormal Hermitian basis used for vectorization.
    forward : ndarray, shape (k, k)
        ``forward[k, j] = tr(P_k H_j)``; maps basis coordinates to ``p``.
    inverse : ndarray, shape (k, k)
        Inverse of ``forward``.
    """

    def __init__(self, projectors, tol=DEFAULT):
        proj = np.array(projectors, dtype=complex)
        if proj.ndim != 3 or proj.shape[1] != proj.shape[2]:
            raise DimensionError("projectors must have shape (k, n, n)")
        n = proj.shape[1]
        if proj.shape[0] != n * n:
            raise DimensionError(f"need {n * n} projectors for dimension {n}, got {proj.shape[0]}")
        self.n = n
        self.k = n * n
        self.tol = tol
        proj.setflags(write=False)
        self.projectors = proj
        self.basis = hermitian_basis(n)
        fwd = np.einsum("kab,jba->kj", proj, self.basis).real
        s = np.linalg.svd(fwd, compute_uv=False)
        if s[-1] <= tol.rank * s[0]:
            raise FiducialError("fiducial projectors are linearly dependent")
        self.forward = as_matrix(fwd)
        self.inverse = as_matrix(np.linalg.inv(fwd))
        self.condition = float(s[0] / s[-1])

    def __repr__(self):
        return f"FiducialFrame(n={self.n})"

    def coords(self, x):
        """Coordinates ``tr(H_j X)``; complex for non-Hermitian ``X``."""
        return np.einsum("jab,ba->j", self.basis, x)

    def from_coords(self, h):
        return np.einsum("j,jab->ab", h, self.basis)

    def tensor(self, other):
        """Product frame; index ``(k, l)`` maps to ``k * other.k + l``."""
        prods = [np.kron(a, b) for a in self.projectors for b in other.projectors]
        return FiducialFrame(prods, tol=self.tol)


@functools.lru_cache(maxsize=None)
def fiducial_frame(n):
    """Standard frame for dimension ``n``.

    Projectors onto ``|a>`` for each ``a``, then for each pair ``a < b`` onto
    ``(|a> + |b>)/sqrt 2`` and ``(|a> + i|b>)/sqrt 2``. For ``n = 2`` this is
    z+, z-, x+, y+.
    """
    if not 1 <= n <= MAX_DIMENSION:
        raise DomainError(f"dimension {n} outside 1..{MAX_DIMENSION}")
    kets = [_ket(n, [(a, 1.0)]) for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            kets.append(_ket(n, [(a, 1.0), (b, 1.0)]))
            kets.append(_ket(n, [(a, 1.0), (b, 1j)]))
    return FiducialFrame([np.outer(v, v.conj()) for v in kets])


def _frame_for(n, frame):
    return fiducial_frame(n) if frame is None else frame


def _square(x, n=None, name="operator"):
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise DimensionError(f"{name} has dimension {x.shape[0]}, frame has {n}")
    return x


def rho_to_p(frame, rho):
    """Fiducial probabilities ``p_k = tr(P_k rho)``."""
    rho = _square(rho, frame.n, "density operator")
    if not _is_hermitian(rho, frame.tol.dot):
        raise DomainError("density operator is not Hermitian")
    return as_vector(np.einsum("kab,ba->k", frame.projectors, rho).real)


def p_to_rho(frame, p):
    """The unique Hermitian operator reproducing the fiducial probabilities ``p``.

    Vectors outside the state set still reconstruct; pair with
    :func:`density_validity` to see whether the result is a state.
    """
    p = as_vector(p, frame.k, "state")
    rho = frame.from_coords(frame.inverse @ p)
    return 0.5 * (rho + rho.conj().T)


def density_validity(rho, tol=DEFAULT):
    """PSD with trace at most one, within ``tol.eigenvalue``."""
    rho = np.asarray(rho, dtype=complex)
    if not _is_hermitian(rho, tol.dot):
        return invalid("not Hermitian")
    ev = np.linalg.eigvalsh(rho)
    if ev[0] < -tol.eigenvalue:
        return invalid(f"negative eigenvalue {ev[0]:.6g}")
    if ev.sum() > 1.0 + tol.eigenvalue:
        return invalid(f"trace {ev.sum():.6g} > 1")
    return VALID


def effect_validity(a, tol=DEFAULT):
    """``0 <= A <= I`` within ``tol.eigenvalue``."""
    a = np.asarray(a, dtype=complex)
    if not _is_hermitian(a, tol.dot):
        return invalid("not Hermitian")
    ev = np.linalg.eigvalsh(a)
    if ev[0] < -tol.eigenvalue:
        return invalid(f"negative eigenvalue {ev[0]:.6g}")
    if ev[-1] > 1.0 + tol.eigenvalue:
        return invalid(f"eigenvalue {ev[-1]:.6g} > 1")
    return VALID


def operator_to_effect(frame, a):
    """Effect vector ``r`` with ``r . p == tr(A rho(p))`` for every ``p``."""
    a = _square(a, frame.n, "operator")
    if not _is_hermitian(a, frame.tol.dot):
        raise DomainError("measurement operator is not Hermitian")
    return as_vector(frame.inverse.T @ frame.coords(a).real)


def effect_to_operator(frame, r):
    r = as_vector(r, frame.k, "effect")
    a = frame.from_coords(frame.forward.T @ r)
    return 0.5 * (a + a.conj().T)


def qubit_offdiagonal(p, verbatim=False):
    """Off-diagonal entry ``rho[0, 1]`` of a qubit from ``(p_z+, p_z-, p_x+, p_y+)``.

    ``verbatim=True`` evaluates ``p_x+ - p_y+ - (1-i)/2 (p_z+ + p_z-)``, which
    does not reproduce y-polarized states; the default is the form consistent
    with the Born rule, ``p_x+ - i p_y+ - (1-i)/2 (p_z+ + p_z-)``.
    """
    pz_plus, pz_minus, px, py = as_vector(p, 4, "qubit state")
    y_weight = 1.0 if verbatim else 1j
    return px - y_weight * py - (1 - 1j) / 2 * (pz_plus + pz_minus)


def qubit_rho(p, verbatim=False):
    """Closed-form qubit density matrix from ``(p_z+, p_z-, p_x+, p_y+)``."""
    p = as_vector(p, 4, "qubit state")
    a = qubit_offdiagonal(p, verbatim=verbatim)
    return np.array([[p[0], a], [np.conj(a), p[1]]], dtype=complex)


def qubit_ball_coords(p, tol=DEFAULT):
    """``(p_x+, p_y+, p_z+)`` for a normalized qubit state.

    Valid states fall in the ball of radius 1/2 about ``(1/2, 1/2, 1/2)``.
    """
    p = as_vector(p, 4, "qubit state")
    if abs(p[0] + p[1] - 1.0) > tol.eigenvalue:
        raise DomainError(f"state is not normalized (p_z+ + p_z- = {p[0] + p[1]:.6g})")
    return float(p[2]), float(p[3]), float(p[0])


def ball_radius(p):
    x, y, z = qubit_ball_coords(p)
    return math.sqrt((x - 0.5) ** 2 + (y - 0.5) ** 2 + (z - 0.5) ** 2)


# --- channels ---------------------------------------------------------------


def _choi_from_map(fn, n):
    j4 = np.zeros((n, n, n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[a, b] = 1.0
            j4[a, :, b, :] = fn(e)
    return j4.reshape(n * n, n * n)


class QuantumChannel:
    """Linear map on ``n x n`` operators held as its Choi matrix.

    The Choi matrix is unnormalized with the input factor first:
    ``J = sum_ab |a><b| (x) Phi(|a><b|)``.
    """

    def __init__(self, choi, tol=DEFAULT):
        choi = np.array(choi, dtype=complex)
        n = math.isqrt(choi.shape[0])
        if choi.ndim != 2 or choi.shape != (n * n, n * n):
            raise DimensionError(f"Choi matrix must be (n^2, n^2), got {choi.shape}")
        choi.setflags(write=False)
        self.choi = choi
        self.n = n
        self.tol = tol

    @classmethod
    def from_kraus(cls, kraus, tol=DEFAULT):
        ks = [np.asarray(k, dtype=complex) for k in kraus]
        if not ks:
            raise DomainError("need at least one Kraus operator")
        n = ks[0].shape[0]
        for k in ks:
            if k.shape != (n, n):
                raise DimensionError("Kraus operators must share one square shape")
        vs = np.array([k.T.reshape(-1) for k in ks])
        return cls(vs.T @ vs.conj(), tol=tol)

    @classmethod
    def from_map(cls, fn, n, tol=DEFAULT):
        return cls(_choi_from_map(fn, n), tol=tol)

    @classmethod
    def identity(cls, n):
        return cls.from_kraus([np.eye(n)])

    @classmethod
    def unitary(cls, u):
        return cls.from_kraus([u])

    def __call__(self, x):
        j4 = self.choi.reshape(self.n, self.n, self.n, self.n)
        return np.einsum("ab,acbd->cd", np.asarray(x, dtype=complex), j4)

    def compose(self, inner):
        """``self`` after ``inner``."""
        return QuantumChannel.from_map(lambda x: self(inner(x)), self.n, tol=self.tol)

    def choi_state(self):
        """Choi matrix normalized by the input dimension."""
        return self.choi / self.n

    def cp_validity(self):
        ev = np.linalg.eigvalsh(0.5 * (self.choi + self.choi.conj().T))
        if ev[0] < -self.tol.eigenvalue:
            return invalid(f"Choi matrix has eigenvalue {ev[0] / self.n:.6g} (normalized)")
        return VALID

    def trace_validity(self):
        j4 = self.choi.reshape(self.n, self.n, self.n, self.n)
        t = np.einsum("acbc->ab", j4)
        ev = np.linalg.eigvalsh(0.5 * (t + t.conj().T))
        if ev[-1] > 1.0 + self.tol.eigenvalue:
            return invalid(f"trace-increasing (largest eigenvalue {ev[-1]:.6g} of Phi^dagger(I))")
        return VALID

    def validity(self):
        cp = self.cp_validity()
        return cp if not cp else self.trace_validity()


def channel_to_Z(frame, channel):
    """Real ``K x K`` matrix with ``Z p(rho) == p(channel(rho))``.

    Raises
    ------
    CompletePositivityError
        Choi matrix not PSD.
    GammaMembershipError
        Channel increases trace.
    """
    if channel.n != frame.n:
        raise DimensionError(f"channel acts on dimension {channel.n}, frame has {frame.n}")
    cp = channel.cp_validity()
    if not cp:
        raise CompletePositivityError(cp.reason)
    tn = channel.trace_validity()
    if not tn:
        raise GammaMembershipError(tn.reason)
    return _superop_to_Z(frame, _superop(frame, channel))


def map_to_Z(frame, channel):
    """Like :func:`channel_to_Z` with no membership checks."""
    return _superop_to_Z(frame, _superop(frame, channel))


def _superop(frame, channel):
    outs = np.array([channel(h) for h in frame.basis])
    m = np.einsum("iab,jba->ij", frame.basis, outs)
    if np.abs(m.imag).max() > frame.tol.dot * max(1.0, np.abs(m).max()):
        raise DomainError("map does not preserve Hermiticity")
    return m.real


def _superop_to_Z(frame, m):
    return as_matrix(frame.forward @ m @ frame.inverse)


def Z_to_channel(frame, z):
    """Linear map on operators induced by ``Z`` through the frame."""
    z = as_matrix(z, frame.k, "transform")
    m = frame.inverse @ z @ frame.forward
    h = frame.basis
    j4 = np.einsum("ij,jba,icd->acbd", m, h, h)
    return QuantumChannel(j4.reshape(frame.k, frame.k), tol=frame.tol)


def is_valid_quantum_transform(frame, z):
    """Whether ``Z`` is a completely positive, trace non-increasing map.

    Returns a :class:`~fiducial.core.Validity` carrying the failure reason.
    """
    ch = Z_to_channel(frame, z)
    cp = ch.cp_validity()
    if not cp:
        return cp
    return ch.trace_validity()


# --- sampling ---------------------------------------------------------------


def random_ket(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_unitary(n, rng):
    g = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(n, rng, rank=None, trace=1.0):
    """Ginibre-distributed density matrix of the given rank and trace."""
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho * (trace / np.trace(rho).real)


def random_effect_operator(n, rng):
    """``U diag(e) U^dagger`` with ``e`` uniform in ``[0, 1]``."""
    u = random_unitary(n, rng)
    a = (u * rng.uniform(size=n)) @ u.conj().T
    return 0.5 * (a + a.conj().T)


def pure_ket(rho, tol=DEFAULT):
    """Unit vector ``psi`` with ``rho == |psi><psi|``; raises if ``rho`` is not pure."""
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if abs(w[-1] - 1.0) > tol.eigenvalue or (w.size > 1 and abs(w[:-1]).max() > tol.eigenvalue):
        raise DomainError("state is not a normalized pure state")
    return v[:, -1]


def unitary_path(rho_from, rho_to, steps, frame=None):
    """States along the geodesic unitary orbit joining two pure states.

    Returns ``steps + 1`` fiducial vectors; the first and last equal
    ``rho_to_p(rho_from)`` and ``rho_to_p(rho_to)``. Consecutive states are
    related by the fixed reversible map :func:`unitary_path_step`.
    """
    if steps < 1:
        raise DomainError("need at least one step")
    rho_from = _square(rho_from, name="rho_from")
    n = rho_from.shape[0]
    frame = _frame_for(n, frame)
    rho_to = _square(rho_to, n, "rho_to")
    gen, theta = _geodesic(rho_from, rho_to, frame.tol)
    start = rho_to_p(frame, rho_from)
    end = rho_to_p(frame, rho_to)
    path = [start]
    for j in range(1, steps):
        u = expm(gen * (theta * j / steps))
        path.append(rho_to_p(frame, u @ rho_from @ u.conj().T))
    path.append(end)
    return path


def unitary_path_step(rho_from, rho_to, steps, frame=None):
    """Reversible ``Z`` advancing :func:`unitary_path` by one step."""
    rho_from = _square(rho_from, name="rho_from")
    frame = _frame_for(rho_from.shape[0], frame)
    gen, theta = _geodesic(rho_from, _square(rho_to, frame.n, "rho_to"), frame.tol)
    u = expm(gen * (theta / steps))
    return channel_to_Z(frame, QuantumChannel.unitary(u))


def _geodesic(rho_from, rho_to, tol):
    # anti-Hermitian generator rotating psi towards phi inside their span
    psi = pure_ket(rho_from, tol)
    phi = pure_ket(rho_to, tol)
    overlap = np.vdot(psi, phi)
    if abs(overlap) > 0:
        phi = phi * (np.conj(overlap) / abs(overlap))
    c = min(1.0, abs(overlap))
    theta = math.acos(c)
    chi = phi - c * psi
    norm = np.linalg.norm(chi)
    n = psi.size
    if norm < 1e-15:
        return np.zeros((n, n), dtype=complex), 0.0
    chi = chi / norm
    gen = np.outer(chi, psi.conj()) - np.outer(psi, chi.conj())
    return gen, theta


# --- model -----------------------------------------------------------------


class QuantumModel(TheoryModel):
    """Quantum theory of dimension ``n`` with ``K = n**2``."""

    kind = "quantum"

    def __init__(self, n, frame=None, labels=None, parts=(), tol=DEFAULT):
        super().__init__(n, n * n, labels=labels, parts=parts, tol=tol)
        self.frame = _frame_for(n, frame)
        if self.frame.n != n:
            raise DimensionError(f"frame dimension {self.frame.n} does not match {n}")

    def rho(self, p):
        return p_to_rho(self.frame, p)

    def p(self, rho):
        return rho_to_p(self.frame, rho)

    def _check_state(self, p):
        return density_validity(p_to_rho(self.frame, p), self.tol)

    def _check_effect(self, r):
        return effect_validity(effect_to_operator(self.frame, r), self.tol)

    def _check_transform(self, z):
        return is_valid_quantum_transform(self.frame, z)

    def unit_effect(self):
        return operator_to_effect(self.frame, np.eye(self.n))

    def is_pure(self, p):
        w = np.linalg.eigvalsh(p_to_rho(self.frame, p))
        eps = self.tol.eigenvalue
        return abs(w[-1] - 1.0) <= eps and (w.size == 1 or np.abs(w[:-1]).max() <= eps)

    def random_state(self, rng, pure=False):
        if pure:
            v = random_ket(self.n, rng)
            return rho_to_p(self.frame, np.outer(v, v.conj()))
        return rho_to_p(self.frame, random_density_matrix(self.n, rng))

    def pure_kets(self):
        kets = [_ket(self.n, [(a, 1.0)]) for a in range(self.n)]
        for a in range(self.n):
            for b in range(a + 1, self.n):
                kets.append(_ket(self.n, [(a, 1.0), (b, 1.0)]))
        return kets[:MAX_CANONICAL]

    def pure_family(self):
        return [rho_to_p(self.frame, np.outer(v, v.conj())) for v in self.pure_kets()]


def quantum_model(n):
    """Quantum model with the standard frame of dimension ``n``."""
    return QuantumModel(n)
