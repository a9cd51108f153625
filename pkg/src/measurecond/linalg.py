"""
Dense complex linear algebra for small composite Hilbert spaces.

States and operators are thin immutable wrappers over ``complex128`` numpy
arrays that check their invariants on construction. Composite spaces use the
row-major convention: basis vector ``(i, j)`` of ``H1 ⊗ H2`` sits at flat
index ``i * d2 + j``, which is exactly the layout produced by ``np.kron``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .constants import RAY_TOL, TAU_NORM, TAU_RANK, TAU_STRUCT
from .errors import ContractViolation, DimensionMismatch, InvalidProjectorError


def _frozen_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ContractViolation(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ContractViolation(f"{what} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{what} contains NaN or Inf")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen_array(self.amplitudes, 1, "state amplitudes")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > TAU_NORM:
            raise ContractViolation(f"state is not normalized: ‖v‖² = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        if not 0 <= index < dim:
            raise ContractViolation(f"basis index {index} out of range for dim {dim}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, values) -> StateVector:
        """Build a state from arbitrary nonzero amplitudes by rescaling them."""
        amps = np.asarray(values, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0 or not np.isfinite(norm):
            raise ContractViolation("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix acting on a ``dim``-dimensional space."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.matrix, 2, "operator matrix")
        if m.shape[0] != m.shape[1]:
            raise ContractViolation(f"operator must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int):
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zero(cls, dim: int):
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    def apply(self, state: StateVector) -> np.ndarray:
        """Return the (generally unnormalized) image ``M v`` as a raw array."""
        if state.dim != self.dim:
            raise DimensionMismatch(f"operator dim {self.dim} vs state dim {state.dim}")
        return self.matrix @ state.amplitudes


class ProjectorCheck(NamedTuple):
    ok: bool
    hermitian_residual: float
    idempotent_residual: float

    def __bool__(self) -> bool:
        return self.ok


def validate_projector(m: Operator | np.ndarray, tol: float = TAU_STRUCT) -> ProjectorCheck:
    """Check Hermiticity and idempotency of ``m`` in the max norm.

    Examples
    --------
    >>> validate_projector(np.diag([0.5, 0.5])).idempotent_residual
    0.25
    """
    mat = m.matrix if isinstance(m, Operator) else np.asarray(m, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {mat.shape}")
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    idem = float(np.max(np.abs(mat @ mat - mat)))
    return ProjectorCheck(herm <= tol and idem <= tol, herm, idem)


@dataclass(frozen=True, eq=False)
class Projector(Operator):
    """Hermitian idempotent operator, i.e. a quantum event."""

    def __post_init__(self):
        super().__post_init__()
        check = validate_projector(self.matrix)
        if not check.ok:
            raise InvalidProjectorError(
                "not an orthogonal projector: hermitian residual "
                f"{check.hermitian_residual:.3e}, idempotent residual {check.idempotent_residual:.3e}"
            )

    @classmethod
    def _trusted(cls, matrix: np.ndarray) -> Projector:
        # Only for results that are projectors by construction (I - P, P ⊗ I, I ⊗ Q).
        obj = object.__new__(cls)
        m = np.asarray(matrix, dtype=np.complex128).copy()
        m.setflags(write=False)
        object.__setattr__(obj, "matrix", m)
        return obj

    @classmethod
    def from_span(cls, vectors: Iterable, dim: int | None = None) -> Projector:
        """Orthogonal projector onto the span of ``vectors``.

        Linearly dependent inputs are dropped during orthonormalization, so
        the rank of the result is the dimension of the span.
        """
        vecs = [np.asarray(v, dtype=np.complex128) for v in vectors]
        if not vecs:
            if dim is None:
                raise ContractViolation("empty span needs an explicit dim")
            return cls.zero(dim)
        if dim is not None and any(v.shape != (dim,) for v in vecs):
            raise DimensionMismatch(f"spanning vectors must all have dim {dim}")
        basis = gram_schmidt(vecs)
        n = vecs[0].shape[0]
        if basis.shape[1] == 0:
            return cls.zero(n)
        return cls(basis @ basis.conj().T)

    @classmethod
    def rank1(cls, v: StateVector | Sequence) -> Projector:
        amps = v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=np.complex128)
        return cls.from_span([amps])

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))


@dataclass(frozen=True)
class CompositeSpace:
    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ContractViolation(f"factor dimensions must be positive, got ({self.d1}, {self.d2})")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    def index(self, i: int, j: int) -> int:
        return i * self.d2 + j

    def coefficients(self, eta: StateVector) -> np.ndarray:
        """``d1 × d2`` matrix ``C`` with ``C[i, j]`` the amplitude at ``(i, j)``."""
        if eta.dim != self.dim:
            raise DimensionMismatch(f"state dim {eta.dim} does not match composite dim {self.dim}")
        return eta.amplitudes.reshape(self.d1, self.d2)


def inner_product(u: StateVector, v: StateVector) -> complex:
    """⟨u, v⟩, conjugate-linear in ``u``."""
    if u.dim != v.dim:
        raise DimensionMismatch(f"inner product of dims {u.dim} and {v.dim}")
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def same_ray(u: StateVector, v: StateVector, tol: float = RAY_TOL) -> bool:
    """True when ``u`` and ``v`` differ at most by a global phase."""
    return abs(inner_product(u, v)) >= 1.0 - tol


def tensor_state(u: StateVector, v: StateVector, space: CompositeSpace) -> StateVector:
    if u.dim != space.d1 or v.dim != space.d2:
        raise DimensionMismatch(f"({u.dim}, {v.dim}) does not match space ({space.d1}, {space.d2})")
    return StateVector(np.kron(u.amplitudes, v.amplitudes))


def tensor_operator(a: Operator, b: Operator, space: CompositeSpace) -> Operator:
    if a.dim != space.d1 or b.dim != space.d2:
        raise DimensionMismatch(f"({a.dim}, {b.dim}) does not match space ({space.d1}, {space.d2})")
    return Operator(np.kron(a.matrix, b.matrix))


def embed_first(p: Projector, space: CompositeSpace) -> Projector:
    """``P ⊗ I``: an event on the first factor seen on the composite."""
    if p.dim != space.d1:
        raise DimensionMismatch(f"projector dim {p.dim} does not match first factor {space.d1}")
    return Projector._trusted(np.kron(p.matrix, np.eye(space.d2)))


def embed_second(q: Projector, space: CompositeSpace) -> Projector:
    """``I ⊗ Q``: an event on the second factor seen on the composite."""
    if q.dim != space.d2:
        raise DimensionMismatch(f"projector dim {q.dim} does not match second factor {space.d2}")
    return Projector._trusted(np.kron(np.eye(space.d1), q.matrix))


def complement(p: Projector) -> Projector:
    return Projector._trusted(np.eye(p.dim) - p.matrix)


def commutator_norm(a: Operator, b: Operator) -> float:
    """Max-norm of ``AB − BA``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"commutator of dims {a.dim} and {b.dim}")
    return float(np.max(np.abs(a.matrix @ b.matrix - b.matrix @ a.matrix)))


def gram_schmidt(vectors: Sequence[np.ndarray], tol: float = 1e-10) -> np.ndarray:
    """Orthonormalize ``vectors`` with modified Gram-Schmidt plus one re-orthogonalization pass.

    Returns a ``(n, k)`` array whose columns are orthonormal. A vector whose
    residual falls below ``tol`` times its original norm is treated as
    dependent and dropped.
    """
    basis: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=np.complex128)
        start = np.linalg.norm(w)
        if start == 0:
            continue
        for _ in range(2):  # twice is enough
            for e in basis:
                w -= np.vdot(e, w) * e
        norm = np.linalg.norm(w)
        if norm <= tol * start:
            continue
        basis.append(w / norm)
    n = len(vectors[0]) if len(vectors) else 0
    if not basis:
        return np.zeros((n, 0), dtype=np.complex128)
    return np.column_stack(basis)


def jacobi_eigh(h: np.ndarray, tol: float = 1e-14, max_sweeps: int = 50):
    """Eigen-decomposition of a small Hermitian matrix by cyclic complex Jacobi rotations.

    Each pivot ``(p, q)`` is first made real by a diagonal phase and then
    annihilated by a real plane rotation. Sweeps stop once the off-diagonal
    Frobenius mass drops below ``tol`` times the total.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as columns.
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ContractViolation(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > TAU_STRUCT * max(1.0, np.max(np.abs(a))):
        raise ContractViolation("jacobi_eigh needs a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if scale == 0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        negligible = tol * scale / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                mag = abs(apq)
                if mag <= negligible:
                    continue
                phase = apq / mag
                cph = phase.conjugate()
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane; A <- U^H A U
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * cph * col_q
                a[:, q] = s * col_p + c * cph * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * cph * vec_q
                v[:, q] = s * vec_p + c * cph * vec_q
    evals = np.diag(a).real.copy()
    order = np.argsort(evals)
    return evals[order], v[:, order]


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Circle-method schedule: ``n - 1`` steps of ``n / 2`` disjoint pairs covering every pair once."""
    players = list(range(n))
    steps = []
    for _ in range(n - 1):
        half = n // 2
        left, right = players[:half], players[half:][::-1]
        pairs = sorted((min(a, b), max(a, b)) for a, b in zip(left, right))
        steps.append((np.array([a for a, _ in pairs]), np.array([b for _, b in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return steps


def jacobi_singular_values(c: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Singular values of ``c`` by one-sided (Hestenes) Jacobi, descending.

    Column pairs are rotated until mutually orthogonal, which is the
    two-sided Jacobi iteration on ``c^H c`` carried out implicitly; the
    Gram matrix is never formed, so small singular values keep their
    relative accuracy. Disjoint pairs from a round-robin schedule are
    rotated together.
    """
    u = np.array(c, dtype=np.complex128)
    if u.ndim != 2:
        raise ContractViolation(f"expected a matrix, got shape {u.shape}")
    if u.shape[1] > u.shape[0]:
        u = u.T.copy()
    n = u.shape[1]
    if n % 2:
        u = np.hstack([u, np.zeros((u.shape[0], 1), dtype=np.complex128)])
    steps = _round_robin(u.shape[1]) if u.shape[1] > 1 else []
    for _ in range(max_sweeps):
        rotated = False
        for ps, qs in steps:
            up, uq = u[:, ps], u[:, qs]
            alpha = np.einsum("ij,ij->j", up.conj(), up).real
            beta = np.einsum("ij,ij->j", uq.conj(), uq).real
            gamma = np.einsum("ij,ij->j", up.conj(), uq)
            mag = np.abs(gamma)
            active = mag > tol * np.sqrt(alpha * beta)
            if not active.any():
                continue
            rotated = True
            safe = np.where(active, mag, 1.0)
            cph = np.where(active, gamma.conj() / safe, 1.0)
            zeta = (beta - alpha) / (2.0 * safe)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(zeta * zeta + 1.0))
            t = np.where(active, t, 0.0)
            cs = 1.0 / np.sqrt(t * t + 1.0)
            sn = t * cs
            u[:, ps] = cs * up - sn * cph * uq
            u[:, qs] = sn * up + cs * cph * uq
        if not rotated:
            break
    return np.sort(np.linalg.norm(u[:, :n], axis=0))[::-1]


def schmidt_coefficients(eta: StateVector, space: CompositeSpace) -> np.ndarray:
    """Singular values of the coefficient matrix, descending."""
    return jacobi_singular_values(space.coefficients(eta))


def schmidt_rank(eta: StateVector, space: CompositeSpace, tol: float = TAU_RANK) -> int:
    return int(np.sum(schmidt_coefficients(eta, space) > tol))
