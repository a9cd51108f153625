"""
Projective measurement on pure states of a two-component system.

Events are projectors; the probability of an event is ``⟨ψ, Pψ⟩`` and the
state after observing it is ``Pψ / ‖Pψ‖``. On a composite space an event
``P`` on the first factor and ``Q`` on the second always commute, so the
quantum conditional probability ``P(P|Q)`` reduces to the classical ratio of
joint to marginal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Mapping, Sequence

import numpy as np

from .classical import JointTable
from .constants import EPS_ZERO, TAU_NORM, TAU_STRUCT
from .errors import ContractViolation, DimensionMismatch, NonHermitianError, InvalidProjectorError, ZeroProbabilityError
from .linalg import (
    CompositeSpace,
    Operator,
    Projector,
    StateVector,
    complement,
    embed_first,
    embed_second,
    inner_product,
    tensor_state,
)

Side = Literal["first", "second"]


@dataclass(frozen=True, eq=False)
class EntangledPairSpec:
    """Parameters of ``η = a ψ⊗φ + b φ⊗ψ`` with ``ψ ⟂ φ`` and both weights strictly inside (0, 1)."""

    a: complex
    b: complex
    psi: StateVector
    phi: StateVector

    def __post_init__(self):
        wa, wb = abs(self.a) ** 2, abs(self.b) ** 2
        if abs(wa + wb - 1.0) > TAU_NORM:
            raise ContractViolation(f"|a|² + |b|² = {wa + wb!r}, expected 1")
        if not (0.0 < wa < 1.0 and 0.0 < wb < 1.0):
            raise ContractViolation(f"weights must lie strictly in (0, 1), got |a|²={wa}, |b|²={wb}")
        if self.psi.dim != self.phi.dim:
            raise DimensionMismatch("psi and phi must live in the same space")
        if abs(inner_product(self.psi, self.phi)) > TAU_STRUCT:
            raise ContractViolation("psi and phi must be orthogonal")


@dataclass(frozen=True, eq=False)
class EventPair:
    """An event ``p`` on the first factor and ``q`` on the second."""

    p: Projector
    q: Projector
    space: CompositeSpace

    def __post_init__(self):
        if self.p.dim != self.space.d1 or self.q.dim != self.space.d2:
            raise DimensionMismatch(
                f"events of dims ({self.p.dim}, {self.q.dim}) on space ({self.space.d1}, {self.space.d2})"
            )

    def with_complements(self, first: bool = False, second: bool = False) -> EventPair:
        return EventPair(
            complement(self.p) if first else self.p,
            complement(self.q) if second else self.q,
            self.space,
        )


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """Observable given by its spectral data ``A = Σ a_j |a_j⟩⟨a_j|``.

    Degenerate eigenvalues are allowed; they are grouped by exact equality
    of the supplied labels.
    """

    eigenvalues: tuple[float, ...]
    eigenvectors: tuple[StateVector, ...]

    def __post_init__(self):
        vals = tuple(float(x) for x in self.eigenvalues)
        vecs = tuple(self.eigenvectors)
        if len(vals) != len(vecs) or not vals:
            raise ContractViolation("need one eigenvector per eigenvalue")
        dim = vecs[0].dim
        if len(vecs) != dim or any(v.dim != dim for v in vecs):
            raise DimensionMismatch("eigenvectors must form a full basis of one space")
        basis = np.column_stack([v.amplitudes for v in vecs])
        if np.max(np.abs(basis.conj().T @ basis - np.eye(dim))) > TAU_STRUCT:
            raise ContractViolation("eigenvectors are not orthonormal")
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @classmethod
    def diagonal(cls, eigenvalues: Sequence[float]) -> ObservableSpec:
        n = len(eigenvalues)
        return cls(tuple(eigenvalues), tuple(StateVector.basis(n, j) for j in range(n)))

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def _basis(self) -> np.ndarray:
        return np.column_stack([v.amplitudes for v in self.eigenvectors])

    def operator(self) -> Operator:
        return self.function_operator(dict(zip(self.eigenvalues, self.eigenvalues)))

    def function_operator(self, f_table: Mapping[float, float]) -> Operator:
        """``f(A) = Σ f(a_j) |a_j⟩⟨a_j|`` from a lookup table over the eigenvalues."""
        u = self._basis()
        fvals = np.array([f_table[a] for a in self.eigenvalues], dtype=float)
        return Operator((u * fvals) @ u.conj().T)

    def outcome_probabilities(self, psi: StateVector) -> np.ndarray:
        """``p_ψ(j) = |⟨a_j, ψ⟩|²`` for each eigenvector."""
        if psi.dim != self.dim:
            raise DimensionMismatch(f"state dim {psi.dim} vs observable dim {self.dim}")
        return np.abs(self._basis().conj().T @ psi.amplitudes) ** 2


def tabulate(f: Callable[[float], float] | Mapping[float, float], eigenvalues: Sequence[float]) -> dict[float, float]:
    """Turn ``f`` into an exact lookup table over ``eigenvalues``."""
    if isinstance(f, Mapping):
        missing = [a for a in eigenvalues if a not in f]
        if missing:
            raise ContractViolation(f"value table has no entry for eigenvalues {missing}")
        return {a: float(f[a]) for a in eigenvalues}
    return {a: float(f(a)) for a in eigenvalues}


def event_probability(psi: StateVector, p: Operator) -> float:
    """Probability ``⟨ψ, Pψ⟩`` of the event ``p`` in state ``psi``."""
    value = complex(np.vdot(psi.amplitudes, p.apply(psi)))
    if abs(value.imag) > TAU_STRUCT:
        raise NonHermitianError(f"⟨ψ,Pψ⟩ has imaginary part {value.imag:.3e}")
    prob = value.real
    if prob < -TAU_NORM or prob > 1.0 + TAU_NORM:
        raise InvalidProjectorError(f"event probability {prob!r} outside [0, 1]")
    return min(max(prob, 0.0), 1.0)


def post_measurement_state(psi: StateVector, p: Projector) -> StateVector:
    """State ``Pψ / ‖Pψ‖`` after observing ``p``."""
    prob = event_probability(psi, p)
    if prob <= EPS_ZERO:
        raise ZeroProbabilityError(prob)
    image = p.apply(psi)
    return StateVector(image / np.linalg.norm(image))


def build_entangled_state(spec: EntangledPairSpec, space: CompositeSpace) -> StateVector:
    if spec.psi.dim != space.d1 or spec.psi.dim != space.d2:
        raise DimensionMismatch(f"pair of dim {spec.psi.dim} on space ({space.d1}, {space.d2})")
    a_part = tensor_state(spec.psi, spec.phi, space).amplitudes
    b_part = tensor_state(spec.phi, spec.psi, space).amplitudes
    return StateVector(spec.a * a_part + spec.b * b_part)


def _embed(p: Projector, side: Side, space: CompositeSpace) -> Projector:
    if side == "first":
        return embed_first(p, space)
    if side == "second":
        return embed_second(p, space)
    raise ContractViolation(f"side must be 'first' or 'second', got {side!r}")


def joint_probability(eta: StateVector, ev: EventPair) -> float:
    """``⟨η, (P⊗I)(I⊗Q) η⟩`` evaluated on the embedded operators."""
    if eta.dim != ev.space.dim:
        raise DimensionMismatch(f"state dim {eta.dim} vs composite dim {ev.space.dim}")
    return embedded_joint_probability(eta, embed_first(ev.p, ev.space), embed_second(ev.q, ev.space))


def embedded_joint_probability(eta: StateVector, p: Projector, q: Projector) -> float:
    """``⟨η, PQη⟩ = ⟨Pη, Qη⟩`` for commuting projectors already on the composite space."""
    value = complex(np.vdot(p.apply(eta), q.apply(eta)))
    if abs(value.imag) > TAU_STRUCT:
        raise NonHermitianError(f"⟨η,PQη⟩ has imaginary part {value.imag:.3e}; events do not commute")
    if value.real < -TAU_NORM or value.real > 1.0 + TAU_NORM:
        raise InvalidProjectorError(f"joint probability {value.real!r} outside [0, 1]")
    return min(max(value.real, 0.0), 1.0)


def marginal_probability(eta: StateVector, p: Projector, side: Side, space: CompositeSpace) -> float:
    return event_probability(eta, _embed(p, side, space))


def conditional_probability(eta: StateVector, ev: EventPair) -> float:
    """``P(P|Q) = P(P,Q) / P(Q)``."""
    marg = marginal_probability(eta, ev.q, "second", ev.space)
    if marg <= EPS_ZERO:
        raise ZeroProbabilityError(marg, "second-factor event")
    return joint_probability(eta, ev) / marg


def conditioned_state(eta: StateVector, q: Projector, space: CompositeSpace) -> StateVector:
    """State after observing ``q`` on the second factor."""
    return post_measurement_state(eta, embed_second(q, space))


def conditioned_state_first(eta: StateVector, p: Projector, space: CompositeSpace) -> StateVector:
    """State after observing ``p`` on the first factor."""
    return post_measurement_state(eta, embed_first(p, space))


# Closed forms for η = aψ⊗φ + bφ⊗ψ, used as independent cross-checks.

def expanded_joint_probability(spec: EntangledPairSpec, p: Projector, q: Projector) -> float:
    """Joint probability of ``(p, q)`` expanded over the four product terms of η.

    Only the diagonal terms and the two Hermitian-conjugate cross terms
    survive; no orthogonality of ψ and φ is used here.
    """
    psi, phi = spec.psi.amplitudes, spec.phi.amplitudes
    a, b = complex(spec.a), complex(spec.b)

    def sand(x, m, y):
        return np.vdot(x, m @ y)

    value = (
        abs(a) ** 2 * sand(psi, p.matrix, psi) * sand(phi, q.matrix, phi)
        + a.conjugate() * b * sand(psi, p.matrix, phi) * sand(phi, q.matrix, psi)
        + a * b.conjugate() * sand(phi, p.matrix, psi) * sand(psi, q.matrix, phi)
        + abs(b) ** 2 * sand(phi, p.matrix, phi) * sand(psi, q.matrix, psi)
    )
    return float(value.real)


def expanded_marginal(spec: EntangledPairSpec, p: Projector, side: Side) -> float:
    """Marginal of a one-factor event; cross terms vanish because ψ ⟂ φ."""
    psi, phi = spec.psi.amplitudes, spec.phi.amplitudes
    wa, wb = abs(spec.a) ** 2, abs(spec.b) ** 2
    on_psi = np.vdot(psi, p.matrix @ psi).real
    on_phi = np.vdot(phi, p.matrix @ phi).real
    if side == "first":
        return float(wa * on_psi + wb * on_phi)
    return float(wa * on_phi + wb * on_psi)


def expanded_conditioned_state(spec: EntangledPairSpec, q: Projector, space: CompositeSpace) -> np.ndarray:
    """``(a ψ⊗Qφ + b φ⊗Qψ) / ‖Qη‖`` as a raw amplitude array."""
    psi, phi = spec.psi.amplitudes, spec.phi.amplitudes
    raw = spec.a * np.kron(psi, q.matrix @ phi) + spec.b * np.kron(phi, q.matrix @ psi)
    return raw / np.sqrt(expanded_marginal(spec, q, "second"))


@dataclass(frozen=True)
class SequentialSymmetry:
    """Both sides of "measure Q then predict P" vs "measure P then predict Q".

    ``lhs`` and ``rhs`` are the quotient forms ``⟨η,QPQη⟩/P(Q)`` and
    ``⟨η,PQPη⟩/P(P)``; the ``*_via_state`` fields are the same quantities
    evaluated in the post-measurement states.
    """

    lhs: float
    rhs: float
    lhs_via_state: float
    rhs_via_state: float
    prob_p: float
    prob_q: float

    @property
    def form_discrepancy(self) -> float:
        return max(abs(self.lhs - self.lhs_via_state), abs(self.rhs - self.rhs_via_state))


def sequential_symmetry(eta: StateVector, p: Projector, q: Projector) -> SequentialSymmetry:
    if not (eta.dim == p.dim == q.dim):
        raise DimensionMismatch("state and both projectors must act on the same space")
    prob_p = event_probability(eta, p)
    prob_q = event_probability(eta, q)
    if prob_p <= EPS_ZERO:
        raise ZeroProbabilityError(prob_p, "P")
    if prob_q <= EPS_ZERO:
        raise ZeroProbabilityError(prob_q, "Q")
    x = eta.amplitudes
    P, Q = p.matrix, q.matrix
    lhs = np.vdot(x, Q @ (P @ (Q @ x))).real / prob_q
    rhs = np.vdot(x, P @ (Q @ (P @ x))).real / prob_p
    lhs_state = event_probability(post_measurement_state(eta, q), p)
    rhs_state = event_probability(post_measurement_state(eta, p), q)
    return SequentialSymmetry(float(lhs), float(rhs), lhs_state, rhs_state, prob_p, prob_q)


def operator_covariance(psi: StateVector, x: Operator, y: Operator) -> float:
    """``⟨ψ, (X − ⟨X⟩)(Y − ⟨Y⟩) ψ⟩`` for operators that commute on ``psi``'s space."""
    v = psi.amplitudes
    xv, yv = x.apply(psi), y.apply(psi)
    mean_x = np.vdot(v, xv)
    mean_y = np.vdot(v, yv)
    centered_y = yv - mean_y * v
    value = np.vdot(v, x.matrix @ centered_y) - mean_x * np.vdot(v, centered_y)
    if abs(value.imag) > TAU_STRUCT:
        raise NonHermitianError(f"covariance has imaginary part {value.imag:.3e}; operators do not commute")
    return float(value.real)


def quantum_covariance(psi: StateVector, a: ObservableSpec, f) -> float:
    """Covariance of ``f(A)`` and ``A`` in ``psi``; ``f`` is a value table or a callable."""
    table = tabulate(f, a.eigenvalues)
    return operator_covariance(psi, a.function_operator(table), a.operator())


def spectral_joint_distribution(psi: StateVector, a: ObservableSpec, f) -> JointTable:
    """Joint law of the outcomes of ``A`` and ``f(A)`` in ``psi``.

    Rows are the distinct values of ``A`` and columns the distinct values of
    ``f(A)``, both in order of first appearance; ``xvals``/``yvals`` carry
    the labels.
    """
    table = tabulate(f, a.eigenvalues)
    probs = a.outcome_probabilities(psi)
    xs = list(dict.fromkeys(a.eigenvalues))
    ys = list(dict.fromkeys(table[v] for v in a.eigenvalues))
    mass = np.zeros((len(xs), len(ys)))
    for val, p in zip(a.eigenvalues, probs):
        mass[xs.index(val), ys.index(table[val])] += p
    return JointTable(mass, xvals=tuple(xs), yvals=tuple(ys))
