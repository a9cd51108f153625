"""Random states, projectors and tables for the property suites, plus per-trial seeding.

Per-trial seeds come from a splitmix64 counter scheme::

    trial_seed(master, k) = splitmix64((master + (k + 1) * 0x9E3779B97F4A7C15) mod 2**64)

and each trial draws from ``numpy.random.default_rng(trial_seed(master, k))``.
Any implementation of splitmix64 reproduces which seeds are used; the sampled
values additionally depend on numpy's PCG64 stream.
"""

from __future__ import annotations

import numpy as np

from .classical import JointTable
from .linalg import CompositeSpace, Projector, StateVector, tensor_state
from .quantum import EntangledPairSpec, EventPair

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, index: int) -> int:
    return splitmix64((master + (index + 1) * _GOLDEN) & _MASK64)


def trial_rng(master: int, index: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed(master, index))


def random_amplitudes(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    return StateVector.normalized(random_amplitudes(rng, dim))


def random_projector(rng: np.random.Generator, dim: int, rank: int | None = None) -> Projector:
    """Projector onto the span of ``rank`` Gaussian vectors; rank uniform in ``1..dim-1`` by default."""
    if rank is None:
        rank = int(rng.integers(1, dim)) if dim > 1 else 1
    return Projector.from_span([random_amplitudes(rng, dim) for _ in range(rank)])


def random_event_pair(rng: np.random.Generator, space: CompositeSpace) -> EventPair:
    return EventPair(random_projector(rng, space.d1), random_projector(rng, space.d2), space)


def random_product_state(rng: np.random.Generator, space: CompositeSpace) -> StateVector:
    return tensor_state(random_state(rng, space.d1), random_state(rng, space.d2), space)


def random_entangled_pair(rng: np.random.Generator, dim: int) -> EntangledPairSpec:
    """Orthonormal ψ, φ and weights with ``|a|²`` uniform on ``(0.05, 0.95)``."""
    psi, phi = (StateVector(c) for c in _orthonormal_pair(rng, dim))
    weight = rng.uniform(0.05, 0.95)
    pa, pb = rng.uniform(0, 2 * np.pi, size=2)
    return EntangledPairSpec(np.sqrt(weight) * np.exp(1j * pa), np.sqrt(1 - weight) * np.exp(1j * pb), psi, phi)


def _orthonormal_pair(rng, dim):
    u = random_amplitudes(rng, dim)
    u /= np.linalg.norm(u)
    w = random_amplitudes(rng, dim)
    w -= np.vdot(u, w) * u
    w -= np.vdot(u, w) * u
    return u, w / np.linalg.norm(w)


def random_table(rng: np.random.Generator, rows: int, cols: int, sparsity: float = 0.0) -> JointTable:
    """Dirichlet-distributed table; each cell is zeroed with probability ``sparsity`` (one cell always survives)."""
    mass = rng.dirichlet(np.ones(rows * cols))
    if sparsity > 0:
        keep = rng.random(rows * cols) >= sparsity
        keep[rng.integers(rows * cols)] = True
        mass = mass * keep
        mass /= mass.sum()
    return JointTable(mass.reshape(rows, cols))


def random_independent_table(rng: np.random.Generator, rows: int, cols: int) -> JointTable:
    return JointTable.product(rng.dirichlet(np.ones(rows)), rng.dirichlet(np.ones(cols)))
