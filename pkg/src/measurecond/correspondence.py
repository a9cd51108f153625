"""
Quantum post-measurement prediction versus classical conditioning.

An event pair ``(P, Q)`` on the two factors induces a 2x2 classical table
over ``{P, P^c} × {Q, Q^c}``. Observing ``Q`` and updating the state gives
the same predictions for ``P`` as conditioning that table on its ``Q``
column; this module computes both routes and reports how far apart they
are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import classical, quantum
from .classical import JointTable
from .constants import TAU_INDEP
from .errors import DimensionMismatch, ZeroProbabilityError
from .linalg import StateVector, complement, embed_first, embed_second, schmidt_rank


def induce_table(eta: StateVector, ev: quantum.EventPair) -> JointTable:
    """Rows ``(P, P^c)``, columns ``(Q, Q^c)``, cells the four joint probabilities."""
    return _induce(eta, *_embedded_events(ev))


def _embedded_events(ev: quantum.EventPair):
    # index 0 is the event itself, index 1 its complement
    first = [embed_first(ev.p, ev.space), embed_first(complement(ev.p), ev.space)]
    second = [embed_second(ev.q, ev.space), embed_second(complement(ev.q), ev.space)]
    return first, second


def _induce(eta, first, second) -> JointTable:
    if eta.dim != first[0].dim:
        raise DimensionMismatch(f"state dim {eta.dim} vs composite dim {first[0].dim}")
    mass = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            mass[i, j] = quantum.embedded_joint_probability(eta, first[i], second[j])
    return JointTable(mass)


@dataclass
class CorrespondenceReport:
    """Both routes' conditional predictions for every non-null conditioning event.

    Keys of the two conditional dicts are ``(axis, given, target)``: axis ``"Y"``
    conditions on ``Q`` (given 0) or ``Q^c`` (given 1) and predicts ``P``/``P^c``;
    axis ``"X"`` is the mirror image.
    """

    induced_table: JointTable
    quantum_conditionals: dict[tuple[str, int, int], float]
    classical_conditionals: dict[tuple[str, int, int], float]
    max_discrepancy: float
    entangled: bool
    independent: bool
    independence_deviation: float
    skipped_cells: list[tuple[str, int]] = field(default_factory=list)

    def to_json(self, trial: int | None = None, dims: tuple[int, int] | None = None) -> dict:
        out = {}
        if trial is not None:
            out["trial"] = trial
        if dims is not None:
            out["dims"] = list(dims)
        out.update(
            entangled=self.entangled,
            independent=self.independent,
            max_discrepancy=self.max_discrepancy,
            skipped_cells=[[axis, idx] for axis, idx in self.skipped_cells],
        )
        return out

    def to_dict(self) -> dict:
        """Full record including both routes' numbers."""
        def flat(d):
            return {f"{axis}={given}->{target}": v for (axis, given, target), v in sorted(d.items())}

        out = self.to_json()
        out["independence_deviation"] = self.independence_deviation
        out["induced_table"] = self.induced_table.to_dict()
        out["quantum_conditionals"] = flat(self.quantum_conditionals)
        out["classical_conditionals"] = flat(self.classical_conditionals)
        return out


def verify_correspondence(eta: StateVector, ev: quantum.EventPair) -> CorrespondenceReport:
    first, second = _embedded_events(ev)
    table = _induce(eta, first, second)

    q_cond: dict[tuple[str, int, int], float] = {}
    c_cond: dict[tuple[str, int, int], float] = {}
    skipped: list[tuple[str, int]] = []
    for axis, observed, predicted in (("Y", second, first), ("X", first, second)):
        for given in range(2):
            try:
                cls = classical.condition(table, axis, given)
                updated = quantum.post_measurement_state(eta, observed[given])
            except ZeroProbabilityError:
                skipped.append((axis, given))
                continue
            for target in range(2):
                q_cond[(axis, given, target)] = quantum.event_probability(updated, predicted[target])
                c_cond[(axis, given, target)] = cls[target]

    disc = max((abs(q_cond[k] - c_cond[k]) for k in q_cond), default=0.0)
    indep = classical.is_independent(table)
    return CorrespondenceReport(
        induced_table=table,
        quantum_conditionals=q_cond,
        classical_conditionals=c_cond,
        max_discrepancy=float(disc),
        entangled=schmidt_rank(eta, ev.space) > 1,
        independent=indep.independent,
        independence_deviation=indep.max_deviation,
        skipped_cells=skipped,
    )


# Eigenvalues of opposite sign in equal-probability pairs make A and A² uncorrelated.
DEMO_EIGENVALUES = (2.0, -2.0, 1.0, -1.0)


@dataclass
class UncorrelatedDependentDemo:
    table: JointTable
    quantum_covariance: float
    classical_covariance: float
    independent: bool
    max_deviation: float
    f_marginal: dict[float, float]

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.table.xvals or ()),
            "f_values": list(self.table.yvals or ()),
            "table": self.table.to_dict(),
            "quantum_covariance": self.quantum_covariance,
            "classical_covariance": self.classical_covariance,
            "independent": self.independent,
            "max_deviation": self.max_deviation,
            "f_marginal": {str(k): v for k, v in self.f_marginal.items()},
        }


def observable_report(psi: StateVector, a: quantum.ObservableSpec, f) -> UncorrelatedDependentDemo:
    """Covariance of ``A`` and ``f(A)`` by the operator route and by the outcome-table route."""
    table = quantum.spectral_joint_distribution(psi, a, f)
    indep = classical.is_independent(table, TAU_INDEP)
    f_marg = classical.marginal(table, "Y")
    return UncorrelatedDependentDemo(
        table=table,
        quantum_covariance=quantum.quantum_covariance(psi, a, f),
        classical_covariance=classical.covariance(table),
        independent=indep.independent,
        max_deviation=indep.max_deviation,
        f_marginal={y: float(m) for y, m in zip(table.yvals, f_marg)},
    )


def uncorrelated_dependent_demo() -> UncorrelatedDependentDemo:
    """A = diag(2, −2, 1, −1), f(x) = x², uniform ψ: zero covariance, yet dependent."""
    a = quantum.ObservableSpec.diagonal(DEMO_EIGENVALUES)
    psi = StateVector(np.full(4, 0.5, dtype=np.complex128))
    return observable_report(psi, a, lambda x: x * x)

