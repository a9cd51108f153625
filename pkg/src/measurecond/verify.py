"""
Seeded randomized verification suites.

Every trial draws one random composite state, one random event pair, one
random product state and one random classical table, then records the
largest residual of each identity checked on them. A trial passes when every
residual is at or below the configured tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import classical, correspondence, quantum
from .constants import EPS_ZERO
from .errors import ContractViolation
from .linalg import CompositeSpace, Projector, StateVector, embed_first, embed_second, complement
from .sampling import random_amplitudes, random_event_pair, random_product_state, random_state, random_table, trial_rng

log = logging.getLogger(__name__)

SUITES = (
    "correspondence",
    "marginal_consistency",
    "conditional_normalization",
    "product_factorization",
    "sequential_symmetry",
    "sequential_rank1",
    "classical_chain_rule",
)


@dataclass(frozen=True)
class VerificationConfig:
    seed: int = 1
    trials: int = 1000
    dims: tuple[tuple[int, int], ...] = ((2, 2), (3, 3), (4, 4))
    tolerance: float = 1e-11

    def __post_init__(self):
        if self.trials < 1:
            raise ContractViolation(f"trials must be >= 1, got {self.trials}")
        if not self.dims:
            raise ContractViolation("dims must be non-empty")
        for d1, d2 in self.dims:
            if d1 < 2 or d2 < 2:
                raise ContractViolation(f"each factor needs dim >= 2 for nontrivial events, got {d1}x{d2}")
        if not self.tolerance > 0:
            raise ContractViolation(f"tolerance must be positive, got {self.tolerance}")
        if not 0 <= self.seed < 2**64:
            raise ContractViolation("seed must fit in 64 bits")


@dataclass
class TrialResult:
    trial: int
    dims: tuple[int, int]
    report: correspondence.CorrespondenceReport
    residuals: dict[str, float]
    passed: bool

    def to_json(self) -> dict:
        out = self.report.to_json(trial=self.trial, dims=self.dims)
        out["residuals"] = self.residuals
        out["passed"] = self.passed
        return out


def marginal_residuals(eta, ev) -> tuple[float, float]:
    """Marginal consistency and conditional normalization residuals on one (η, P, Q)."""
    space = ev.space
    joints = {
        (i, j): quantum.joint_probability(eta, ev.with_complements(first=bool(i), second=bool(j)))
        for i in range(2)
        for j in range(2)
    }
    m_p = quantum.marginal_probability(eta, ev.p, "first", space)
    m_q = quantum.marginal_probability(eta, ev.q, "second", space)
    marg = max(
        abs(joints[0, 0] + joints[0, 1] - m_p),
        abs(joints[0, 0] + joints[1, 0] - m_q),
        abs(sum(joints.values()) - 1.0),
    )
    norm = 0.0
    if m_q > EPS_ZERO:
        total = quantum.conditional_probability(eta, ev) + quantum.conditional_probability(
            eta, ev.with_complements(first=True)
        )
        norm = abs(total - 1.0)
    return marg, norm


def product_residual(rng, ev) -> tuple[float, bool]:
    space = ev.space
    eta = random_product_state(rng, space)
    worst = 0.0
    for i in range(2):
        for j in range(2):
            sub = ev.with_complements(first=bool(i), second=bool(j))
            joint = quantum.joint_probability(eta, sub)
            m_p = quantum.marginal_probability(eta, sub.p, "first", space)
            m_q = quantum.marginal_probability(eta, sub.q, "second", space)
            worst = max(worst, abs(joint - m_p * m_q))
    m_p = quantum.marginal_probability(eta, ev.p, "first", space)
    for q in (ev.q, complement(ev.q)):
        if quantum.marginal_probability(eta, q, "second", space) > EPS_ZERO:
            updated = quantum.conditioned_state(eta, q, space)
            worst = max(worst, abs(quantum.event_probability(updated, embed_first(ev.p, space)) - m_p))
    independent = classical.is_independent(correspondence.induce_table(eta, ev)).independent
    return worst, independent


def sequential_residual(eta, ev) -> float:
    p, q = embed_first(ev.p, ev.space), embed_second(ev.q, ev.space)
    sym = quantum.sequential_symmetry(eta, p, q)
    joint = quantum.embedded_joint_probability(eta, p, q)
    return max(abs(sym.lhs * sym.prob_q - joint), abs(sym.rhs * sym.prob_p - joint), sym.form_discrepancy)


def rank1_residual(rng, dim: int) -> float:
    """Non-commuting rank-1 events: both quotients equal |⟨u,v⟩|² and match the state forms."""
    u = StateVector.normalized(random_amplitudes(rng, dim))
    v = StateVector.normalized(random_amplitudes(rng, dim))
    eta = random_state(rng, dim)
    sym = quantum.sequential_symmetry(eta, Projector.rank1(u), Projector.rank1(v))
    overlap = abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2
    return max(abs(sym.lhs - overlap), abs(sym.rhs - overlap), sym.form_discrepancy)


def classical_residual(t: classical.JointTable) -> float:
    """Chain rule and law of total probability on one table."""
    my = classical.marginal(t, "Y")
    mx = classical.marginal(t, "X")
    worst = 0.0
    rebuilt = np.zeros(t.rows)
    for j in range(t.cols):
        if my[j] <= EPS_ZERO:
            continue
        cond = np.array(classical.condition(t, "Y", j).probabilities)
        worst = max(worst, float(np.max(np.abs(cond * my[j] - t.mass[:, j]))))
        rebuilt += cond * my[j]
    return max(worst, float(np.max(np.abs(rebuilt - mx))))


def run_trial(config: VerificationConfig, dims: tuple[int, int], index: int, trial: int) -> TrialResult:
    rng = trial_rng(config.seed, index)
    space = CompositeSpace(*dims)
    eta = random_state(rng, space.dim)
    ev = random_event_pair(rng, space)

    report = correspondence.verify_correspondence(eta, ev)
    marg, norm = marginal_residuals(eta, ev)
    prod, prod_indep = product_residual(rng, ev)
    residuals = {
        "correspondence": report.max_discrepancy,
        "marginal_consistency": marg,
        "conditional_normalization": norm,
        "product_factorization": prod,
        "sequential_symmetry": sequential_residual(eta, ev),
        "sequential_rank1": rank1_residual(rng, space.dim),
        "classical_chain_rule": classical_residual(random_table(rng, *dims, sparsity=0.2)),
    }
    passed = prod_indep and all(r <= config.tolerance for r in residuals.values())
    return TrialResult(trial, dims, report, {k: float(v) for k, v in residuals.items()}, passed)


def iter_trials(config: VerificationConfig) -> Iterator[TrialResult]:
    """Trials in order; trial ``t`` of the ``k``-th dims pair uses stream index ``k * trials + t``."""
    for k, dims in enumerate(config.dims):
        for t in range(config.trials):
            yield run_trial(config, tuple(dims), k * config.trials + t, t)


@dataclass
class Summary:
    trials: int = 0
    failures: int = 0
    max_residuals: dict[str, float] = field(default_factory=lambda: dict.fromkeys(SUITES, 0.0))
    demo: dict = field(default_factory=dict)
    demo_passed: bool = True

    def add(self, result: TrialResult) -> None:
        self.trials += 1
        self.failures += not result.passed
        for name, value in result.residuals.items():
            self.max_residuals[name] = max(self.max_residuals[name], value)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.demo_passed

    def to_json(self) -> dict:
        return {
            "summary": True,
            "trials": self.trials,
            "failures": self.failures,
            "passed": self.passed,
            "max_residuals": self.max_residuals,
            "covariance_demo": self.demo,
        }


def covariance_demo_check(tolerance: float) -> tuple[dict, bool]:
    demo = correspondence.uncorrelated_dependent_demo()
    ok = (
        abs(demo.quantum_covariance) <= tolerance
        and abs(demo.classical_covariance) <= tolerance
        and not demo.independent
        and abs(demo.max_deviation - 0.125) <= tolerance
    )
    return {
        "quantum_covariance": demo.quantum_covariance,
        "classical_covariance": demo.classical_covariance,
        "independent": demo.independent,
        "max_deviation": demo.max_deviation,
    }, ok


def run_verification(config: VerificationConfig, sink=None) -> Summary:
    """Run every trial, passing each result to ``sink`` as it completes."""
    summary = Summary()
    for result in iter_trials(config):
        summary.add(result)
        if not result.passed:
            log.debug("trial %d at %s failed: %s", result.trial, result.dims, result.residuals)
        if sink is not None:
            sink(result)
    summary.demo, summary.demo_passed = covariance_demo_check(config.tolerance)
    return summary
