import numpy as np
import pytest
from hypothesis import given, strategies as st

from measurecond import quantum
from measurecond.classical import is_independent
from measurecond.errors import ContractViolation, ZeroProbabilityError
from measurecond.linalg import (
    CompositeSpace,
    Projector,
    StateVector,
    commutator_norm,
    complement,
    embed_first,
    embed_second,
    same_ray,
    schmidt_rank,
    tensor_state,
)
from measurecond.quantum import EntangledPairSpec, EventPair, ObservableSpec
from measurecond.sampling import (
    random_entangled_pair,
    random_event_pair,
    random_product_state,
    random_projector,
    random_state,
)

from helpers import SQRT_HALF, e, ket, proj

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 8)


def brute_joint(eta, p, q, space):
    """Σ conj(η_ij) P_ik Q_jl η_kl by explicit index contraction (no Kronecker products)."""
    c = eta.amplitudes.reshape(space.d1, space.d2)
    return np.einsum("ij,ik,jl,kl->", c.conj(), p.matrix, q.matrix, c).real


# --- single-system measurement ------------------------------------------------------

def test_event_probability_examples():
    assert quantum.event_probability(e(2, 0), proj(e(2, 0))) == 1.0
    assert quantum.event_probability(e(2, 0), proj(e(2, 1))) == 0.0
    assert quantum.event_probability(ket(SQRT_HALF, SQRT_HALF), proj(e(2, 0))) == pytest.approx(0.5, abs=1e-15)


def test_event_probability_rejects_non_hermitian_input():
    from measurecond.errors import NonHermitianError
    from measurecond.linalg import Operator

    with pytest.raises(NonHermitianError):
        quantum.event_probability(ket(SQRT_HALF, SQRT_HALF), Operator(np.array([[0, 1j], [0, 0]])))


def test_post_measurement_state_examples():
    got = quantum.post_measurement_state(ket(SQRT_HALF, SQRT_HALF), proj(e(2, 0)))
    assert same_ray(got, e(2, 0))
    assert same_ray(quantum.post_measurement_state(e(2, 0), Projector.identity(2)), e(2, 0))
    with pytest.raises(ZeroProbabilityError):
        quantum.post_measurement_state(e(2, 0), proj(e(2, 1)))


@given(seeds, dims)
def test_post_measurement_state_is_fixed_by_the_event(seed, dim):
    rng = np.random.default_rng(seed)
    psi, p = random_state(rng, dim), random_projector(rng, dim)
    after = quantum.post_measurement_state(psi, p)
    assert abs(after.norm() - 1) <= 1e-12
    assert np.max(np.abs(p.apply(after) - after.amplitudes)) <= 1e-10
    assert quantum.event_probability(after, p) == pytest.approx(1.0, abs=1e-12)


# --- entangled pair construction -------------------------------------------------------

def test_build_entangled_state_bell(space22):
    spec = EntangledPairSpec(SQRT_HALF, SQRT_HALF, e(2, 0), e(2, 1))
    eta = quantum.build_entangled_state(spec, space22)
    np.testing.assert_allclose(eta.amplitudes, [0, SQRT_HALF, SQRT_HALF, 0], atol=1e-15)
    assert schmidt_rank(eta, space22) == 2


@pytest.mark.parametrize(
    "a, b, psi, phi",
    [
        (1.0, 0.0, e(2, 0), e(2, 1)),  # |a|² < 1 violated
        (SQRT_HALF, SQRT_HALF, e(2, 0), e(2, 0)),  # not orthogonal
        (0.5, 0.5, e(2, 0), e(2, 1)),  # not normalized
    ],
)
def test_entangled_pair_spec_rejects_invalid(a, b, psi, phi):
    with pytest.raises(ContractViolation):
        EntangledPairSpec(a, b, psi, phi)


@given(seeds, st.integers(2, 6))
def test_random_entangled_pairs_have_rank_two(seed, dim):
    spec = random_entangled_pair(np.random.default_rng(seed), dim)
    space = CompositeSpace(dim, dim)
    eta = quantum.build_entangled_state(spec, space)
    assert abs(eta.norm() - 1) <= 1e-10
    assert schmidt_rank(eta, space) == 2


# --- joint / marginal / conditional ----------------------------------------------------------

def test_joint_probability_examples(space22, bell):
    p0, p1 = proj(e(2, 0)), proj(e(2, 1))
    assert quantum.joint_probability(e(4, 0), EventPair(p0, p0, space22)) == 1.0
    assert quantum.joint_probability(bell, EventPair(p0, p0, space22)) == pytest.approx(0.0, abs=1e-15)
    assert quantum.joint_probability(bell, EventPair(p0, p1, space22)) == pytest.approx(0.5, abs=1e-15)


@given(seeds, dims, dims)
def test_joint_probability_matches_index_contraction(seed, d1, d2):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    eta, ev = random_state(rng, space.dim), random_event_pair(rng, space)
    assert abs(quantum.joint_probability(eta, ev) - brute_joint(eta, ev.p, ev.q, space)) <= 1e-13


@given(seeds, st.integers(2, 6))
def test_expanded_joint_formula_matches_direct(seed, dim):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(dim, dim)
    spec = random_entangled_pair(rng, dim)
    eta = quantum.build_entangled_state(spec, space)
    ev = random_event_pair(rng, space)
    for i in range(2):
        for j in range(2):
            sub = ev.with_complements(first=bool(i), second=bool(j))
            assert abs(quantum.expanded_joint_probability(spec, sub.p, sub.q) - quantum.joint_probability(eta, sub)) <= 1e-12


def test_mispaired_cross_terms_are_not_the_joint_probability():
    """Pairing ⟨φ,Pψ⟩⟨φ,Qψ⟩ with both āb and ab̄ gives a different (generally complex) value."""
    rng = np.random.default_rng(7)
    space = CompositeSpace(3, 3)
    spec = random_entangled_pair(rng, 3)
    ev = random_event_pair(rng, space)
    psi, phi, a, b = spec.psi.amplitudes, spec.phi.amplitudes, spec.a, spec.b
    P, Q = ev.p.matrix, ev.q.matrix
    mispaired = (
        abs(a) ** 2 * np.vdot(psi, P @ psi) * np.vdot(phi, Q @ phi)
        + (np.conj(a) * b + a * np.conj(b)) * np.vdot(phi, P @ psi) * np.vdot(phi, Q @ psi)
        + abs(b) ** 2 * np.vdot(phi, P @ phi) * np.vdot(psi, Q @ psi)
    )
    direct = quantum.joint_probability(quantum.build_entangled_state(spec, space), ev)
    assert abs(mispaired - direct) > 1e-3


def test_marginal_probability_examples(space22, bell):
    p0 = proj(e(2, 0))
    assert quantum.marginal_probability(bell, p0, "first", space22) == pytest.approx(0.5, abs=1e-15)
    assert quantum.marginal_probability(bell, Projector.identity(2), "first", space22) == pytest.approx(1.0, abs=1e-15)
    assert quantum.marginal_probability(bell, Projector.identity(2), "second", space22) == pytest.approx(1.0, abs=1e-15)
    prod = tensor_state(e(2, 0), e(2, 1), space22)
    assert quantum.marginal_probability(prod, proj(e(2, 1)), "second", space22) == 1.0
    with pytest.raises(ContractViolation):
        quantum.marginal_probability(bell, p0, "third", space22)


@given(seeds, st.integers(2, 6))
def test_marginals_match_weighted_closed_form(seed, dim):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(dim, dim)
    spec = random_entangled_pair(rng, dim)
    eta = quantum.build_entangled_state(spec, space)
    p, q = random_projector(rng, dim), random_projector(rng, dim)
    assert abs(quantum.marginal_probability(eta, p, "first", space) - quantum.expanded_marginal(spec, p, "first")) <= 1e-12
    assert abs(quantum.marginal_probability(eta, q, "second", space) - quantum.expanded_marginal(spec, q, "second")) <= 1e-12


@given(seeds, dims, dims)
def test_marginal_consistency(seed, d1, d2):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    eta, ev = random_state(rng, space.dim), random_event_pair(rng, space)
    j = {(i, k): quantum.joint_probability(eta, ev.with_complements(bool(i), bool(k))) for i in range(2) for k in range(2)}
    assert abs(j[0, 0] + j[0, 1] - quantum.marginal_probability(eta, ev.p, "first", space)) <= 1e-11
    assert abs(j[0, 0] + j[1, 0] - quantum.marginal_probability(eta, ev.q, "second", space)) <= 1e-11
    assert abs(sum(j.values()) - 1) <= 1e-11


def test_conditional_probability_examples(space22, bell):
    p0, p1 = proj(e(2, 0)), proj(e(2, 1))
    assert quantum.conditional_probability(bell, EventPair(p0, p0, space22)) == pytest.approx(0.0, abs=1e-15)
    assert quantum.conditional_probability(bell, EventPair(p0, p1, space22)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ZeroProbabilityError):
        quantum.conditional_probability(e(4, 0), EventPair(p0, p1, space22))


@given(seeds, dims, dims)
def test_conditional_normalization_and_product_case(seed, d1, d2):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    eta, ev = random_state(rng, space.dim), random_event_pair(rng, space)
    total = quantum.conditional_probability(eta, ev) + quantum.conditional_probability(eta, ev.with_complements(first=True))
    assert abs(total - 1) <= 1e-11
    prod = random_product_state(rng, space)
    assert abs(quantum.conditional_probability(prod, ev) - quantum.marginal_probability(prod, ev.p, "first", space)) <= 1e-11


# --- conditioned state and the central identity ----------------------------------------------

def test_conditioned_state_examples(space22, bell):
    got = quantum.conditioned_state(bell, proj(e(2, 1)), space22)
    assert same_ray(got, tensor_state(e(2, 0), e(2, 1), space22))
    u, v = ket(0.6, 0.8), e(2, 1)
    prod = tensor_state(u, v, space22)
    assert same_ray(quantum.conditioned_state(prod, proj(v), space22), prod)
    with pytest.raises(ZeroProbabilityError):
        quantum.conditioned_state(e(4, 0), proj(e(2, 1)), space22)


@given(seeds, st.integers(2, 6))
def test_conditioned_state_matches_closed_form(seed, dim):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(dim, dim)
    spec = random_entangled_pair(rng, dim)
    eta = quantum.build_entangled_state(spec, space)
    q = random_projector(rng, dim)
    got = quantum.conditioned_state(eta, q, space).amplitudes
    np.testing.assert_allclose(got, quantum.expanded_conditioned_state(spec, q, space), atol=1e-12)


@given(seeds, dims, dims, st.booleans())
def test_prediction_in_updated_state_equals_conditional(seed, d1, d2, product):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    ev = random_event_pair(rng, space)
    eta = random_product_state(rng, space) if product else random_state(rng, space.dim)
    updated = quantum.conditioned_state(eta, ev.q, space)
    for p in (ev.p, complement(ev.p)):
        via_state = quantum.event_probability(updated, embed_first(p, space))
        via_ratio = quantum.conditional_probability(eta, EventPair(p, ev.q, space))
        assert abs(via_state - via_ratio) <= 1e-11


@given(seeds, dims, dims)
def test_product_states_factorize(seed, d1, d2):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    eta, ev = random_product_state(rng, space), random_event_pair(rng, space)
    for i in range(2):
        for k in range(2):
            sub = ev.with_complements(bool(i), bool(k))
            joint = quantum.joint_probability(eta, sub)
            mp = quantum.marginal_probability(eta, sub.p, "first", space)
            mq = quantum.marginal_probability(eta, sub.q, "second", space)
            assert abs(joint - mp * mq) <= 1e-11
    updated = quantum.conditioned_state(eta, ev.q, space)
    assert abs(
        quantum.event_probability(updated, embed_first(ev.p, space)) - quantum.marginal_probability(eta, ev.p, "first", space)
    ) <= 1e-11


# --- sequential symmetry ----------------------------------------------------------------------

@given(seeds, dims, dims)
def test_sequential_symmetry_commuting(seed, d1, d2):
    rng = np.random.default_rng(seed)
    space = CompositeSpace(d1, d2)
    eta, ev = random_state(rng, space.dim), random_event_pair(rng, space)
    p, q = embed_first(ev.p, space), embed_second(ev.q, space)
    assert commutator_norm(p, q) <= 1e-10
    sym = quantum.sequential_symmetry(eta, p, q)
    joint = quantum.joint_probability(eta, ev)
    assert abs(sym.lhs * sym.prob_q - joint) <= 1e-11
    assert abs(sym.rhs * sym.prob_p - joint) <= 1e-11
    assert sym.form_discrepancy <= 1e-12
    # each side collapses to a conditional probability
    assert abs(sym.lhs - quantum.conditional_probability(eta, ev)) <= 1e-11


def test_sequential_symmetry_repeated_event(rng):
    eta = random_state(rng, 6)
    p = random_projector(rng, 6)
    sym = quantum.sequential_symmetry(eta, p, p)
    assert sym.lhs == pytest.approx(1.0, abs=1e-12)
    assert sym.rhs == pytest.approx(1.0, abs=1e-12)


@given(seeds)
def test_sequential_symmetry_rank1_closed_form(seed):
    rng = np.random.default_rng(seed)
    u, v, eta = random_state(rng, 4), random_state(rng, 4), random_state(rng, 4)
    P, Q = Projector.rank1(u), Projector.rank1(v)
    assert commutator_norm(P, Q) > 1e-6
    sym = quantum.sequential_symmetry(eta, P, Q)
    # Q P Q = |⟨u,v⟩|² Q for rank-1 projectors, so both quotients equal the overlap
    overlap = abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2
    x = eta.amplitudes
    matrix_lhs = np.vdot(x, Q.matrix @ P.matrix @ Q.matrix @ x).real / np.vdot(x, Q.matrix @ x).real
    assert abs(sym.lhs - overlap) <= 1e-11
    assert abs(sym.rhs - overlap) <= 1e-11
    assert abs(sym.lhs - matrix_lhs) <= 1e-11
    assert sym.form_discrepancy <= 1e-11


def test_sequential_symmetry_swapped_denominators_fail():
    """lhs·P(P) is not the joint probability when P(P) ≠ P(Q); only lhs·P(Q) is."""
    space = CompositeSpace(2, 2)
    eta = tensor_state(ket(0.6, 0.8), ket(SQRT_HALF, SQRT_HALF), space)
    p, q = embed_first(proj(e(2, 0)), space), embed_second(proj(e(2, 0)), space)
    sym = quantum.sequential_symmetry(eta, p, q)
    joint = quantum.embedded_joint_probability(eta, p, q)
    assert abs(sym.lhs * sym.prob_q - joint) <= 1e-15
    assert abs(sym.lhs * sym.prob_p - joint) > 0.01


def test_sequential_symmetry_null_event():
    with pytest.raises(ZeroProbabilityError):
        quantum.sequential_symmetry(e(2, 0), proj(e(2, 1)), Projector.identity(2))


# --- observables: covariance vs dependence -------------------------------------------------------

UNIFORM4 = StateVector(np.full(4, 0.5, dtype=complex))
DEMO = ObservableSpec.diagonal([2, -2, 1, -1])


def square(x):
    return x * x


def test_covariance_of_symmetric_spectrum_vanishes():
    # ⟨A⟩ = 0 and Σ a³ p = (8 − 8 + 1 − 1)/4 = 0
    assert quantum.quantum_covariance(UNIFORM4, DEMO, square) == pytest.approx(0.0, abs=1e-15)


def test_covariance_constant_function_and_eigenstate():
    assert quantum.quantum_covariance(UNIFORM4, DEMO, lambda x: 3.0) == pytest.approx(0.0, abs=1e-15)
    assert quantum.quantum_covariance(e(2, 0), ObservableSpec.diagonal([1, -1]), lambda x: x) == pytest.approx(0.0, abs=1e-15)


def test_covariance_accepts_value_table():
    table = {2.0: 4.0, -2.0: 4.0, 1.0: 1.0, -1.0: 1.0}
    assert quantum.quantum_covariance(UNIFORM4, DEMO, table) == quantum.quantum_covariance(UNIFORM4, DEMO, square)
    with pytest.raises(ContractViolation):
        quantum.quantum_covariance(UNIFORM4, DEMO, {2.0: 4.0})


def test_covariance_matches_classical_sum():
    # nonzero case: f(x) = x, ψ = (1, 1, 0, 0)/√2 → variance of A = 4
    psi = StateVector(np.array([SQRT_HALF, SQRT_HALF, 0, 0], dtype=complex))
    assert quantum.quantum_covariance(psi, DEMO, lambda x: x) == pytest.approx(4.0, abs=1e-14)


@given(seeds, st.integers(2, 6))
def test_covariance_symmetric_in_the_two_observables(seed, dim):
    rng = np.random.default_rng(seed)
    basis = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))[0]
    vals = rng.integers(-3, 4, size=dim).astype(float)
    obs = ObservableSpec(tuple(vals), tuple(StateVector(basis[:, j]) for j in range(dim)))
    psi = random_state(rng, dim)
    table = {a: float(np.sin(a)) for a in vals}
    a_op, f_op = obs.operator(), obs.function_operator(table)
    forward = quantum.operator_covariance(psi, f_op, a_op)
    backward = quantum.operator_covariance(psi, a_op, f_op)
    assert abs(forward - backward) <= 1e-11
    # oracle: classical covariance over outcome probabilities
    probs = obs.outcome_probabilities(psi)
    fv = np.array([table[a] for a in vals])
    expected = probs @ (vals * fv) - (probs @ vals) * (probs @ fv)
    assert abs(forward - expected) <= 1e-11


def test_spectral_joint_distribution_demo():
    t = quantum.spectral_joint_distribution(UNIFORM4, DEMO, square)
    assert t.xvals == (2.0, -2.0, 1.0, -1.0)
    assert t.yvals == (4.0, 1.0)
    np.testing.assert_allclose(t.mass, [[0.25, 0], [0.25, 0], [0, 0.25], [0, 0.25]], atol=1e-15)
    check = is_independent(t)
    assert not check.independent
    assert check.max_deviation == pytest.approx(0.125, abs=1e-15)


def test_spectral_joint_distribution_eigenstate_is_single_cell():
    t = quantum.spectral_joint_distribution(e(4, 2), DEMO, square)
    assert np.count_nonzero(t.mass > 1e-15) == 1
    assert t.mass[2, 1] == pytest.approx(1.0)


def test_spectral_joint_distribution_aggregates_degenerate_labels():
    obs = ObservableSpec.diagonal([1, 1, -1])
    psi = StateVector(np.full(3, 1 / np.sqrt(3), dtype=complex))
    t = quantum.spectral_joint_distribution(psi, obs, square)
    assert t.xvals == (1.0, -1.0)
    np.testing.assert_allclose(t.mass, [[2 / 3], [1 / 3]], atol=1e-15)


def test_observable_spec_rejects_non_orthonormal():
    with pytest.raises(ContractViolation):
        ObservableSpec((1.0, -1.0), (e(2, 0), e(2, 0)))
