import math

import numpy as np
import pytest

from genmeas.continuous_readout import ReadoutConfig
from genmeas.decomposition import (
    compose_branch,
    completeness_deviation,
    execute_protocol,
    kraus_set,
    protocol_from_json,
    protocol_to_json,
    random_kraus_set,
    random_unitary,
    reduce,
    remainder,
    sample_protocol,
    svd_decompose_pair,
    validate_kraus_set,
)
from genmeas.errors import NormExceeded, NotComplete, UnknownLeaf
from genmeas.linalg import adjoint, is_unitary, phase_distance
from genmeas.partial_projection import PartialProjParams, dops, pure_state

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def trine_set():
    ops = []
    for k in range(3):
        theta = 2 * math.pi * k / 3
        # Bloch vector in the X-Z plane at angle theta from +Z.
        psi = np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=complex)
        ops.append(math.sqrt(2.0 / 3.0) * np.outer(psi, psi.conj()))
    return kraus_set(ops, labels=("a", "b", "c"))


def test_validate_accepts_identity():
    validate_kraus_set(kraus_set([np.eye(2)]))


def test_validate_accepts_projective():
    validate_kraus_set(kraus_set([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))


def test_validate_rejects_incomplete():
    with pytest.raises(NotComplete) as exc:
        validate_kraus_set(kraus_set([0.9 * np.eye(2)]))
    assert exc.value.deviation > 0.1


def test_trine_is_complete():
    assert completeness_deviation(trine_set().ops) < 1e-15


def test_svd_decompose_standard_form():
    params = PartialProjParams(0.8, 0.6)
    step = svd_decompose_pair(*dops(params))
    assert np.allclose(step.pre_unitary, np.eye(2), atol=1e-12)
    assert np.allclose(step.post_unitary_0, np.eye(2), atol=1e-12)
    assert np.allclose(step.post_unitary_1, np.eye(2), atol=1e-12)
    assert abs(step.params.p - 0.8) < 1e-12
    assert abs(step.params.q - 0.6) < 1e-12


def test_svd_decompose_rotated_pair():
    d0, d1 = dops(PartialProjParams(0.8, 0.6))
    step = svd_decompose_pair(HADAMARD @ d0, HADAMARD @ d1)
    assert np.linalg.norm(step.branch_operator(0) - HADAMARD @ d0) < 1e-10
    assert np.linalg.norm(step.branch_operator(1) - HADAMARD @ d1) < 1e-10


def test_svd_decompose_random_pairs():
    rng = np.random.default_rng(51)
    for _ in range(1000):
        n0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        w = np.linalg.eigvalsh(adjoint(n0) @ n0)
        n0 = n0 / math.sqrt(w[-1] / rng.uniform(0.3, 0.999))
        n1 = random_unitary(rng) @ remainder(n0)
        step = svd_decompose_pair(n0, n1)
        assert step.params.p + step.params.q >= 1.0 - 1e-12
        assert np.linalg.norm(step.branch_operator(0) - n0) < 1e-10
        assert np.linalg.norm(step.branch_operator(1) - n1) < 1e-10
        for u in (step.pre_unitary, step.post_unitary_0, step.post_unitary_1):
            assert is_unitary(u)


def test_remainder_cases():
    assert np.allclose(remainder(np.zeros((2, 2))), np.eye(2))
    d0, d1 = dops(PartialProjParams(0.8, 0.6))
    assert np.linalg.norm(remainder(d0) - d1) < 1e-12
    assert np.linalg.norm(remainder(HADAMARD)) < 1e-7


def test_remainder_rejects_expansion():
    with pytest.raises(NormExceeded):
        remainder(1.1 * np.eye(2))


def test_reduce_projective():
    proto = reduce(kraus_set([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    assert len(proto.steps) == 1
    assert abs(proto.steps[0].params.p - 1.0) < 1e-9
    assert abs(proto.steps[0].params.q - 1.0) < 1e-9


def test_reduce_two_outcomes_matches_pair_decomposition():
    rng = np.random.default_rng(52)
    for _ in range(200):
        s = random_kraus_set(2, rng)
        proto = reduce(s)
        assert len(proto.steps) == 1
        assert phase_distance(s.ops[0], compose_branch(proto, s.labels[0])) < 1e-9
        assert phase_distance(s.ops[1], compose_branch(proto, s.labels[1])) < 1e-9


def test_reduce_trine():
    proto = reduce(trine_set())
    assert len(proto.steps) == 2
    for label, m in zip(("a", "b", "c"), trine_set().ops):
        assert phase_distance(m, compose_branch(proto, label)) < 1e-9


def test_compose_branch_unknown_leaf():
    with pytest.raises(UnknownLeaf):
        compose_branch(reduce(trine_set()), "nope")


def test_protocol_completeness():
    rng = np.random.default_rng(53)
    for _ in range(100):
        s = random_kraus_set(int(rng.integers(2, 7)), rng)
        proto = reduce(s)
        total = sum(
            adjoint(compose_branch(proto, lab)) @ compose_branch(proto, lab)
            for lab in proto.leaf_labels
        )
        assert np.linalg.norm(total - np.eye(2)) < 1e-9


def test_cancel_u1_preserves_branches():
    rng = np.random.default_rng(54)
    for _ in range(100):
        s = random_kraus_set(int(rng.integers(2, 6)), rng)
        plain = reduce(s)
        canceled = reduce(s, cancel_u1=True)
        for step in canceled.steps:
            assert np.allclose(step.post_unitary_1, np.eye(2), atol=1e-12)
        for lab, m in zip(s.labels, s.ops):
            assert phase_distance(m, compose_branch(canceled, lab)) < 1e-9
            assert (
                phase_distance(compose_branch(plain, lab), compose_branch(canceled, lab))
                < 1e-9
            )


def test_permutation_sensitivity():
    s = trine_set()
    a = reduce(s, order=(0, 1, 2))
    b = reduce(s, order=(2, 0, 1))
    # Different protocols, identical leaf operators up to phase.
    assert phase_distance(a.steps[0].pre_unitary, b.steps[0].pre_unitary) > 1e-6
    for lab, m in zip(s.labels, s.ops):
        assert phase_distance(m, compose_branch(b, lab)) < 1e-9


def test_execute_projective_deterministic():
    proto = reduce(kraus_set([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    ket0 = pure_state(np.array([1.0, 0.0]))
    for seed in range(20):
        label, rho = execute_protocol(proto, ket0, seed)
        assert label == "0"
        assert np.allclose(rho, ket0, atol=1e-12)


def test_trine_uniform_histogram():
    proto = reduce(trine_set())
    mixed = np.eye(2, dtype=complex) / 2
    counts, _ = sample_protocol(proto, mixed, 6000, seed=99)
    sigma = math.sqrt((1 / 3) * (2 / 3) / 6000)
    for label in ("a", "b", "c"):
        assert abs(counts[label] / 6000 - 1 / 3) < 4 * sigma


def test_leaf_probabilities_match_born_rule():
    rng = np.random.default_rng(55)
    s = random_kraus_set(3, rng)
    proto = reduce(s)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    psi /= np.linalg.norm(psi)
    rho = pure_state(psi)
    shots = 20_000
    counts, _ = sample_protocol(proto, rho, shots, seed=7)
    for lab, m in zip(s.labels, s.ops):
        expect = float(np.real(psi.conj() @ adjoint(m) @ m @ psi))
        sigma = math.sqrt(max(expect * (1 - expect), 1e-9) / shots)
        assert abs(counts[lab] / shots - expect) < 4 * sigma + 1e-3


def test_backend_agreement():
    proto = reduce(trine_set())
    mixed = np.eye(2, dtype=complex) / 2
    shots = 4000
    base, _ = sample_protocol(proto, mixed, shots, seed=3, backend="exact")
    for backend in ("ancilla-direct", "ancilla-cphase", "ancilla-fixed_cz"):
        counts, _ = sample_protocol(proto, mixed, shots, seed=3, backend=backend)
        for lab in proto.leaf_labels:
            pa, pb = base[lab] / shots, counts[lab] / shots
            sigma = math.sqrt(max(pa * (1 - pa), 1e-9) / shots)
            assert abs(pa - pb) < 6 * sigma + 1e-2


def test_continuous_backend_runs():
    # The continuous backend needs finite thresholds, so every step must
    # have p, q < 1; a weak two-outcome measurement qualifies.
    d0, d1 = dops(PartialProjParams(0.8, 0.6))
    proto = reduce(kraus_set([HADAMARD @ d0, HADAMARD @ d1]))
    cfg = ReadoutConfig(tau_min=1.0, seed=17)
    mixed = np.eye(2, dtype=complex) / 2
    counts, _ = sample_protocol(
        proto, mixed, 400, seed=17, backend="continuous", readout_config=cfg
    )
    assert sum(counts.values()) == 400
    f0 = counts["0"] / 400
    assert abs(f0 - 0.6) < 4 * math.sqrt(0.6 * 0.4 / 400)


def test_continuous_backend_rejects_projective_step():
    from genmeas.errors import NonFiniteThreshold

    proto = reduce(trine_set())
    cfg = ReadoutConfig(tau_min=1.0, seed=18)
    mixed = np.eye(2, dtype=complex) / 2
    with pytest.raises(NonFiniteThreshold):
        sample_protocol(
            proto, mixed, 10, seed=18, backend="continuous", readout_config=cfg
        )


def test_round_trip_random_sets():
    rng = np.random.default_rng(56)
    for _ in range(300):
        n = int(rng.integers(2, 7))
        s = random_kraus_set(n, rng)
        proto = reduce(s)
        for lab, m in zip(s.labels, s.ops):
            assert phase_distance(m, compose_branch(proto, lab)) < 1e-9


def test_protocol_json_round_trip():
    proto = reduce(trine_set())
    back = protocol_from_json(protocol_to_json(proto))
    assert back.leaf_labels == proto.leaf_labels
    for lab in proto.leaf_labels:
        assert (
            np.linalg.norm(compose_branch(back, lab) - compose_branch(proto, lab))
            < 1e-12
        )
