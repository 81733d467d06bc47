"""Statevector engine: gates, expectation values, and sharding."""

import numpy as np
import pytest

import _dense
from chiropt import (ComputeError, DimensionError, apply_circuit,
                     apply_operator, expectation, expectation_sharded,
                     plan_shards)
from chiropt.simulator import (Circuit, Cnot, PauliX, Ry, Statevector,
                               default_workers, expectation_complex)
from conftest import random_operator, random_state


def ry_dense(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def gate_on(qubits_mat: dict[int, np.ndarray], n: int) -> np.ndarray:
    mats = [qubits_mat.get(q, np.eye(2, dtype=complex))
            for q in range(n - 1, -1, -1)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def cnot_dense(control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        row = col ^ (1 << target) if (col >> control) & 1 else col
        mat[row, col] = 1.0
    return mat


def test_basis_state_bit_layout():
    state = Statevector.basis_state(3, [0, 2])
    assert state.amplitudes[0b101] == 1.0
    assert state.norm() == 1.0


def test_basis_state_rejects_bad_qubit():
    with pytest.raises(DimensionError):
        Statevector.basis_state(3, [3])


def test_memory_ceiling_guard():
    with pytest.raises(ComputeError):
        Statevector.zero_state(15, max_qubits=14)
    state = Statevector.zero_state(15, max_qubits=15)
    assert state.n_qubits == 15


def test_ry_gate_matches_dense():
    rng = np.random.default_rng(41)
    theta = float(rng.uniform(-np.pi, np.pi))
    circ = Circuit(n_qubits=3, gates=[Ry(1, 0)], n_params=1)
    state = random_state(3, seed=42)
    got = apply_circuit(circ, [theta], state)
    want = gate_on({1: ry_dense(theta)}, 3) @ state.amplitudes
    assert np.abs(got.amplitudes - want).max() < 1e-12


@pytest.mark.parametrize("control,target", [(0, 1), (2, 0), (1, 2)])
def test_cnot_matches_dense(control, target):
    circ = Circuit(n_qubits=3, gates=[Cnot(control, target)], n_params=0)
    state = random_state(3, seed=43)
    got = apply_circuit(circ, [], state)
    want = cnot_dense(control, target, 3) @ state.amplitudes
    assert np.abs(got.amplitudes - want).max() == 0.0


def test_pauli_x_prep():
    circ = Circuit(n_qubits=4, gates=[PauliX(0), PauliX(2)], n_params=0)
    got = apply_circuit(circ, [], Statevector.zero_state(4))
    assert got.amplitudes[0b0101] == 1.0


def test_circuit_preserves_norm():
    rng = np.random.default_rng(44)
    gates = [PauliX(0), Ry(0, 0), Ry(1, 1), Cnot(0, 1), Ry(2, 2), Cnot(1, 2)]
    circ = Circuit(n_qubits=3, gates=gates, n_params=3)
    state = random_state(3, seed=45)
    out = apply_circuit(circ, rng.uniform(-3, 3, size=3), state)
    assert abs(out.norm() - 1.0) < 1e-12


def test_parameter_count_enforced():
    circ = Circuit(n_qubits=2, gates=[Ry(0, 0)], n_params=1)
    with pytest.raises(DimensionError):
        apply_circuit(circ, [0.1, 0.2], Statevector.zero_state(2))


def test_expectation_matches_dense():
    for seed in (50, 51, 52):
        op = random_operator(4, 12, seed=seed, real=True)
        herm = op + op.dagger()
        state = random_state(4, seed=seed + 100)
        got = expectation(herm, state)
        mat = _dense.operator_matrix(herm, 4)
        want = (state.amplitudes.conj() @ mat @ state.amplitudes).real
        assert abs(got - want) < 1e-12


def test_expectation_complex_matches_dense():
    op = random_operator(3, 8, seed=60, real=False)
    state = random_state(3, seed=61)
    got = expectation_complex(op, state)
    mat = _dense.operator_matrix(op, 3)
    want = state.amplitudes.conj() @ mat @ state.amplitudes
    assert abs(got - want) < 1e-12


def test_expectation_rejects_nonhermitian_result():
    op = random_operator(3, 8, seed=62, real=False)
    state = random_state(3, seed=63)
    with pytest.raises(ComputeError):
        expectation(op, state)


def test_apply_operator_matches_dense_and_linearity():
    op = random_operator(4, 10, seed=70, real=False)
    a = random_state(4, seed=71)
    b = random_state(4, seed=72)
    mat = _dense.operator_matrix(op, 4)
    got_a = apply_operator(op, a).amplitudes
    assert np.abs(got_a - mat @ a.amplitudes).max() < 1e-12
    summed = Statevector(4, 0.25 * a.amplitudes + 2.0 * b.amplitudes)
    got_sum = apply_operator(op, summed).amplitudes
    want_sum = 0.25 * got_a + 2.0 * apply_operator(op, b).amplitudes
    assert np.abs(got_sum - want_sum).max() < 1e-12


def test_register_mismatch_rejected():
    op = random_operator(3, 4, seed=80)
    state = random_state(4, seed=81)
    with pytest.raises(DimensionError):
        expectation(op + op.dagger(), state)


@pytest.mark.parametrize("strategy", ["weight-balanced", "round-robin"])
@pytest.mark.parametrize("k", [1, 2, 3, 4, 8])
def test_sharded_expectation_invariant(strategy, k):
    op = random_operator(6, 40, seed=90, real=True)
    herm = (op + op.dagger()).simplify()
    state = random_state(6, seed=91)
    base = expectation(herm, state)
    plan = plan_shards(herm, k, strategy=strategy)
    plan.validate_partition()
    assert plan.n_shards == k
    for workers in (1, 2, 3):
        got = expectation_sharded(herm, plan, state, workers=workers)
        assert abs(got - base) < 1e-12


def test_plan_covers_all_terms_once():
    op = random_operator(5, 23, seed=92, real=True)
    herm = (op + op.dagger()).simplify()
    plan = plan_shards(herm, 4)
    seen = sorted(i for shard in plan.assignment for i in shard)
    assert seen == list(range(herm.n_terms()))


def test_weight_balanced_plan_balances():
    op = random_operator(6, 60, seed=93, real=True)
    herm = (op + op.dagger()).simplify()
    from chiropt.simulator import canonical_terms

    terms = canonical_terms(herm)
    plan = plan_shards(herm, 4, strategy="weight-balanced")
    loads = [sum(abs(terms[i][2]) for i in shard) for shard in plan.assignment]
    assert max(loads) <= 2.0 * min(loads) + max(abs(t[2]) for t in terms)


def test_plan_rejects_bad_k_and_strategy():
    from chiropt import ConfigError

    op = random_operator(3, 5, seed=94, real=True)
    herm = (op + op.dagger()).simplify()
    with pytest.raises(ConfigError):
        plan_shards(herm, 0)
    with pytest.raises(ConfigError):
        plan_shards(herm, 2, strategy="alphabetical")
    # more shards than terms is legal, the excess shards stay empty
    plan = plan_shards(herm, herm.n_terms() + 3)
    plan.validate_partition()


def test_stale_plan_rejected():
    a = random_operator(4, 10, seed=95, real=True)
    herm_a = (a + a.dagger()).simplify()
    b = random_operator(4, 14, seed=96, real=True)
    herm_b = (b + b.dagger()).simplify()
    plan = plan_shards(herm_a, 2)
    state = random_state(4, seed=97)
    with pytest.raises(ComputeError):
        expectation_sharded(herm_b, plan, state)


def test_default_workers_env(monkeypatch):
    from chiropt import ConfigError

    monkeypatch.setenv("CHIROPT_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("CHIROPT_WORKERS", "not a number")
    with pytest.raises(ConfigError):
        default_workers()
    monkeypatch.delenv("CHIROPT_WORKERS")
    assert default_workers() >= 1
