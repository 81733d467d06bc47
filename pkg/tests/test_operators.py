"""Fermion-to-qubit mapping and operator algebra."""

import numpy as np
import pytest

import _dense
from chiropt import (DimensionError, FermionOperator, build_hamiltonian,
                     build_one_body_operator, commutator, expectation,
                     hf_occupied_modes, jordan_wigner, number_operator,
                     sz_operator)
from chiropt.operators import QubitOperator
from chiropt.simulator import Statevector
from conftest import load_hamiltonian, load_reference, random_operator

N_MODES = 6

MOLECULES = ["h2", "h4", "lih", "h2o_cas44"]


def ladder_dense(mode: int, dagger: bool) -> np.ndarray:
    mat = _dense.annihilator(mode, N_MODES)
    return mat.conj().T if dagger else mat


def jw_dense(mode: int, dagger: bool) -> np.ndarray:
    op = jordan_wigner(
        FermionOperator.single(1.0, ((mode, dagger),)), N_MODES)
    return _dense.operator_matrix(op, N_MODES)


@pytest.mark.parametrize("mode", range(N_MODES))
@pytest.mark.parametrize("dagger", [False, True])
def test_jw_ladder_matches_dense(mode, dagger):
    err = np.abs(jw_dense(mode, dagger) - ladder_dense(mode, dagger)).max()
    assert err == 0.0


def test_jw_anticommutation_exact():
    dim = 1 << N_MODES
    eye = np.eye(dim)
    ann = [jw_dense(m, False) for m in range(N_MODES)]
    cre = [m.conj().T for m in ann]
    for p in range(N_MODES):
        for q in range(N_MODES):
            mixed = ann[p] @ cre[q] + cre[q] @ ann[p]
            expected = eye if p == q else 0.0
            assert np.abs(mixed - expected).max() == 0.0
            same = ann[p] @ ann[q] + ann[q] @ ann[p]
            assert np.abs(same).max() == 0.0


def test_normal_order_anticommutes():
    f = FermionOperator.single(1.0, ((0, False), (0, True)))
    ordered = f.normal_order()
    dense = _dense.operator_matrix(jordan_wigner(ordered, 2), 2)
    expected = (_dense.annihilator(0, 2)
                @ _dense.annihilator(0, 2).conj().T)
    assert np.abs(dense - expected).max() == 0.0


def test_one_body_symmetric_matches_dense():
    rng = np.random.default_rng(11)
    c = rng.normal(size=(3, 3))
    c = 0.5 * (c + c.T)
    op = build_one_body_operator(c, "symmetric")
    assert op.is_hermitian()
    got = _dense.operator_matrix(op, 6)
    want = _dense.one_body_matrix(c, 3)
    assert np.abs(got - want).max() < 1e-12


def test_one_body_antisymmetric_matches_dense():
    rng = np.random.default_rng(12)
    m = rng.normal(size=(3, 3))
    m = 0.5 * (m - m.T)
    op = build_one_body_operator(m, "antisymmetric-imaginary")
    assert op.is_hermitian()
    got = _dense.operator_matrix(op, 6)
    want = _dense.one_body_matrix(1j * m, 3)
    assert np.abs(got - want).max() < 1e-12


def test_one_body_rejects_unknown_kind():
    with pytest.raises(DimensionError):
        build_one_body_operator(np.zeros((2, 3)), "symmetric")
    with pytest.raises(ValueError):
        build_one_body_operator(np.zeros((2, 2)), "sideways")


def test_h2_term_count():
    H, _ = load_hamiltonian("h2")
    assert H.n_terms() == 15


@pytest.mark.parametrize("stem", MOLECULES + ["chiral3"])
def test_hamiltonian_real_and_hermitian(stem):
    H, _ = load_hamiltonian(stem)
    H.require_real(tol=1e-12)
    assert H.is_hermitian()


@pytest.mark.parametrize("stem", ["h2", "chiral3"])
def test_hamiltonian_matches_independent_dense(stem):
    H, prob = load_hamiltonian(stem)
    got = _dense.operator_matrix(H)
    want = _dense.hamiltonian_matrix(
        prob.h_eff, prob.g_act, prob.effective_core_energy,
        prob.n_active_orbitals)
    assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("stem", MOLECULES)
def test_hf_expectation_reproduces_scf_energy(stem):
    # mean-field determinant energy must survive the basis change, the
    # core folding, and the qubit encoding end to end
    H, prob = load_hamiltonian(stem)
    modes = hf_occupied_modes(prob.n_active_orbitals,
                              prob.n_active_electrons)
    state = Statevector.basis_state(2 * prob.n_active_orbitals, modes)
    scf = load_reference(stem)[("scf_energy", 0)]
    assert abs(expectation(H, state) - scf) < 1e-8


def test_hf_occupied_modes_blocked_layout():
    assert hf_occupied_modes(4, 4) == [0, 1, 4, 5]
    assert hf_occupied_modes(3, 2) == [0, 3]


def test_number_operator_counts():
    N = number_operator(4)
    for occ in ([], [0], [0, 2], [0, 1, 2, 3]):
        state = Statevector.basis_state(4, occ)
        assert abs(expectation(N, state) - len(occ)) < 1e-12


def test_sz_operator_counts():
    Sz = sz_operator(2)
    cases = {(): 0.0, (0,): 0.5, (2,): -0.5, (0, 2): 0.0, (0, 1): 1.0}
    for occ, want in cases.items():
        state = Statevector.basis_state(4, occ)
        assert abs(expectation(Sz, state) - want) < 1e-12


def test_commutator_matches_dense():
    a = random_operator(4, 8, seed=21, real=False)
    b = random_operator(4, 8, seed=22, real=False)
    got = _dense.operator_matrix(commutator(a, b), 4)
    da, db = _dense.operator_matrix(a, 4), _dense.operator_matrix(b, 4)
    assert np.abs(got - (da @ db - db @ da)).max() < 1e-10


def test_commutator_x_z():
    x = QubitOperator(1, {(1, 0): 1.0})
    z = QubitOperator(1, {(0, 1): 1.0})
    got = commutator(x, z)
    want = QubitOperator(1, {(1, 1): -2.0j})
    assert np.abs(
        _dense.operator_matrix(got, 1) - _dense.operator_matrix(want, 1)
    ).max() == 0.0


def test_product_and_sum_match_dense():
    a = random_operator(3, 6, seed=31, real=False)
    b = random_operator(3, 6, seed=32, real=False)
    da, db = _dense.operator_matrix(a, 3), _dense.operator_matrix(b, 3)
    assert np.abs(_dense.operator_matrix(a * b, 3) - da @ db).max() < 1e-10
    assert np.abs(_dense.operator_matrix(a + b, 3) - (da + db)).max() < 1e-12
    assert np.abs(_dense.operator_matrix(a - b, 3) - (da - db)).max() < 1e-12


def test_dagger_is_adjoint():
    a = random_operator(3, 6, seed=33, real=False)
    got = _dense.operator_matrix(a.dagger(), 3)
    assert np.abs(got - _dense.operator_matrix(a, 3).conj().T).max() == 0.0


def test_simplify_prunes_cancellations():
    a = QubitOperator(2, {(1, 0): 1.0, (2, 1): 0.5})
    b = QubitOperator(2, {(1, 0): -1.0})
    combined = (a + b).simplify()
    assert combined.n_terms() == 1
    assert combined.weight() == 0.5


def test_require_real_rejects_complex():
    from chiropt import ComputeError

    op = QubitOperator(1, {(1, 0): 1.0 + 1e-6j})
    with pytest.raises(ComputeError):
        op.require_real(tol=1e-9)


def test_dump_format_stable():
    op = QubitOperator(2, {(0, 0): 1.5, (1, 2): 0.25j})
    assert op.dump() == (
        "1.5000000000000000e+00 0.0000000000000000e+00 II\n"
        "0.0000000000000000e+00 2.5000000000000000e-01 XZ"
    )
