"""Exact-diagonalization reference for validating the variational pipeline.

Builds the dense matrix of a qubit operator, optionally restricted to a
particle-number/spin sector, and returns the lowest eigenpairs. Intended
for desk-scale cross-checks only; a hard qubit guardrail keeps it from
eating memory.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComputeError, SelectionError
from .operators import QubitOperator
from .simulator import Statevector

DEFAULT_ORACLE_QUBITS = 14
HARD_ORACLE_QUBITS = 16


@dataclass
class ExactSolution:
    energies: np.ndarray
    states: list[Statevector]
    sector: tuple[int, int] | None


def sector_basis(n_qubits: int, n_electrons: int, ms2: int) -> list[int]:
    """Basis indices with fixed alpha/beta occupation under blocked ordering."""
    if n_qubits % 2 != 0:
        raise SelectionError(
            f"sector filtering needs an even qubit count, got {n_qubits}"
        )
    n_orb = n_qubits // 2
    if (n_electrons + ms2) % 2 != 0:
        raise SelectionError(
            f"n_electrons={n_electrons} and ms2={ms2} have mixed parity"
        )
    n_alpha = (n_electrons + ms2) // 2
    n_beta = (n_electrons - ms2) // 2
    if not (0 <= n_alpha <= n_orb and 0 <= n_beta <= n_orb):
        raise SelectionError(
            f"sector ({n_electrons}, {ms2}) does not fit {n_orb} spatial orbitals"
        )
    alpha_mask = (1 << n_orb) - 1
    out = []
    for idx in range(1 << n_qubits):
        if (idx & alpha_mask).bit_count() == n_alpha and (
            (idx >> n_orb).bit_count() == n_beta
        ):
            out.append(idx)
    return out


def dense_matrix(op: QubitOperator, basis: list[int] | None = None) -> np.ndarray:
    """Dense matrix of the operator, optionally in a restricted basis.

    With a basis, matrix elements leading outside it are dropped, which
    equals projecting the operator onto the spanned subspace.
    """
    n = op.n_qubits
    if basis is None:
        dim = 1 << n
        cols = np.arange(dim, dtype=np.int64)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for (x, z), c in op.terms.items():
            phase = 1j ** ((x & z).bit_count() % 4)
            signs = 1.0 - 2.0 * (_parity(cols & z))
            rows = cols ^ x
            mat[rows, cols] += c * phase * signs
        return mat
    pos = {idx: i for i, idx in enumerate(basis)}
    dim = len(basis)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for (x, z), c in op.terms.items():
        phase = 1j ** ((x & z).bit_count() % 4)
        for j_col, idx in enumerate(basis):
            row_idx = idx ^ x
            i_row = pos.get(row_idx)
            if i_row is not None:
                sign = -1.0 if (idx & z).bit_count() % 2 else 1.0
                mat[i_row, j_col] += c * phase * sign
    return mat


def _parity(v: np.ndarray) -> np.ndarray:
    v = v ^ (v >> 32)
    v = v ^ (v >> 16)
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    return v & 1


def exact_eigensystem(
    H: QubitOperator,
    k: int,
    sector: tuple[int, int] | None = None,
    max_qubits: int = DEFAULT_ORACLE_QUBITS,
) -> ExactSolution:
    """Lowest k eigenpairs of H, optionally within an (N_e, ms2) sector.

    max_qubits defaults to 14 and may be raised to 16; beyond that the
    dense build is refused outright.
    """
    n = H.n_qubits
    ceiling = min(max_qubits, HARD_ORACLE_QUBITS)
    if n > ceiling:
        raise ComputeError(
            f"{n} qubits exceeds the {ceiling}-qubit dense-diagonalization "
            "guardrail; use the variational pipeline for systems this large"
        )
    if not H.is_hermitian():
        raise ComputeError("oracle requires a Hermitian operator")

    basis = None
    if sector is not None:
        basis = sector_basis(n, sector[0], sector[1])
        if not basis:
            raise SelectionError(f"sector {sector} contains no basis states")
    mat = dense_matrix(H, basis)
    herm_defect = np.max(np.abs(mat - mat.conj().T))
    if herm_defect > 1e-9:
        raise ComputeError(f"dense matrix not Hermitian (defect {herm_defect:.3e})")
    vals, vecs = np.linalg.eigh(mat)
    k = min(k, vals.size)
    states = []
    for i in range(k):
        amp = np.zeros(1 << n, dtype=np.complex128)
        if basis is None:
            amp[:] = vecs[:, i]
        else:
            amp[np.asarray(basis)] = vecs[:, i]
        states.append(Statevector(n, amp))
    return ExactSolution(energies=vals[:k].copy(), states=states, sector=sector)


def exact_transition_moments(sol: ExactSolution, op: QubitOperator) -> list[complex]:
    """Inner products <psi_0| op |psi_k> for every state in the solution.

    Each value carries the arbitrary relative phase of its eigenvector;
    compare magnitudes or phase-invariant combinations only.
    """
    if not sol.states:
        raise ComputeError("empty solution has no states")
    from .simulator import apply_operator

    bra = apply_operator(op.dagger(), sol.states[0])
    return [bra.inner(psi) for psi in sol.states]
