"""Equation-of-motion excited states over a correlated reference.

The excitation manifold holds spin-resolved single and double
substitutions out of the reference determinant. Matrix elements of the
secular problem are ground-state expectation values of (double)
commutators, evaluated by applying half of each product to the reference
vector and contracting, so no excited state is ever prepared explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HARTREE_TO_EV
from .errors import ComputeError
from .operators import (
    FermionOperator,
    QubitOperator,
    excitation_fermion_op,
    jordan_wigner,
)
from .simulator import Statevector, apply_operator

OMEGA_MIN_DEFAULT = 1e-6
NORM_THRESHOLD = 1e-8
METRIC_NULL_TOL = 1e-8
IMAG_EIGVAL_TOL = 1e-7
ASSEMBLY_IMAG_TOL = 1e-8


@dataclass
class ExcitationOperator:
    """One substitution operator in its creation-normal form.

    occ and vir are spatial-orbital index tuples; spins lists the spin
    (0 alpha, 1 beta) of each occ->vir pair. fermionic holds the
    operator that creates the excitation on the reference; qubit_form is
    its cached qubit image.
    """

    kind: str
    occ: tuple[int, ...]
    vir: tuple[int, ...]
    spins: tuple[int, ...]
    fermionic: FermionOperator
    qubit_form: QubitOperator

    def label(self) -> str:
        pairs = ",".join(
            f"{i}{'ab'[s]}->{m}{'ab'[s]}"
            for i, m, s in zip(self.occ, self.vir, self.spins)
        )
        return f"{self.kind}({pairs})"


@dataclass
class ExcitationManifold:
    operators: list[ExcitationOperator]
    n_occ_spatial: int
    n_vir_spatial: int

    def __len__(self) -> int:
        return len(self.operators)


def manifold_size(n_occ: int, n_vir: int) -> int:
    """Closed-form operator count: singles, same-spin and mixed doubles."""
    same_spin = (n_occ * (n_occ - 1) // 2) * (n_vir * (n_vir - 1) // 2)
    return 2 * n_occ * n_vir + 2 * same_spin + n_occ**2 * n_vir**2


def _make_operator(
    kind: str,
    occ: tuple[int, ...],
    vir: tuple[int, ...],
    spins: tuple[int, ...],
    n_orb: int,
) -> ExcitationOperator:
    n_modes = 2 * n_orb
    creators = tuple(m + s * n_orb for m, s in zip(vir, spins))
    annihilators = tuple(i + s * n_orb for i, s in zip(occ, spins))
    ferm = excitation_fermion_op(creators, annihilators)
    return ExcitationOperator(
        kind=kind,
        occ=occ,
        vir=vir,
        spins=spins,
        fermionic=ferm,
        qubit_form=jordan_wigner(ferm, n_modes),
    )


def generate_manifold(n_occ: int, n_vir: int) -> ExcitationManifold:
    """Ordered spin-conserving singles + doubles manifold.

    Order: singles (alpha block then beta, occupied then virtual index
    ascending), same-spin doubles (alpha then beta, index pairs
    ascending), mixed-spin doubles (all alpha pair x beta pair combos).
    Occupied spatial orbitals are 0..n_occ-1 and virtuals follow.
    """
    if n_occ < 1 or n_vir < 1:
        raise ComputeError(
            f"manifold needs at least one occupied and one virtual orbital, "
            f"got ({n_occ}, {n_vir})"
        )
    n_orb = n_occ + n_vir
    virtuals = list(range(n_occ, n_orb))
    ops: list[ExcitationOperator] = []
    for s in (0, 1):
        for i in range(n_occ):
            for m in virtuals:
                ops.append(_make_operator("single", (i,), (m,), (s,), n_orb))
    for s in (0, 1):
        for i in range(n_occ):
            for j in range(i + 1, n_occ):
                for mi, m in enumerate(virtuals):
                    for n in virtuals[mi + 1 :]:
                        ops.append(
                            _make_operator("double", (i, j), (m, n), (s, s), n_orb)
                        )
    for i in range(n_occ):
        for j in range(n_occ):
            for m in virtuals:
                for n in virtuals:
                    ops.append(
                        _make_operator("double", (i, j), (m, n), (0, 1), n_orb)
                    )
    if len(ops) != manifold_size(n_occ, n_vir):
        raise ComputeError("manifold enumeration disagrees with closed form")
    return ExcitationManifold(operators=ops, n_occ_spatial=n_occ, n_vir_spatial=n_vir)


@dataclass
class QeomMatrices:
    A: np.ndarray
    B: np.ndarray
    S: np.ndarray
    T: np.ndarray


@dataclass
class HalfApplications:
    """Cached E|0>, E^+|0> vectors (and H-transformed partners)."""

    x: np.ndarray
    y: np.ndarray
    hx: np.ndarray | None = None
    hy: np.ndarray | None = None
    Hx: np.ndarray | None = None
    Hy: np.ndarray | None = None


def half_applications(
    manifold: ExcitationManifold,
    psi0: Statevector,
    H: QubitOperator | None = None,
) -> HalfApplications:
    dim = psi0.amplitudes.size
    M = len(manifold)
    x = np.zeros((M, dim), dtype=np.complex128)
    y = np.zeros((M, dim), dtype=np.complex128)
    for idx, op in enumerate(manifold.operators):
        x[idx] = apply_operator(op.qubit_form, psi0).amplitudes
        y[idx] = apply_operator(op.qubit_form.dagger(), psi0).amplitudes
    out = HalfApplications(x=x, y=y)
    if H is not None:
        h_psi = apply_operator(H, psi0)
        hx = np.zeros((M, dim), dtype=np.complex128)
        hy = np.zeros((M, dim), dtype=np.complex128)
        Hx = np.zeros((M, dim), dtype=np.complex128)
        Hy = np.zeros((M, dim), dtype=np.complex128)
        for idx, op in enumerate(manifold.operators):
            hx[idx] = apply_operator(op.qubit_form, h_psi).amplitudes
            hy[idx] = apply_operator(op.qubit_form.dagger(), h_psi).amplitudes
            Hx[idx] = apply_operator(H, Statevector(psi0.n_qubits, x[idx])).amplitudes
            Hy[idx] = apply_operator(H, Statevector(psi0.n_qubits, y[idx])).amplitudes
        out.hx, out.hy, out.Hx, out.Hy = hx, hy, Hx, Hy
    return out


def _realize(name: str, mat: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(mat)
    if bad.any():
        mu, nu = np.argwhere(bad)[0][:2]
        raise ComputeError(
            f"non-finite {name} entry at pair (mu={int(mu)}, nu={int(nu)})"
        )
    residue = float(np.max(np.abs(mat.imag))) if np.iscomplexobj(mat) else 0.0
    if residue > ASSEMBLY_IMAG_TOL:
        raise ComputeError(
            f"{name} has imaginary residue {residue:.3e}; reference state is "
            "not real up to tolerance"
        )
    return np.ascontiguousarray(mat.real)


def assemble_matrices(
    H: QubitOperator,
    manifold: ExcitationManifold,
    psi0: Statevector,
    cache: HalfApplications | None = None,
) -> QeomMatrices:
    """Expectation-value matrices of the secular problem.

    A holds symmetric double commutators of H with one excitation and
    one de-excitation, B the counterpart with two de-excitations on the
    right, S and T the plain commutator overlaps. All are assembled from
    half-applied vectors.
    """
    if not H.is_hermitian():
        raise ComputeError("Hamiltonian must be Hermitian for assembly")
    if abs(psi0.norm() - 1.0) > 1e-8:
        raise ComputeError(f"reference norm {psi0.norm():.6f} is not 1")
    ha = cache if cache is not None and cache.Hx is not None else half_applications(
        manifold, psi0, H
    )
    X, Y, hx, hy, HX, HY = ha.x, ha.y, ha.hx, ha.hy, ha.Hx, ha.Hy
    Xc, Yc = X.conj(), Y.conj()

    a1 = Xc @ HX.T
    a2 = (Yc @ HY.T).T
    a3 = hx.conj() @ X.T
    a4 = (Yc @ hy.T).T
    a5 = Xc @ hx.T
    a6 = (hy.conj() @ Y.T).T
    A = a1 + a2 - 0.5 * (a3 + a4 + a5 + a6)

    b1 = Xc @ HY.T
    b3 = hx.conj() @ Y.T
    b5 = Xc @ hy.T
    B = -(b1 + b1.T - 0.5 * (b3 + b5.T + b5 + b3.T))

    S = Xc @ X.T - (Yc @ Y.T).T
    t1 = Xc @ Y.T
    T = -(t1 - t1.T)

    return QeomMatrices(
        A=_realize("A", A), B=_realize("B", B), S=_realize("S", S), T=_realize("T", T)
    )


def diagonal_estimates(
    H: QubitOperator, manifold: ExcitationManifold, psi0: Statevector
) -> tuple[np.ndarray, np.ndarray]:
    """Per-operator A and S diagonal entries, cheaply."""
    h_psi = apply_operator(H, psi0)
    M = len(manifold)
    a_diag = np.zeros(M)
    s_diag = np.zeros(M)
    for idx, op in enumerate(manifold.operators):
        x = apply_operator(op.qubit_form, psi0).amplitudes
        y = apply_operator(op.qubit_form.dagger(), psi0).amplitudes
        hx = apply_operator(op.qubit_form, h_psi).amplitudes
        hy = apply_operator(op.qubit_form.dagger(), h_psi).amplitudes
        Hx = apply_operator(H, Statevector(psi0.n_qubits, x)).amplitudes
        Hy = apply_operator(H, Statevector(psi0.n_qubits, y)).amplitudes
        xc = x.conj()
        yc = y.conj()
        a = (
            xc @ Hx
            + yc @ Hy
            - 0.5 * (hx.conj() @ x + yc @ hy + xc @ hx + hy.conj() @ y)
        )
        s = xc @ x - yc @ y
        a_diag[idx] = a.real
        s_diag[idx] = s.real
    return a_diag, s_diag


def truncate_manifold(
    manifold: ExcitationManifold,
    H: QubitOperator,
    psi0: Statevector,
    keep: int,
    s_threshold: float = NORM_THRESHOLD,
) -> ExcitationManifold:
    """Keep the `keep` operators with the lowest diagonal energy estimate.

    Operators are ranked by A_diag/S_diag; those with S_diag at or below
    the threshold are unrankable and never kept preferentially. The
    original ordering is preserved among the survivors. keep >= the
    manifold size returns the manifold unchanged.
    """
    if keep < 1:
        raise ComputeError(f"keep must be >= 1, got {keep}")
    if keep >= len(manifold):
        return manifold
    a_diag, s_diag = diagonal_estimates(H, manifold, psi0)
    rankable = [i for i in range(len(manifold)) if s_diag[i] > s_threshold]
    ranked = sorted(rankable, key=lambda i: a_diag[i] / s_diag[i])
    chosen = sorted(ranked[:keep])
    ops = [manifold.operators[i] for i in chosen]
    return ExcitationManifold(
        operators=ops,
        n_occ_spatial=manifold.n_occ_spatial,
        n_vir_spatial=manifold.n_vir_spatial,
    )


@dataclass
class QeomState:
    omega: float
    c: np.ndarray
    d: np.ndarray
    norm: float


@dataclass
class QeomSolution:
    states: list[QeomState]
    n_exc: int
    discarded_metric_dim: int
    tda: bool

    def omegas(self) -> np.ndarray:
        return np.array([s.omega for s in self.states])


def solve_secular(
    mats: QeomMatrices,
    omega_min: float = OMEGA_MIN_DEFAULT,
    norm_threshold: float = NORM_THRESHOLD,
    tda: bool = False,
) -> QeomSolution:
    """Solve the paired-block generalized eigenproblem of the manifold.

    The metric block is eigendecomposed and near-null directions
    (|eigenvalue| < 1e-8) are projected out before inversion; the
    solution records how many were discarded. Retained states have
    positive excitation energy above omega_min and commutator norm above
    norm_threshold, sorted ascending.
    """
    N = mats.A.shape[0]
    for name, m in (("A", mats.A), ("B", mats.B), ("S", mats.S), ("T", mats.T)):
        if m.shape != (N, N):
            raise ComputeError(f"matrix {name} has shape {m.shape}, expected {(N, N)}")
    A = 0.5 * (mats.A + mats.A.T)
    S = 0.5 * (mats.S + mats.S.T)
    if tda:
        B = np.zeros_like(A)
        T = np.zeros_like(A)
    else:
        B = 0.5 * (mats.B + mats.B.T)
        T = 0.5 * (mats.T - mats.T.T)

    M2 = np.block([[A, B], [B, A]])
    G = np.block([[S, T], [-T, -S]])

    s_vals, U = np.linalg.eigh(0.5 * (G + G.T))
    keep = np.abs(s_vals) > METRIC_NULL_TOL
    discarded = int(np.sum(~keep))
    if not np.any(keep):
        raise ComputeError(
            f"metric is singular: all {discarded} directions below "
            f"{METRIC_NULL_TOL} were discarded"
        )
    Uk = U[:, keep]
    sr = s_vals[keep]
    A_red = Uk.T @ M2 @ Uk
    vals, vecs = np.linalg.eig((A_red.T / sr).T)

    states: list[QeomState] = []
    for idx in range(vals.size):
        lam = vals[idx]
        if abs(lam.imag) > IMAG_EIGVAL_TOL:
            continue
        omega = float(lam.real)
        if omega <= omega_min:
            continue
        v = Uk @ vecs[:, idx]
        # a conjugate-pair vector with a near-real eigenvalue still spans
        # the physical direction through its real part
        v_real = v.real
        if np.linalg.norm(v_real) < 1e-8 * np.linalg.norm(v):
            v_real = v.imag
        v = v_real
        norm = float(v @ G @ v)
        if norm <= norm_threshold:
            continue
        # deterministic overall sign: largest-magnitude component positive
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        states.append(QeomState(omega=omega, c=v[:N].copy(), d=v[N:].copy(), norm=norm))

    states.sort(key=lambda s: s.omega)
    return QeomSolution(
        states=states, n_exc=N, discarded_metric_dim=discarded, tda=tda
    )


def solution_csv(sol: QeomSolution) -> str:
    lines = ["state_index, omega_hartree, omega_ev, norm"]
    for i, st in enumerate(sol.states):
        lines.append(
            f"{i}, {st.omega:.12e}, {st.omega * HARTREE_TO_EV:.12e}, {st.norm:.12e}"
        )
    return "\n".join(lines) + "\n"
