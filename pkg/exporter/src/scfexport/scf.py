"""Restricted Hartree-Fock with DIIS and the MO integral transform."""
from __future__ import annotations

import numpy as np


class ScfError(Exception):
    """SCF failure: non-convergence or an unsupported shell structure."""


# orbital-gradient norm required at convergence; energy stationarity alone
# can trigger on a DIIS artifact far from any self-consistent density
GRADIENT_TOL = 1e-9


def rhf(S, T, V, eri, e_nuc, n_elec, max_iter=200, tol=1e-12):
    """Closed-shell SCF energy, orbital energies, and MO coefficients."""
    if n_elec % 2 != 0 or n_elec < 2:
        raise ScfError(
            f"restricted treatment needs a positive even electron count, "
            f"got {n_elec}"
        )
    n = S.shape[0]
    nocc = n_elec // 2
    if nocc > n:
        raise ScfError(f"{n_elec} electrons do not fit in {n} orbitals")
    Hcore = T + V
    sval, svec = np.linalg.eigh(S)
    if sval.min() < 1e-10:
        raise ScfError("overlap matrix is numerically singular")
    X = svec @ np.diag(sval**-0.5) @ svec.T
    D = np.zeros((n, n))
    E_old = None
    eps = C = None
    diis_F: list[np.ndarray] = []
    diis_err: list[np.ndarray] = []
    for _ in range(max_iter):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = Hcore + 2.0 * J - K
        err = F @ D @ S - S @ D @ F
        # the energy belongs to the current density with its own Fock,
        # never to an extrapolated one
        E = float(np.sum(D * (Hcore + F))) + e_nuc
        if (E_old is not None and C is not None
                and abs(E - E_old) < tol
                and np.abs(err).max() < GRADIENT_TOL):
            return E, eps, C
        E_old = E
        diis_F.append(F.copy())
        diis_err.append(err.copy())
        if len(diis_F) > 8:
            diis_F.pop(0)
            diis_err.pop(0)
        if len(diis_F) > 1:
            m = len(diis_F)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.sum(diis_err[i] * diis_err[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                cs = np.linalg.solve(B, rhs)[:m]
                F = sum(c * Fi for c, Fi in zip(cs, diis_F))
            except np.linalg.LinAlgError:
                pass
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        D = C[:, :nocc] @ C[:, :nocc].T
    raise ScfError(f"SCF did not converge in {max_iter} iterations")


def mo_transform(h_ao, eri_ao, C):
    """One- and two-electron integrals in the orbital basis C."""
    h = C.T @ h_ao @ C
    g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri_ao, C, C, C, C, optimize=True)
    return h, g
