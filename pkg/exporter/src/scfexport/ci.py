"""MP2 natural orbitals and determinant CASCI over an active window."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .scf import ScfError

OCCUPATION_SUM_TOL = 1e-6
OCCUPATION_RANGE_TOL = 1e-8


def mp2_natural_orbitals(eps, C, g_mo, n_elec):
    """Natural occupations and orbitals from the unrelaxed MP2 density.

    Returns (noons, C_no, e_mp2_corr) with occupations sorted descending
    and C_no the AO coefficients of the natural orbitals in that order.
    Occupations are validated to lie in [0, 2] and sum to the electron
    count. The density is computed in the same basis as the integrals;
    there is no mixed-basis mode.
    """
    n = len(eps)
    nocc = n_elec // 2
    nvir = n - nocc
    if nvir == 0:
        # no correlation space; natural orbitals are the canonical ones
        return np.full(nocc, 2.0), C.copy(), 0.0
    o = slice(0, nocc)
    v = slice(nocc, n)
    # t[i,j,a,b] = (ia|jb) / (eps_i + eps_j - eps_a - eps_b)
    iajb = g_mo[o, v, o, v].transpose(0, 2, 1, 3)
    denom = (
        eps[:nocc, None, None, None]
        + eps[None, :nocc, None, None]
        - eps[None, None, nocc:, None]
        - eps[None, None, None, nocc:]
    )
    t = iajb / denom
    t_tilde = 2.0 * t - t.transpose(0, 1, 3, 2)
    e_mp2 = float(np.einsum("ijab,ijab->", iajb, t_tilde))

    P = np.zeros((n, n))
    P[o, o] = 2.0 * np.eye(nocc) - 2.0 * np.einsum("ikab,jkab->ij", t_tilde, t)
    P[v, v] = 2.0 * np.einsum("ijac,ijbc->ab", t_tilde, t)

    occs, U = np.linalg.eigh(P)
    order = np.argsort(occs)[::-1]
    occs = occs[order]
    U = U[:, order]
    for k in range(n):
        pivot = int(np.argmax(np.abs(U[:, k])))
        if U[pivot, k] < 0:
            U[:, k] = -U[:, k]
    if occs.min() < -OCCUPATION_RANGE_TOL or occs.max() > 2.0 + OCCUPATION_RANGE_TOL:
        raise ScfError(
            f"natural occupations outside [0, 2]: min {occs.min():.3e}, "
            f"max {occs.max():.6f}"
        )
    total = float(occs.sum())
    if abs(total - n_elec) > OCCUPATION_SUM_TOL:
        raise ScfError(
            f"natural occupations sum to {total:.8f}, expected {n_elec}"
        )
    occs = np.clip(occs, 0.0, 2.0)
    return occs, C @ U, e_mp2


def active_window(n_orb, n_elec, n_active_elec, n_active_orb):
    """Frozen / active / discarded index lists in occupation order."""
    if n_active_elec % 2 != 0 or n_active_elec < 2:
        raise ScfError(
            f"active electron count must be even and positive, got {n_active_elec}"
        )
    if (n_elec - n_active_elec) % 2 != 0 or n_active_elec > n_elec:
        raise ScfError(
            f"cannot reach {n_active_elec} active electrons from {n_elec}"
        )
    n_frozen = (n_elec - n_active_elec) // 2
    if n_frozen + n_active_orb > n_orb:
        raise ScfError(
            f"active window ({n_frozen} frozen + {n_active_orb} active) "
            f"exceeds {n_orb} orbitals"
        )
    if n_active_elec > 2 * n_active_orb:
        raise ScfError(
            f"{n_active_elec} electrons do not fit in {n_active_orb} orbitals"
        )
    frozen = list(range(n_frozen))
    active = list(range(n_frozen, n_frozen + n_active_orb))
    discarded = list(range(n_frozen + n_active_orb, n_orb))
    return frozen, active, discarded


def fold_frozen_core(h, g, e_nuc, frozen, active):
    """Effective core energy and one-electron matrix for the active window."""
    e_core = e_nuc
    for i in frozen:
        e_core += 2.0 * h[i, i]
        for j in frozen:
            e_core += 2.0 * g[i, i, j, j] - g[i, j, j, i]
    na = len(active)
    h_eff = h[np.ix_(active, active)].copy()
    for ti, tt in enumerate(active):
        for ui, uu in enumerate(active):
            for i in frozen:
                h_eff[ti, ui] += 2.0 * g[i, i, tt, uu] - g[tt, i, i, uu]
    g_act = g[np.ix_(active, active, active, active)].copy()
    return float(e_core), h_eff, g_act


def _excitation_info(o1, o2):
    s1, s2 = set(o1), set(o2)
    return sorted(s1 - s2), sorted(s2 - s1)


def _perm_sign(occ, removed, added):
    occ = list(occ)
    sign = 1
    for hole, part in zip(removed, added):
        i = occ.index(hole)
        occ.pop(i)
        sign *= (-1) ** i
        j = 0
        while j < len(occ) and occ[j] < part:
            j += 1
        occ.insert(j, part)
        sign *= (-1) ** j
    return sign


def _slater_condon(dI, dJ, h, g):
    (oa1, ob1), (oa2, ob2) = dI, dJ
    ha, pa = _excitation_info(oa1, oa2)
    hb, pb = _excitation_info(ob1, ob2)
    na, nb = len(ha), len(hb)
    if na + nb > 2:
        return 0.0
    if na + nb == 0:
        val = sum(h[i, i] for i in oa1) + sum(h[i, i] for i in ob1)
        for i in oa1:
            for j in oa1:
                val += 0.5 * (g[i, i, j, j] - g[i, j, j, i])
        for i in ob1:
            for j in ob1:
                val += 0.5 * (g[i, i, j, j] - g[i, j, j, i])
        for i in oa1:
            for j in ob1:
                val += g[i, i, j, j]
        return val
    if na + nb == 1:
        if na == 1:
            i, a = ha[0], pa[0]
            sign = _perm_sign(oa1, ha, pa)
            val = h[i, a]
            for j in oa1:
                if j != i:
                    val += g[i, a, j, j] - g[i, j, j, a]
            for j in ob1:
                val += g[i, a, j, j]
        else:
            i, a = hb[0], pb[0]
            sign = _perm_sign(ob1, hb, pb)
            val = h[i, a]
            for j in ob1:
                if j != i:
                    val += g[i, a, j, j] - g[i, j, j, a]
            for j in oa1:
                val += g[i, a, j, j]
        return sign * val
    if na == 2:
        (i, j), (a, b) = ha, pa
        return _perm_sign(oa1, ha, pa) * (g[i, a, j, b] - g[i, b, j, a])
    if nb == 2:
        (i, j), (a, b) = hb, pb
        return _perm_sign(ob1, hb, pb) * (g[i, a, j, b] - g[i, b, j, a])
    i, a = ha[0], pa[0]
    j, b = hb[0], pb[0]
    return _perm_sign(oa1, ha, pa) * _perm_sign(ob1, hb, pb) * g[i, a, j, b]


def casci_energies(h_act, g_act, e_core, n_active_elec, n_active_orb, nroots=8):
    """Lowest eigenvalues of the active-space CI matrix, ms = 0 sector."""
    per_spin = n_active_elec // 2
    occs = list(combinations(range(n_active_orb), per_spin))
    dets = [(oa, ob) for oa in occs for ob in occs]
    dim = len(dets)
    H = np.zeros((dim, dim))
    for I in range(dim):
        for J in range(I, dim):
            val = _slater_condon(dets[I], dets[J], h_act, g_act)
            H[I, J] = val
            H[J, I] = val
    w = np.linalg.eigvalsh(H)
    return w[: min(nroots, dim)] + e_core
