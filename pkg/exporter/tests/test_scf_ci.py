"""Mean-field, MP2 natural orbitals, and determinant CI against oracles."""
import numpy as np
import pytest

from scfexport.ci import (
    active_window,
    casci_energies,
    fold_frozen_core,
    mp2_natural_orbitals,
)
from scfexport.integrals import integrals
from scfexport.scf import ScfError, mo_transform, rhf

H2_SCF = -1.1169989968
H2_MP2_CORR = -0.0208658222
H2_FCI = -1.1373060358
LIH_SCF = -7.8620020742
H2O_SCF = -74.9630231385


@pytest.fixture(scope="module")
def h2():
    S, T, V, eri, dip, ang, e_nuc = integrals(
        ["H", "H"], [(0, 0, 0), (0, 0, 0.735)]
    )
    e_scf, eps, C = rhf(S, T, V, eri, e_nuc, 2)
    return S, T, V, eri, e_nuc, e_scf, eps, C


@pytest.fixture(scope="module")
def lih():
    S, T, V, eri, dip, ang, e_nuc = integrals(
        ["Li", "H"], [(0, 0, 0), (0, 0, 1.5957)]
    )
    e_scf, eps, C = rhf(S, T, V, eri, e_nuc, 4)
    return S, T, V, eri, e_nuc, e_scf, eps, C


@pytest.fixture(scope="module")
def h2o():
    S, T, V, eri, dip, ang, e_nuc = integrals(
        ["O", "H", "H"],
        [(0, 0, 0.1173), (0, 0.7572, -0.4692), (0, -0.7572, -0.4692)],
    )
    e_scf, eps, C = rhf(S, T, V, eri, e_nuc, 10)
    return S, T, V, eri, e_nuc, e_scf, eps, C


def test_h2_scf_energy(h2):
    assert h2[5] == pytest.approx(H2_SCF, abs=1e-9)


def test_lih_scf_energy(lih):
    assert lih[5] == pytest.approx(LIH_SCF, abs=1e-9)


def test_h2o_scf_energy(h2o):
    assert h2o[5] == pytest.approx(H2O_SCF, abs=1e-9)


def test_h2_mp2_and_fci(h2):
    S, T, V, eri, e_nuc, e_scf, eps, C = h2
    h_mo, g_mo = mo_transform(T + V, eri, C)
    noons, C_no, e_mp2 = mp2_natural_orbitals(eps, C, g_mo, 2)
    assert e_mp2 == pytest.approx(H2_MP2_CORR, abs=1e-9)
    h_no, g_no = mo_transform(T + V, eri, C_no)
    fci = casci_energies(h_no, g_no, e_nuc, 2, 2, nroots=4)
    assert fci[0] == pytest.approx(H2_FCI, abs=1e-9)
    assert fci[0] < e_scf
    assert len(fci) == 4
    assert np.all(np.diff(fci) >= -1e-12)


def test_mp2_matches_independent_loop(h2o):
    """Explicit textbook sum over occupied and virtual pairs."""
    S, T, V, eri, e_nuc, e_scf, eps, C = h2o
    h_mo, g_mo = mo_transform(T + V, eri, C)
    nocc = 5
    n = len(eps)
    want = 0.0
    for i in range(nocc):
        for j in range(nocc):
            for a in range(nocc, n):
                for b in range(nocc, n):
                    iajb = g_mo[i, a, j, b]
                    ibja = g_mo[i, b, j, a]
                    want += (
                        iajb * (2.0 * iajb - ibja)
                        / (eps[i] + eps[j] - eps[a] - eps[b])
                    )
    _, _, e_mp2 = mp2_natural_orbitals(eps, C, g_mo, 10)
    assert e_mp2 == pytest.approx(want, abs=1e-12)
    assert e_mp2 < 0.0


def test_noon_properties(lih):
    S, T, V, eri, e_nuc, e_scf, eps, C = lih
    h_mo, g_mo = mo_transform(T + V, eri, C)
    noons, C_no, _ = mp2_natural_orbitals(eps, C, g_mo, 4)
    assert abs(float(noons.sum()) - 4.0) < 1e-6
    assert noons.min() >= 0.0 and noons.max() <= 2.0
    assert np.all(np.diff(noons) <= 1e-12)
    # natural orbitals stay orthonormal in the AO metric
    G = C_no.T @ S @ C_no
    assert np.max(np.abs(G - np.eye(len(noons)))) < 1e-10


def test_mp2_without_virtuals_is_trivial():
    S, T, V, eri, dip, ang, e_nuc = integrals(["He"], [(0, 0, 0)])
    e_scf, eps, C = rhf(S, T, V, eri, e_nuc, 2)
    h_mo, g_mo = mo_transform(T + V, eri, C)
    noons, C_no, e_mp2 = mp2_natural_orbitals(eps, C, g_mo, 2)
    assert noons.tolist() == [2.0]
    assert e_mp2 == 0.0


def test_casci_matches_hand_rolled_2e2o(h2):
    """Explicit 4x4 determinant matrix written from the integral rules.

    Basis: both electrons in orbital 0, the two open-shell arrangements,
    and both in orbital 1, all at ms = 0.
    """
    S, T, V, eri, e_nuc, e_scf, eps, C = h2
    h, g = mo_transform(T + V, eri, C)
    M = np.zeros((4, 4))
    M[0, 0] = 2 * h[0, 0] + g[0, 0, 0, 0]
    M[3, 3] = 2 * h[1, 1] + g[1, 1, 1, 1]
    M[1, 1] = M[2, 2] = h[0, 0] + h[1, 1] + g[0, 0, 1, 1]
    M[0, 1] = M[0, 2] = h[0, 1] + g[0, 1, 0, 0]
    M[1, 3] = M[2, 3] = h[0, 1] + g[0, 1, 1, 1]
    M[0, 3] = g[0, 1, 0, 1]
    M[1, 2] = g[0, 1, 1, 0]
    M = M + np.triu(M, 1).T
    want = np.sort(np.linalg.eigvalsh(M)) + e_nuc
    got = casci_energies(h, g, e_nuc, 2, 2, nroots=4)
    assert np.max(np.abs(got - want)) < 1e-12


def test_casci_nroots_clamped_to_dimension(h2):
    S, T, V, eri, e_nuc, e_scf, eps, C = h2
    h, g = mo_transform(T + V, eri, C)
    assert len(casci_energies(h, g, e_nuc, 2, 2, nroots=99)) == 4


def test_active_window_partitions():
    assert active_window(6, 4, 2, 3) == ([0], [1, 2, 3], [4, 5])
    assert active_window(4, 4, 4, 4) == ([], [0, 1, 2, 3], [])


def test_active_window_errors():
    with pytest.raises(ScfError, match="even and positive"):
        active_window(6, 4, 3, 3)
    with pytest.raises(ScfError, match="cannot reach"):
        active_window(6, 4, 6, 3)
    with pytest.raises(ScfError, match="exceeds"):
        active_window(4, 4, 2, 4)
    with pytest.raises(ScfError, match="do not fit"):
        active_window(6, 6, 6, 2)


def test_frozen_core_fold_reproduces_scf_energy(lih):
    """Folding the frozen orbital must leave the determinant energy fixed.

    With canonical orbitals and the core frozen, the active reference
    determinant energy plus the folded core equals the full mean-field
    energy.
    """
    S, T, V, eri, e_nuc, e_scf, eps, C = lih
    h, g = mo_transform(T + V, eri, C)
    e_core, h_eff, g_act = fold_frozen_core(h, g, e_nuc, [0], [1, 2, 3, 4, 5])
    e_det = e_core + 2.0 * h_eff[0, 0] + g_act[0, 0, 0, 0]
    assert e_det == pytest.approx(e_scf, abs=1e-10)


def test_rhf_rejects_bad_inputs(h2):
    S, T, V, eri, e_nuc, _, _, _ = h2
    with pytest.raises(ScfError, match="even electron count"):
        rhf(S, T, V, eri, e_nuc, 3)
    with pytest.raises(ScfError, match="do not fit"):
        rhf(S, T, V, eri, e_nuc, 6)
    with pytest.raises(ScfError, match="singular"):
        rhf(np.ones((2, 2)), T, V, eri, e_nuc, 2)
    with pytest.raises(ScfError, match="did not converge"):
        rhf(S, T, V, eri, e_nuc, 2, max_iter=2)
