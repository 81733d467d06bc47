"""Active-space export: file generation in the natural-orbital basis.

The emitted FCIDUMP and property files share one orbital set; both
carry a checksum of the orbital coefficients so the consumer can verify
they belong together. The reference CSV holds classical energies and
occupations for acceptance testing without this package installed.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .ci import (
    active_window,
    casci_energies,
    fold_frozen_core,
    mp2_natural_orbitals,
)
from .integrals import ANGSTROM_TO_BOHR, Z_OF, integrals
from .scf import ScfError, mo_transform, rhf

AXES = ("X", "Y", "Z")


@dataclass
class ExportRequest:
    symbols: list[str]
    coords: list[tuple[float, float, float]]  # Angstrom
    basis: str = "sto-3g"
    n_active_electrons: int | None = None
    n_active_orbitals: int | None = None
    epsilon: float | None = None
    gauge_origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    full_space_files: bool = False
    nroots: int = 8
    comment: str = ""

    def validate(self) -> None:
        if not self.symbols:
            raise ScfError("geometry is empty")
        if len(self.symbols) != len(self.coords):
            raise ScfError(
                f"{len(self.symbols)} symbols but {len(self.coords)} coordinates"
            )
        both = (self.n_active_electrons is None) == (self.n_active_orbitals is None)
        if not both:
            raise ScfError(
                "active electrons and active orbitals must be given together"
            )
        if self.epsilon is not None and not 0.0 < self.epsilon < 1.0:
            raise ScfError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass
class ExportResult:
    fcidump_text: str
    property_text: str
    reference_text: str
    scf_energy: float
    casci: np.ndarray
    noons: np.ndarray
    frozen: list[int] = field(default_factory=list)
    active: list[int] = field(default_factory=list)


def orbital_checksum(C_cols: np.ndarray) -> str:
    """Short sha256 tag over a canonical rendering of coefficient columns."""
    text = "\n".join(
        " ".join(f"{v:.12e}" for v in row) for row in np.atleast_2d(C_cols)
    )
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _epsilon_window(noons: np.ndarray, epsilon: float, n_elec: int):
    active = [i for i, v in enumerate(noons) if epsilon < v < 2.0 - epsilon]
    frozen = [i for i, v in enumerate(noons) if v >= 2.0 - epsilon]
    n_active_elec = n_elec - 2 * len(frozen)
    if n_active_elec < 2 or not active:
        raise ScfError(
            f"epsilon {epsilon} leaves no usable active space "
            f"({len(active)} orbitals, {n_active_elec} electrons)"
        )
    if n_active_elec % 2 != 0:
        raise ScfError(
            f"epsilon {epsilon} leaves an odd active electron count "
            f"{n_active_elec}"
        )
    return frozen, active, n_active_elec


def write_fcidump_text(n_orb, n_elec, ms2, h, g, e_core, checksum,
                       tol=1e-14) -> str:
    lines = [
        f"&FCI NORB={n_orb},NELEC={n_elec},MS2={ms2},",
        f" ORBSYM={','.join(['1'] * n_orb)},",
        f" ISYM=1,ORBCHK={checksum},",
        "&END",
    ]

    def rec(value, i, j, k, l):
        lines.append(f"{value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}")

    seen = set()
    for p in range(n_orb):
        for q in range(p + 1):
            for r in range(n_orb):
                for s in range(r + 1):
                    if (p * (p + 1) // 2 + q) < (r * (r + 1) // 2 + s):
                        continue
                    quad = (p, q, r, s)
                    if quad in seen:
                        continue
                    seen.add(quad)
                    value = g[p, q, r, s]
                    if abs(value) > tol:
                        rec(value, p + 1, q + 1, r + 1, s + 1)
    for p in range(n_orb):
        for q in range(p + 1):
            if abs(h[p, q]) > tol:
                rec(h[p, q], p + 1, q + 1, 0, 0)
    rec(e_core, 0, 0, 0, 0)
    return "\n".join(lines) + "\n"


def write_property_text(n_orb, d, m, origin_bohr, checksum, comment="") -> str:
    lines = []
    if comment:
        for row in comment.splitlines():
            lines.append(f"# {row}")
    lines.append(f"# orbital-checksum {checksum}")
    lines.append(f"NORB {n_orb}")
    lines.append(
        "ORIGIN "
        + " ".join(f"{v: .16E}" for v in origin_bohr)
    )
    for a, ax in enumerate(AXES):
        for p in range(n_orb):
            for q in range(p, n_orb):
                if abs(d[a, p, q]) > 1e-14:
                    lines.append(f"DIPOLE {ax} {p + 1} {q + 1} {d[a, p, q]: .16E}")
    for a, ax in enumerate(AXES):
        for p in range(n_orb):
            for q in range(p + 1, n_orb):
                if abs(m[a, p, q]) > 1e-14:
                    lines.append(f"ANGMOM {ax} {p + 1} {q + 1} {m[a, p, q]: .16E}")
    return "\n".join(lines) + "\n"


def export_problem(req: ExportRequest) -> ExportResult:
    """Run the classical pipeline and render the three output files.

    The Hamiltonian and property integrals are both expressed in MP2
    natural orbitals ordered by descending occupation. With
    full_space_files set, the FCIDUMP covers every orbital (the active
    window affects only the reference energies); otherwise it holds the
    frozen-core-folded active-space problem.
    """
    req.validate()
    S, T, V, eri, dip, ang, e_nuc = integrals(
        req.symbols, req.coords, origin=req.gauge_origin, basis=req.basis
    )
    n_elec = sum(Z_OF[s] for s in req.symbols)
    e_scf, eps, C = rhf(S, T, V, eri, e_nuc, n_elec)
    h_mo, g_mo = mo_transform(T + V, eri, C)
    noons, C_no, e_mp2 = mp2_natural_orbitals(eps, C, g_mo, n_elec)
    h_no, g_no = mo_transform(T + V, eri, C_no)

    n_orb = len(noons)
    if req.n_active_electrons is not None:
        frozen, active, _ = active_window(
            n_orb, n_elec, req.n_active_electrons, req.n_active_orbitals
        )
        n_act_e = req.n_active_electrons
    elif req.epsilon is not None:
        frozen, active, n_act_e = _epsilon_window(noons, req.epsilon, n_elec)
    else:
        frozen, active, n_act_e = [], list(range(n_orb)), n_elec

    e_core, h_act, g_act = fold_frozen_core(h_no, g_no, e_nuc, frozen, active)
    casci = casci_energies(
        h_act, g_act, e_core, n_act_e, len(active), nroots=req.nroots
    )

    # electron charge folded into the stored property matrices: the
    # electric dipole is -<r - O>, the magnetic matrix is the real
    # antisymmetric carrier with a factor one-half, so that i times it
    # is the magnetic moment operator -(1/2)(r x p)
    d_no = -np.stack([C_no.T @ dip[a] @ C_no for a in range(3)])
    m_raw = np.stack([C_no.T @ ang[a] @ C_no for a in range(3)])
    m_no = np.stack([0.25 * (m_raw[a] - m_raw[a].T) for a in range(3)])

    if req.full_space_files:
        file_idx = list(range(n_orb))
        fc_n_elec, fc_core = n_elec, e_nuc
        fc_h, fc_g = h_no, g_no
    else:
        file_idx = active
        fc_n_elec, fc_core = n_act_e, e_core
        fc_h, fc_g = h_act, g_act

    checksum = orbital_checksum(C_no[:, file_idx])
    origin_bohr = np.asarray(req.gauge_origin, float) * ANGSTROM_TO_BOHR
    fcidump = write_fcidump_text(
        len(file_idx), fc_n_elec, 0, fc_h, fc_g, fc_core, checksum
    )
    prop = write_property_text(
        len(file_idx),
        d_no[:, file_idx][:, :, file_idx],
        m_no[:, file_idx][:, :, file_idx],
        origin_bohr,
        checksum,
        comment=req.comment,
    )

    ref_lines = ["quantity, index, value"]
    ref_lines.append(f"scf_energy, 0, {e_scf:.12e}")
    ref_lines.append(f"mp2_correlation, 0, {e_mp2:.12e}")
    for i, e in enumerate(casci):
        ref_lines.append(f"casci_energy, {i}, {e:.12e}")
    for i, v in enumerate(noons):
        ref_lines.append(f"noon, {i}, {v:.12e}")
    ref_lines.append(f"n_active_electrons, 0, {n_act_e}")
    ref_lines.append(f"n_active_orbitals, 0, {len(active)}")
    ref_lines.append(f"n_frozen, 0, {len(frozen)}")
    reference = "\n".join(ref_lines) + "\n"

    return ExportResult(
        fcidump_text=fcidump,
        property_text=prop,
        reference_text=reference,
        scf_energy=e_scf,
        casci=casci,
        noons=noons,
        frozen=frozen,
        active=active,
    )
