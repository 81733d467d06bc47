"""Transition moments, rotatory strengths, and broadened ECD spectra.

Magnetic transition moments are purely imaginary over real states, so
they are carried as the real vector m_tilde with physical moment
m = i * m_tilde. The rotatory strength Im[mu . m*] then reduces to
-(mu . m_tilde), which is what all outputs report.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HARTREE_TO_EV, ROTATORY_AU_TO_1E40_CGS, ev_to_nm
from .errors import ComputeError
from .model_io import PropertyIntegrals
from .operators import QubitOperator, build_one_body_operator
from .qeom import ExcitationManifold, HalfApplications, QeomSolution, half_applications
from .simulator import Statevector, apply_operator

MOMENT_RESIDUE_TOL = 1e-7
NORM_SKIP_THRESHOLD = 1e-8
DEFAULT_SIGMA_EV = 0.3


@dataclass
class TransitionRecord:
    index: int
    omega: float
    mu: np.ndarray
    m_tilde: np.ndarray
    R: float

    def __post_init__(self):
        direct = -float(np.dot(self.mu, self.m_tilde))
        via_imag = float(np.imag(np.dot(self.mu, np.conj(1j * self.m_tilde))))
        if abs(direct - via_imag) > 1e-12 or abs(direct - self.R) > 1e-12:
            raise ComputeError("rotatory strength representations disagree")


def rotatory_strength(mu, m_tilde) -> float:
    """Im[mu . m*] for m = i*m_tilde, which equals -(mu . m_tilde)."""
    return -float(np.dot(np.asarray(mu, float), np.asarray(m_tilde, float)))


def property_operators(
    props: PropertyIntegrals,
) -> tuple[list[QubitOperator], list[QubitOperator]]:
    """Qubit operators for the three dipole and three magnetic components."""
    dipole = [build_one_body_operator(props.d[a], "symmetric") for a in range(3)]
    magnetic = [
        build_one_body_operator(props.m_imag[a], "antisymmetric-imaginary")
        for a in range(3)
    ]
    return dipole, magnetic


def transition_moments(
    dipole_ops: list[QubitOperator],
    magnetic_ops: list[QubitOperator],
    manifold: ExcitationManifold,
    sol: QeomSolution,
    psi0: Statevector,
    include_backward: bool = True,
    norm_threshold: float = NORM_SKIP_THRESHOLD,
    cache: HalfApplications | None = None,
) -> list[TransitionRecord]:
    """Transition moments and rotatory strengths for every solved state.

    For a solved excitation with amplitudes (c, d), the moment of a
    Hermitian property P is the ground-state expectation of the
    commutator of P with the state's excitation operator:
    sum_nu c_nu <[P, E_nu]> - d_nu <[P, E_nu^+]>, normalized by the
    square root of the state's commutator norm. include_backward=False
    drops the d_nu sum. States whose norm falls below norm_threshold
    are skipped with a warning.
    """
    if len(dipole_ops) != 3 or len(magnetic_ops) != 3:
        raise ComputeError("need exactly three dipole and three magnetic operators")
    ha = cache if cache is not None else half_applications(manifold, psi0)
    X, Y = ha.x, ha.y
    M = len(manifold)

    fwd = np.zeros((6, M), dtype=np.complex128)
    bwd = np.zeros((6, M), dtype=np.complex128)
    for a, op in enumerate(list(dipole_ops) + list(magnetic_ops)):
        p = apply_operator(op, psi0).amplitudes
        pc = p.conj()
        # <[P, E_nu]> = <p|x_nu> - <y_nu|p>; <[P, E_nu^+]> = <p|y_nu> - <x_nu|p>
        fwd[a] = (pc @ X.T) - (Y.conj() @ p)
        bwd[a] = (pc @ Y.T) - (X.conj() @ p)

    records: list[TransitionRecord] = []
    for k, state in enumerate(sol.states):
        if state.norm < norm_threshold:
            warnings.warn(
                f"state {k} skipped: commutator norm {state.norm:.3e} below "
                f"{norm_threshold}",
                stacklevel=2,
            )
            continue
        scale = 1.0 / np.sqrt(state.norm)
        moments = fwd @ state.c
        if include_backward:
            moments = moments - bwd @ state.d
        moments *= scale

        mu_c = moments[:3]
        if np.max(np.abs(mu_c.imag)) > MOMENT_RESIDUE_TOL:
            raise ComputeError(
                f"electric moment of state {k} has imaginary residue "
                f"{np.max(np.abs(mu_c.imag)):.3e}"
            )
        m_c = moments[3:]
        if np.max(np.abs(m_c.real)) > MOMENT_RESIDUE_TOL:
            raise ComputeError(
                f"magnetic moment of state {k} has real residue "
                f"{np.max(np.abs(m_c.real)):.3e}"
            )
        mu = mu_c.real.copy()
        m_tilde = m_c.imag.copy()
        records.append(
            TransitionRecord(
                index=k,
                omega=state.omega,
                mu=mu,
                m_tilde=m_tilde,
                R=rotatory_strength(mu, m_tilde),
            )
        )
    return records


def mirror_transform(props: PropertyIntegrals, axis: str) -> PropertyIntegrals:
    """Reflect the property integrals through the plane normal to axis.

    The electric dipole is a polar vector: its component along the axis
    flips. The magnetic dipole is axial: the two transverse components
    flip instead. Hamiltonian integrals are untouched by construction.
    Applying the same mirror twice is the identity.
    """
    axes = {"X": 0, "Y": 1, "Z": 2}
    if axis.upper() not in axes:
        raise ComputeError(f"invalid mirror axis {axis!r}")
    a = axes[axis.upper()]
    d = props.d.copy()
    m = props.m_imag.copy()
    d[a] = -d[a]
    for other in range(3):
        if other != a:
            m[other] = -m[other]
    return PropertyIntegrals(
        n_orbitals=props.n_orbitals,
        d=d,
        m_imag=m,
        gauge_origin=props.gauge_origin.copy(),
    )


@dataclass
class EcdSpectrum:
    grid_ev: np.ndarray
    intensity: np.ndarray
    sigma_ev: float
    records: list[TransitionRecord]


def build_spectrum(
    records: list[TransitionRecord],
    grid_ev,
    sigma_ev: float = DEFAULT_SIGMA_EV,
) -> EcdSpectrum:
    """Gaussian-broadened stick spectrum on an energy grid.

    intensity(E) = sum_k omega_k[eV] * R_k * exp(-(E - omega_k[eV])^2 /
    (2 sigma^2)). An empty record list gives the zero spectrum.
    """
    grid = np.asarray(grid_ev, dtype=float)
    if grid.ndim != 1 or (grid.size > 1 and np.any(np.diff(grid) <= 0)):
        raise ComputeError("energy grid must be one-dimensional and ascending")
    if sigma_ev <= 0:
        raise ComputeError(f"sigma must be positive, got {sigma_ev}")
    intensity = np.zeros_like(grid)
    for rec in records:
        omega_ev = rec.omega * HARTREE_TO_EV
        intensity += (
            omega_ev * rec.R * np.exp(-((grid - omega_ev) ** 2) / (2.0 * sigma_ev**2))
        )
    return EcdSpectrum(
        grid_ev=grid, intensity=intensity, sigma_ev=sigma_ev, records=list(records)
    )


def transitions_csv(records: list[TransitionRecord], cgs: bool = False) -> str:
    header = (
        "index, omega_hartree, omega_ev, lambda_nm, mu_x, mu_y, mu_z, "
        "mtilde_x, mtilde_y, mtilde_z, R_au"
    )
    if cgs:
        header += ", R_cgs_1e40"
    lines = [header]
    for rec in records:
        omega_ev = rec.omega * HARTREE_TO_EV
        row = (
            f"{rec.index}, {rec.omega:.12e}, {omega_ev:.12e}, "
            f"{ev_to_nm(omega_ev):.12e}, "
            f"{rec.mu[0]:.12e}, {rec.mu[1]:.12e}, {rec.mu[2]:.12e}, "
            f"{rec.m_tilde[0]:.12e}, {rec.m_tilde[1]:.12e}, {rec.m_tilde[2]:.12e}, "
            f"{rec.R:.12e}"
        )
        if cgs:
            row += f", {rec.R * ROTATORY_AU_TO_1E40_CGS:.12e}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def spectrum_csv(spec: EcdSpectrum) -> str:
    lines = ["energy_ev, lambda_nm, intensity"]
    for e, i in zip(spec.grid_ev, spec.intensity):
        lines.append(f"{e:.12e}, {ev_to_nm(e):.12e}, {i:.12e}")
    return "\n".join(lines) + "\n"
