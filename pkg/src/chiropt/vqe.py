"""Variational ground-state solver.

The circuit is a hardware-efficient ansatz: Pauli-X gates prepare the
mean-field reference determinant, then L entangling blocks of one Ry
rotation per qubit followed by a CNOT chain, closed by a final Ry layer.
The objective adds a particle-number penalty because the circuit does
not conserve particle number on its own.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ComputeError, ConfigError
from .operators import QubitOperator, number_operator
from .optimizers import minimize
from .simulator import (
    Circuit,
    Cnot,
    PauliX,
    Ry,
    ShardPlan,
    Statevector,
    apply_circuit,
    expectation,
    expectation_sharded,
    plan_shards,
)

DEFAULT_LAYERS = 3
DEFAULT_PENALTY = 1.0
DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 20000
DEFAULT_INIT_RANGE = 0.01
DEFAULT_RESTARTS = 3


@dataclass
class AnsatzSpec:
    n_qubits: int
    layers: int = DEFAULT_LAYERS
    entanglement: str = "circular"
    occupied_modes: list[int] = field(default_factory=list)

    @property
    def n_params(self) -> int:
        return self.n_qubits * (self.layers + 1)

    def validate(self) -> None:
        if self.layers < 0:
            raise ConfigError(f"layer count must be >= 0, got {self.layers}")
        if self.entanglement not in ("linear", "circular"):
            raise ConfigError(
                f"entanglement {self.entanglement!r} is neither linear nor circular"
            )
        if len(set(self.occupied_modes)) != len(self.occupied_modes):
            raise ConfigError("occupied modes contain duplicates")
        for q in self.occupied_modes:
            if not 0 <= q < self.n_qubits:
                raise ConfigError(
                    f"occupied mode {q} outside register of {self.n_qubits}"
                )


def hf_occupied_modes(n_orbitals: int, n_electrons: int) -> list[int]:
    """Reference determinant modes under blocked spin ordering."""
    if n_electrons % 2 != 0:
        raise ConfigError(f"odd electron count {n_electrons} is open-shell")
    pairs = n_electrons // 2
    if pairs > n_orbitals:
        raise ConfigError(
            f"{n_electrons} electrons exceed {n_orbitals} spatial orbitals"
        )
    return list(range(pairs)) + [n_orbitals + i for i in range(pairs)]


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    spec.validate()
    n = spec.n_qubits
    gates: list = [PauliX(q) for q in sorted(spec.occupied_modes)]
    param = 0
    for _ in range(spec.layers):
        for q in range(n):
            gates.append(Ry(q, param))
            param += 1
        for q in range(n - 1):
            gates.append(Cnot(q, q + 1))
        if spec.entanglement == "circular" and n > 1:
            gates.append(Cnot(n - 1, 0))
    for q in range(n):
        gates.append(Ry(q, param))
        param += 1
    circ = Circuit(n_qubits=n, gates=gates, n_params=param)
    circ.validate()
    if param != spec.n_params:
        raise ComputeError("parameter bookkeeping mismatch in ansatz build")
    return circ


@dataclass
class VqeResult:
    energy: float
    theta_opt: np.ndarray
    iterations: int
    converged: bool
    energy_history: list[float]
    final_state: Statevector


def anchor_angles(spec: AnsatzSpec) -> np.ndarray:
    """Parameter vector whose circuit prepares the reference determinant.

    With every rotation at zero the entangler chains map the prepared
    determinant to a different one, so optimization would start from a
    scrambled high-energy state. Propagating the occupation bits through
    the CNOT pattern classically and putting a pi rotation on every
    final-layer qubit that ended up flipped restores the reference at
    the starting point, up to a global sign.
    """
    spec.validate()
    n = spec.n_qubits
    bits = [0] * n
    for q in spec.occupied_modes:
        bits[q] = 1
    target = list(bits)
    for _ in range(spec.layers):
        for q in range(n - 1):
            bits[q + 1] ^= bits[q]
        if spec.entanglement == "circular" and n > 1:
            bits[0] ^= bits[n - 1]
    theta = np.zeros(spec.n_params)
    base = n * spec.layers
    for q in range(n):
        if bits[q] != target[q]:
            theta[base + q] = np.pi
    return theta


def penalty_operator(n_qubits: int, n_electrons: int) -> QubitOperator:
    """(N - N_e)^2 as a qubit operator."""
    shifted = number_operator(n_qubits) - QubitOperator.identity(
        n_qubits, float(n_electrons)
    )
    return (shifted * shifted).require_real()


def minimize_energy(
    H: QubitOperator,
    spec: AnsatzSpec,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    penalty_lambda: float = DEFAULT_PENALTY,
    optimizer: str = "trust-linear",
    restarts: int = DEFAULT_RESTARTS,
    init_range: float = DEFAULT_INIT_RANGE,
    shards: int = 1,
    workers: int | None = None,
) -> VqeResult:
    """Minimize <H> + penalty_lambda <(N - N_e)^2> over ansatz parameters.

    The electron count for the penalty is the size of the reference
    determinant in spec.occupied_modes. Each attempt starts from the
    reference-preparing anchor angles plus uniform noise from
    [-init_range, init_range]; 1 + restarts attempts run with fresh
    draws from one seeded generator (within the shared max_iter budget)
    and the lowest objective wins. Identical inputs give bit-identical
    histories.
    """
    spec.validate()
    if not H.is_hermitian():
        raise ComputeError("Hamiltonian must have real Pauli coefficients")
    if tol <= 0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    n_electrons = len(spec.occupied_modes)
    circuit = build_ansatz(spec)
    reference = Statevector.zero_state(spec.n_qubits)

    plan: ShardPlan | None = None
    if shards > 1:
        plan = plan_shards(H, shards)

    def energy_of(theta: np.ndarray) -> tuple[float, Statevector]:
        state = apply_circuit(circuit, theta, reference)
        if plan is not None:
            return expectation_sharded(H, plan, state, workers=workers), state
        return expectation(H, state), state

    pen_op = None
    if penalty_lambda != 0.0:
        pen_op = penalty_operator(spec.n_qubits, n_electrons)

    energy_history: list[float] = []

    def objective(theta: np.ndarray) -> float:
        e_h, state = energy_of(theta)
        energy_history.append(e_h)
        if pen_op is None:
            return e_h
        return e_h + penalty_lambda * expectation(pen_op, state)

    anchor = anchor_angles(spec)
    rng = np.random.default_rng(seed)
    best = None
    total_evals = 0
    for attempt in range(1 + max(0, restarts)):
        theta0 = anchor + rng.uniform(-init_range, init_range, spec.n_params)
        budget = max_iter - total_evals
        if budget <= 0:
            break
        result = minimize(objective, theta0, method=optimizer, tol=tol, max_evals=budget)
        total_evals += result.n_evals
        if best is None or result.fun < best.fun:
            best = result

    if best is None:
        raise ComputeError("optimizer budget exhausted before any evaluation")

    final_state = apply_circuit(circuit, best.x, reference)
    energy = expectation(H, final_state)
    return VqeResult(
        energy=energy,
        theta_opt=best.x.copy(),
        iterations=total_evals,
        converged=best.converged,
        energy_history=energy_history,
        final_state=final_state,
    )
