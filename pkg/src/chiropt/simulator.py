"""Exact statevector simulation and sharded expectation evaluation.

Basis indexing is little-endian: qubit 0 is the least-significant bit of
the amplitude index. Expectation values over a multi-term operator are
always accumulated in the operator's canonical term order so results are
reproducible bit-for-bit.
"""
from __future__ import annotations

import heapq
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ComputeError, ConfigError, DimensionError
from .operators import QubitOperator

DEFAULT_MAX_QUBITS = 26
IMAG_RESIDUE_TOL = 1e-10
WORKERS_ENV = "CHIROPT_WORKERS"


@dataclass
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def zero_state(cls, n_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> "Statevector":
        amp = _allocate(n_qubits, max_qubits)
        amp[0] = 1.0
        return cls(n_qubits, amp)

    @classmethod
    def basis_state(
        cls, n_qubits: int, occupied, max_qubits: int = DEFAULT_MAX_QUBITS
    ) -> "Statevector":
        """Computational basis state with the given bit positions set."""
        amp = _allocate(n_qubits, max_qubits)
        index = 0
        for q in occupied:
            if not 0 <= q < n_qubits:
                raise DimensionError(f"qubit {q} outside register of {n_qubits}")
            index |= 1 << q
        amp[index] = 1.0
        return cls(n_qubits, amp)

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "Statevector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _allocate(n_qubits: int, max_qubits: int) -> np.ndarray:
    if n_qubits < 1:
        raise DimensionError(f"need at least one qubit, got {n_qubits}")
    if n_qubits > max_qubits:
        raise ComputeError(
            f"{n_qubits} qubits exceeds the {max_qubits}-qubit memory ceiling "
            f"(2^{n_qubits} amplitudes); raise max_qubits explicitly to proceed"
        )
    return np.zeros(1 << n_qubits, dtype=np.complex128)


@dataclass(frozen=True)
class PauliX:
    qubit: int


@dataclass(frozen=True)
class Ry:
    qubit: int
    param_index: int


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int


GateOp = PauliX | Ry | Cnot


@dataclass
class Circuit:
    n_qubits: int
    gates: list[GateOp] = field(default_factory=list)
    n_params: int = 0

    def validate(self) -> None:
        for gate in self.gates:
            if isinstance(gate, PauliX):
                qubits = (gate.qubit,)
            elif isinstance(gate, Ry):
                qubits = (gate.qubit,)
                if not 0 <= gate.param_index < self.n_params:
                    raise DimensionError(
                        f"param index {gate.param_index} outside [0, {self.n_params})"
                    )
            elif isinstance(gate, Cnot):
                qubits = (gate.control, gate.target)
                if gate.control == gate.target:
                    raise DimensionError("CNOT control equals target")
            else:
                raise DimensionError(f"unknown gate {gate!r}")
            for q in qubits:
                if not 0 <= q < self.n_qubits:
                    raise DimensionError(
                        f"qubit {q} outside register of {self.n_qubits}"
                    )


def apply_circuit(circ: Circuit, theta, state: Statevector) -> Statevector:
    """Apply the circuit's gates in order; returns a new statevector."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circ.n_params,):
        raise DimensionError(
            f"got {theta.shape[0] if theta.ndim == 1 else theta.shape} parameters, "
            f"circuit takes {circ.n_params}"
        )
    if state.n_qubits != circ.n_qubits:
        raise DimensionError(
            f"state has {state.n_qubits} qubits, circuit {circ.n_qubits}"
        )
    out = state.copy()
    amp = out.amplitudes
    for gate in circ.gates:
        if isinstance(gate, Ry):
            _kernels.apply_ry(amp, gate.qubit, float(theta[gate.param_index]))
        elif isinstance(gate, PauliX):
            _kernels.apply_x(amp, gate.qubit)
        else:
            _kernels.apply_cnot(amp, gate.control, gate.target)
    return out


def canonical_terms(op: QubitOperator) -> list[tuple[int, int, complex]]:
    """Terms as (x_mask, z_mask, coeff) in the canonical (sorted) order."""
    return [(x, z, op.terms[(x, z)]) for x, z in sorted(op.terms)]


_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _word_phase(x_mask: int, z_mask: int) -> complex:
    # i^(number of Y letters), the phase split off by the mask kernels
    return _I_POWERS[(x_mask & z_mask).bit_count() % 4]


def _check_register(op: QubitOperator, state: Statevector) -> None:
    if op.n_qubits != state.n_qubits:
        raise DimensionError(
            f"operator on {op.n_qubits} qubits, state on {state.n_qubits}"
        )


def expectation_complex(op: QubitOperator, state: Statevector) -> complex:
    _check_register(op, state)
    amp = state.amplitudes
    total = 0.0 + 0.0j
    for x, z, c in canonical_terms(op):
        total += c * _word_phase(x, z) * _kernels.word_dot(amp, x, z)
    return complex(total)


def expectation(op: QubitOperator, state: Statevector) -> float:
    """Real expectation value of a Hermitian operator."""
    if not op.is_hermitian():
        raise ComputeError(
            "operator has complex coefficients; use expectation_complex"
        )
    value = expectation_complex(op, state)
    if abs(value.imag) >= IMAG_RESIDUE_TOL:
        raise ComputeError(f"imaginary residue {value.imag:.3e} in expectation")
    return value.real


def apply_operator(op: QubitOperator, state: Statevector) -> Statevector:
    """Unnormalized state op|psi>, accumulated in canonical term order."""
    _check_register(op, state)
    amp = state.amplitudes
    out = np.zeros_like(amp)
    for x, z, c in canonical_terms(op):
        _kernels.word_accumulate(amp, out, x, z, c * _word_phase(x, z))
    return Statevector(state.n_qubits, out)


@dataclass
class ShardPlan:
    n_shards: int
    assignment: list[list[int]]
    n_terms: int
    strategy: str

    def validate_partition(self) -> None:
        seen = sorted(i for shard in self.assignment for i in shard)
        if seen != list(range(self.n_terms)):
            raise ComputeError("shard assignment is not a partition of the terms")


def plan_shards(op: QubitOperator, k: int, strategy: str = "weight-balanced") -> ShardPlan:
    """Partition the operator's canonical terms into k shards.

    round-robin deals term i to shard i mod k. weight-balanced assigns
    terms largest-|coefficient| first to the currently lightest shard,
    which keeps shard weights within max|c| of each other.
    """
    if k < 1:
        raise ConfigError(f"shard count must be >= 1, got {k}")
    terms = canonical_terms(op)
    n = len(terms)
    assignment: list[list[int]] = [[] for _ in range(k)]
    if strategy == "round-robin":
        for i in range(n):
            assignment[i % k].append(i)
    elif strategy == "weight-balanced":
        order = sorted(range(n), key=lambda i: (-abs(terms[i][2]), i))
        heap = [(0.0, shard) for shard in range(k)]
        heapq.heapify(heap)
        for i in order:
            weight, shard = heapq.heappop(heap)
            assignment[shard].append(i)
            heapq.heappush(heap, (weight + abs(terms[i][2]), shard))
        for shard in assignment:
            shard.sort()
    else:
        raise ConfigError(f"unknown shard strategy {strategy!r}")
    return ShardPlan(n_shards=k, assignment=assignment, n_terms=n, strategy=strategy)


def _shard_partial(
    terms: list[tuple[int, int, complex]], indices: list[int], amp: np.ndarray
) -> complex:
    total = 0.0 + 0.0j
    for i in indices:
        x, z, c = terms[i]
        total += c * _word_phase(x, z) * _kernels.word_dot(amp, x, z)
    return total


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV}={raw!r} is not an integer") from exc
        if value < 1:
            raise ConfigError(f"{WORKERS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def expectation_sharded(
    op: QubitOperator,
    plan: ShardPlan,
    state: Statevector,
    workers: int | None = None,
) -> float:
    """Evaluate shard partial sums independently, then combine.

    Partials are combined in ascending shard index regardless of worker
    scheduling, so the floating-point result is reproducible for any
    worker count.
    """
    _check_register(op, state)
    if not op.is_hermitian():
        raise ComputeError(
            "operator has complex coefficients; use expectation_complex"
        )
    terms = canonical_terms(op)
    if plan.n_terms != len(terms):
        raise ComputeError(
            f"stale shard plan: built for {plan.n_terms} terms, operator has "
            f"{len(terms)}"
        )
    if workers is None:
        workers = default_workers()
    workers = max(1, min(workers, plan.n_shards))
    amp = state.amplitudes

    if workers == 1:
        partials = [_shard_partial(terms, shard, amp) for shard in plan.assignment]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_shard_partial, terms, shard, amp)
                for shard in plan.assignment
            ]
            partials = [f.result() for f in futures]

    total = 0.0 + 0.0j
    for p in partials:
        total += p
    if abs(total.imag) >= IMAG_RESIDUE_TOL:
        raise ComputeError(f"imaginary residue {total.imag:.3e} in expectation")
    return total.real
