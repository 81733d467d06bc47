"""Fermionic and Pauli operator algebra with a Jordan-Wigner bridge.

Pauli words are stored as a pair of bit masks (x_mask, z_mask) over the
qubits: bit q set in x_mask only means X on qubit q, in z_mask only means
Z, in both means Y. Products then reduce to mask XORs plus an exact unit
phase, so nested commutators never accumulate rounding in the phases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComputeError, DimensionError
from .model_io import ActiveSpaceProblem

PRUNE_TOL = 1e-12
HERMITICITY_TOL = 1e-12
_POWERS_OF_I = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_LETTERS = "IXZY"  # index = x_bit + 2*z_bit


@dataclass(frozen=True)
class PauliWord:
    """A tensor product of single-qubit Pauli letters."""

    n_qubits: int
    x_mask: int
    z_mask: int

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliWord":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_letters(cls, letters: str) -> "PauliWord":
        """Build from a string like 'XZYI'; position 0 is qubit 0."""
        x = z = 0
        for q, ch in enumerate(letters.upper()):
            if ch == "X":
                x |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
            elif ch != "I":
                raise ValueError(f"invalid Pauli letter {ch!r}")
        return cls(len(letters), x, z)

    @property
    def letters(self) -> str:
        out = []
        for q in range(self.n_qubits):
            xb = (self.x_mask >> q) & 1
            zb = (self.z_mask >> q) & 1
            out.append(_LETTERS[xb + 2 * zb])
        return "".join(out)

    def __str__(self) -> str:
        return self.letters


def _word_product(x1: int, z1: int, x2: int, z2: int) -> tuple[complex, int, int]:
    """Multiply two mask-encoded words; returns (unit phase, x3, z3).

    Uses the decomposition word = i^{|x&z|} X^x Z^z, from which the phase
    of the product follows by counting Z-past-X swaps.
    """
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    exponent = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        - (x3 & z3).bit_count()
        + 2 * (z1 & x2).bit_count()
    ) % 4
    return _POWERS_OF_I[exponent], x3, z3


class QubitOperator:
    """Weighted sum of Pauli words over a fixed qubit register."""

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms: dict[tuple[int, int], complex] | None = None):
        self.n_qubits = n_qubits
        self.terms: dict[tuple[int, int], complex] = dict(terms or {})

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "QubitOperator":
        return cls(n_qubits, {(0, 0): complex(coeff)})

    @classmethod
    def zero(cls, n_qubits: int) -> "QubitOperator":
        return cls(n_qubits, {})

    @classmethod
    def from_word(cls, word: PauliWord, coeff: complex = 1.0) -> "QubitOperator":
        return cls(word.n_qubits, {(word.x_mask, word.z_mask): complex(coeff)})

    def copy(self) -> "QubitOperator":
        return QubitOperator(self.n_qubits, self.terms)

    def words(self) -> list[PauliWord]:
        return [PauliWord(self.n_qubits, x, z) for x, z in self.terms]

    def _check_match(self, other: "QubitOperator") -> None:
        if self.n_qubits != other.n_qubits:
            raise DimensionError(
                f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        self._check_match(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0) + c
        return QubitOperator(self.n_qubits, out)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        self._check_match(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0) - c
        return QubitOperator(self.n_qubits, out)

    def scale(self, factor: complex) -> "QubitOperator":
        return QubitOperator(
            self.n_qubits, {k: c * factor for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check_match(other)
        out: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self.terms.items():
            for (x2, z2), c2 in other.terms.items():
                phase, x3, z3 = _word_product(x1, z1, x2, z2)
                key = (x3, z3)
                out[key] = out.get(key, 0.0) + phase * c1 * c2
        return QubitOperator(self.n_qubits, out).simplify()

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def dagger(self) -> "QubitOperator":
        # Pauli words are Hermitian, so only coefficients conjugate
        return QubitOperator(
            self.n_qubits, {k: c.conjugate() for k, c in self.terms.items()}
        )

    def simplify(self, tol: float = PRUNE_TOL) -> "QubitOperator":
        self.terms = {k: c for k, c in self.terms.items() if abs(c) > tol}
        return self

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def require_real(self, tol: float = HERMITICITY_TOL) -> "QubitOperator":
        """Strip sub-tolerance imaginary parts; raise on larger residues."""
        worst = max((abs(c.imag) for c in self.terms.values()), default=0.0)
        if worst > tol:
            raise ComputeError(
                f"operator expected Hermitian, imaginary residue {worst:.3e}"
            )
        self.terms = {k: complex(c.real, 0.0) for k, c in self.terms.items()}
        return self.simplify()

    def n_terms(self) -> int:
        return len(self.terms)

    def weight(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def dump(self) -> str:
        """Text form `coeff_re coeff_im WORD`, sorted by word string."""
        rows = sorted(
            (PauliWord(self.n_qubits, x, z).letters, c)
            for (x, z), c in self.terms.items()
        )
        return "\n".join(f"{c.real:.16e} {c.imag:.16e} {w}" for w, c in rows)


def commutator(a: QubitOperator, b: QubitOperator) -> QubitOperator:
    return (a * b - b * a).simplify()


class FermionOperator:
    """Sum of products of fermionic ladder operators.

    Each term is (coefficient, factors) where factors is a tuple of
    (mode, dagger) pairs applied right to left, matching operator order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: list[tuple[complex, tuple[tuple[int, bool], ...]]] = [
            (complex(c), tuple((int(m), bool(d)) for m, d in f))
            for c, f in (terms or [])
        ]

    @classmethod
    def single(cls, coeff: complex, factors) -> "FermionOperator":
        return cls([(coeff, factors)])

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        return FermionOperator(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator([(c * other, f) for c, f in self.terms])
        out = []
        for c1, f1 in self.terms:
            for c2, f2 in other.terms:
                out.append((c1 * c2, f1 + f2))
        return FermionOperator(out)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def dagger(self) -> "FermionOperator":
        out = []
        for c, f in self.terms:
            out.append((c.conjugate(), tuple((m, not d) for m, d in reversed(f))))
        return FermionOperator(out)

    def max_mode(self) -> int:
        return max((m for _, f in self.terms for m, _ in f), default=-1)

    def normal_order(self, tol: float = PRUNE_TOL) -> "FermionOperator":
        """Rewrite with daggers left of non-daggers, indices decreasing.

        Applies the canonical anticommutation rules; the operator's action
        is unchanged.
        """
        out: dict[tuple[tuple[int, bool], ...], complex] = {}
        stack = list(self.terms)
        while stack:
            coeff, factors = stack.pop()
            placed = True
            f = list(factors)
            for i in range(len(f) - 1):
                (m1, d1), (m2, d2) = f[i], f[i + 1]
                if not d1 and d2:
                    # a_p a_q^+ = delta_pq - a_q^+ a_p
                    rest = f[:i], f[i + 2:]
                    if m1 == m2:
                        stack.append((coeff, tuple(rest[0]) + tuple(rest[1])))
                    swapped = f[:i] + [(m2, d2), (m1, d1)] + f[i + 2:]
                    stack.append((-coeff, tuple(swapped)))
                    placed = False
                    break
                if d1 == d2:
                    if m1 == m2:
                        placed = False  # repeated ladder on one mode vanishes
                        break
                    if m1 < m2:
                        swapped = f[:i] + [(m2, d2), (m1, d1)] + f[i + 2:]
                        stack.append((-coeff, tuple(swapped)))
                        placed = False
                        break
            if placed:
                key = tuple(f)
                out[key] = out.get(key, 0.0) + coeff
        kept = [(c, f) for f, c in out.items() if abs(c) > tol]
        kept.sort(key=lambda t: t[1])
        return FermionOperator(kept)


def _ladder_qubit_form(mode: int, dagger: bool, n_qubits: int) -> QubitOperator:
    chain = (1 << mode) - 1
    x_word = (1 << mode, chain)
    y_word = (1 << mode, chain | (1 << mode))
    sign = -0.5j if dagger else 0.5j
    return QubitOperator(n_qubits, {x_word: 0.5 + 0.0j, y_word: sign})


def jordan_wigner(op: FermionOperator, n_modes: int) -> QubitOperator:
    """Map a fermionic operator onto qubits.

    Mode p becomes Z_0...Z_{p-1} (X_p + i Y_p)/2 for annihilation and the
    conjugate for creation, so qubit q occupied means bit q set in the
    little-endian basis index.
    """
    if op.max_mode() >= n_modes:
        raise DimensionError(
            f"mode index {op.max_mode()} outside register of {n_modes}"
        )
    total = QubitOperator.zero(n_modes)
    for coeff, factors in op.terms:
        acc = QubitOperator.identity(n_modes, coeff)
        for mode, dag in factors:
            acc = acc * _ladder_qubit_form(mode, dag, n_modes)
        total = total + acc
    return total.simplify()


def excitation_fermion_op(
    creators: tuple[int, ...], annihilators: tuple[int, ...]
) -> FermionOperator:
    """Product a^+_{m1} a^+_{m2} ... a_{i2} a_{i1} as a FermionOperator."""
    factors = [(m, True) for m in creators] + [(i, False) for i in reversed(annihilators)]
    return FermionOperator.single(1.0, factors)


def build_hamiltonian(prob: ActiveSpaceProblem) -> QubitOperator:
    """Qubit Hamiltonian of an active-space problem.

    Spatial integrals are expanded over spin orbitals in blocked ordering
    (all alpha modes first, then all beta), the chemists' two-electron
    tensor is consumed as (pq|rs) with operator order a+_p a+_r a_s a_q,
    and the constant term carries the effective core energy.
    """
    n_orb = prob.n_active_orbitals
    n_modes = 2 * n_orb

    def mode(p: int, spin: int) -> int:
        return p + spin * n_orb

    terms: list[tuple[complex, tuple[tuple[int, bool], ...]]] = []
    if prob.effective_core_energy != 0.0:
        terms.append((prob.effective_core_energy, ()))
    h = prob.h_eff
    g = prob.g_act
    for p in range(n_orb):
        for q in range(n_orb):
            v = h[p, q]
            if v == 0.0:
                continue
            for s in (0, 1):
                terms.append((v, ((mode(p, s), True), (mode(q, s), False))))
    for p in range(n_orb):
        for q in range(n_orb):
            for r in range(n_orb):
                for s in range(n_orb):
                    v = g[p, q, r, s]
                    if v == 0.0:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            terms.append((
                                0.5 * v,
                                (
                                    (mode(p, s1), True),
                                    (mode(r, s2), True),
                                    (mode(s, s2), False),
                                    (mode(q, s1), False),
                                ),
                            ))
    qubit_op = jordan_wigner(FermionOperator(terms), n_modes)
    return qubit_op.require_real()


def build_one_body_operator(matrix: np.ndarray, kind: str) -> QubitOperator:
    """Spin-summed one-body operator from a spatial matrix.

    kind 'symmetric' builds sum_pq d_pq a+_p a_q. kind
    'antisymmetric-imaginary' builds i * sum_pq M_pq a+_p a_q, Hermitian
    because M is real antisymmetric.
    """
    mat = np.asarray(matrix, dtype=float)
    n_orb = mat.shape[0]
    if mat.shape != (n_orb, n_orb):
        raise DimensionError(f"matrix shape {mat.shape} is not square")
    if kind == "symmetric":
        if np.max(np.abs(mat - mat.T)) > 1e-10:
            raise ComputeError("matrix is not symmetric")
        factor = 1.0 + 0.0j
    elif kind == "antisymmetric-imaginary":
        if np.max(np.abs(mat + mat.T)) > 1e-10:
            raise ComputeError("matrix is not antisymmetric")
        factor = 1.0j
    else:
        raise ValueError(f"unknown kind {kind!r}")

    n_modes = 2 * n_orb
    terms = []
    for p in range(n_orb):
        for q in range(n_orb):
            v = mat[p, q]
            if v == 0.0:
                continue
            for s in (0, 1):
                terms.append((
                    factor * v,
                    ((p + s * n_orb, True), (q + s * n_orb, False)),
                ))
    out = jordan_wigner(FermionOperator(terms), n_modes)
    return out.require_real()


def number_operator(n_modes: int) -> QubitOperator:
    """Total particle number as a qubit operator."""
    terms: dict[tuple[int, int], complex] = {(0, 0): 0.5 * n_modes}
    for q in range(n_modes):
        terms[(0, 1 << q)] = -0.5
    return QubitOperator(n_modes, terms)


def sz_operator(n_orbitals: int) -> QubitOperator:
    """Spin-projection operator S_z under blocked mode ordering."""
    op = QubitOperator.zero(2 * n_orbitals)
    for p in range(n_orbitals):
        op.terms[(0, 1 << p)] = op.terms.get((0, 1 << p), 0.0) - 0.25
        alt = 1 << (p + n_orbitals)
        op.terms[(0, alt)] = op.terms.get((0, alt), 0.0) + 0.25
    return op.simplify()
