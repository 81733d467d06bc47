import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from chiropt import (ActiveSpaceSelection, build_hamiltonian, freeze_core,
                     full_space_selection, parse_fcidump,
                     parse_property_integrals)

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

# module under test is deterministic per worker count; keep tests single-shard
ACCEPTANCE_LINES: list[str] = []


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURES / name


def load_integrals(stem: str):
    return parse_fcidump(fixture_path(f"{stem}.fcidump").read_text())


def load_props(stem: str):
    return parse_property_integrals(fixture_path(f"{stem}.props").read_text())


def load_reference(stem: str) -> dict[tuple[str, int], float]:
    out = {}
    lines = fixture_path(f"{stem}.ref.csv").read_text().splitlines()
    for line in lines[1:]:
        quantity, index, value = (tok.strip() for tok in line.split(","))
        out[(quantity, int(index))] = float(value)
    return out


def lih_active_selection() -> ActiveSpaceSelection:
    # orbital 0 frozen, three-orbital valence window; the two lowest natural
    # occupations form an exactly degenerate pair, so the window is explicit
    return ActiveSpaceSelection(
        active_indices=[1, 2, 3],
        frozen_occupied=[0],
        discarded_virtual=[4, 5],
        n_active_electrons=2,
    )


def load_problem(stem: str, with_props: bool = True):
    ints = load_integrals(stem)
    props = load_props(stem) if with_props else None
    if stem == "lih":
        sel = lih_active_selection()
    else:
        sel = full_space_selection(ints.n_orbitals, ints.n_electrons)
    return freeze_core(ints, sel, props)


def load_hamiltonian(stem: str):
    prob = load_problem(stem)
    return build_hamiltonian(prob), prob


@pytest.fixture(scope="session")
def h2_problem():
    return load_problem("h2")


@pytest.fixture(scope="session")
def h2_hamiltonian(h2_problem):
    return build_hamiltonian(h2_problem)


@pytest.fixture(scope="session")
def chiral3_problem():
    return load_problem("chiral3")


@pytest.fixture(scope="session")
def chiral3_hamiltonian(chiral3_problem):
    return build_hamiltonian(chiral3_problem)


def random_operator(n_qubits: int, n_terms: int, seed: int, real: bool = True):
    from chiropt.operators import QubitOperator

    rng = np.random.default_rng(seed)
    terms = {}
    while len(terms) < n_terms:
        x = int(rng.integers(0, 1 << n_qubits))
        z = int(rng.integers(0, 1 << n_qubits))
        coeff = complex(rng.normal(), 0.0 if real else rng.normal())
        terms[(x, z)] = coeff
    return QubitOperator(n_qubits, terms)


def random_state(n_qubits: int, seed: int):
    from chiropt.simulator import Statevector

    rng = np.random.default_rng(seed)
    amp = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    amp /= np.linalg.norm(amp)
    return Statevector(n_qubits, amp.astype(np.complex128))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
