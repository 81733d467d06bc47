"""Variational excited-state toolkit for electronic circular dichroism.

The pipeline runs from serialized molecular integrals to broadened
rotatory-strength spectra: file parsing and active-space reduction,
fermion-to-qubit operator construction, a shard-parallel statevector
engine, a hardware-style variational ground-state solver, an
equation-of-motion excited-state solver, and chiroptical observables.
A dense diagonalization oracle validates every stage on small systems.
"""
__version__ = "0.1.0"

from .chiroptics import (
    EcdSpectrum,
    TransitionRecord,
    build_spectrum,
    mirror_transform,
    property_operators,
    rotatory_strength,
    transition_moments,
)
from .errors import (
    ChiroptError,
    ComputeError,
    ConfigError,
    DimensionError,
    IntegralConsistencyError,
    IntegralRangeError,
    ParseError,
    SelectionError,
)
from .model_io import (
    ActiveSpaceProblem,
    ActiveSpaceSelection,
    PropertyIntegrals,
    SpatialIntegrals,
    freeze_core,
    full_space_selection,
    parse_fcidump,
    parse_property_integrals,
    select_active_space,
    write_fcidump,
    write_property_integrals,
)
from .operators import (
    FermionOperator,
    PauliWord,
    QubitOperator,
    build_hamiltonian,
    build_one_body_operator,
    commutator,
    jordan_wigner,
    number_operator,
    sz_operator,
)
from .oracle import (
    ExactSolution,
    exact_eigensystem,
    exact_transition_moments,
    sector_basis,
)
from .qeom import (
    ExcitationManifold,
    QeomSolution,
    assemble_matrices,
    generate_manifold,
    manifold_size,
    solve_secular,
    truncate_manifold,
)
from .simulator import (
    Circuit,
    Statevector,
    apply_circuit,
    apply_operator,
    expectation,
    expectation_sharded,
    plan_shards,
)
from .vqe import AnsatzSpec, VqeResult, build_ansatz, hf_occupied_modes, minimize_energy

__all__ = [
    "__version__",
    "ActiveSpaceProblem",
    "ActiveSpaceSelection",
    "AnsatzSpec",
    "ChiroptError",
    "Circuit",
    "ComputeError",
    "ConfigError",
    "DimensionError",
    "EcdSpectrum",
    "ExactSolution",
    "ExcitationManifold",
    "FermionOperator",
    "IntegralConsistencyError",
    "IntegralRangeError",
    "ParseError",
    "PauliWord",
    "PropertyIntegrals",
    "QeomSolution",
    "QubitOperator",
    "SelectionError",
    "SpatialIntegrals",
    "Statevector",
    "TransitionRecord",
    "VqeResult",
    "apply_circuit",
    "apply_operator",
    "assemble_matrices",
    "build_ansatz",
    "build_hamiltonian",
    "build_one_body_operator",
    "build_spectrum",
    "commutator",
    "exact_eigensystem",
    "exact_transition_moments",
    "expectation",
    "expectation_sharded",
    "freeze_core",
    "full_space_selection",
    "generate_manifold",
    "hf_occupied_modes",
    "jordan_wigner",
    "manifold_size",
    "minimize_energy",
    "mirror_transform",
    "number_operator",
    "parse_fcidump",
    "parse_property_integrals",
    "plan_shards",
    "property_operators",
    "rotatory_strength",
    "sector_basis",
    "select_active_space",
    "solve_secular",
    "sz_operator",
    "transition_moments",
    "truncate_manifold",
    "write_fcidump",
    "write_property_integrals",
]
