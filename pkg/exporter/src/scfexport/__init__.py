"""Classical electronic-structure exporter for the variational ECD engine.

Generates FCIDUMP and property-integral files in a natural-orbital
basis, together with classical reference energies, from a minimal-basis
Gaussian integral engine, restricted Hartree-Fock, MP2 natural
occupations, and determinant CASCI. Communicates with the quantum-side
package purely through the emitted files.
"""
__version__ = "0.1.0"

from .ci import casci_energies, mp2_natural_orbitals
from .export import ExportRequest, export_problem
from .integrals import integrals
from .scf import mo_transform, rhf

__all__ = [
    "__version__",
    "ExportRequest",
    "casci_energies",
    "export_problem",
    "integrals",
    "mo_transform",
    "mp2_natural_orbitals",
    "rhf",
]
