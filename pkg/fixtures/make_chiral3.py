"""Generate the synthetic chiral 3-orbital fixture.

The Hamiltonian and property matrices are random but fixed by the seed, with
magnitudes chosen so the ground state is well separated and several
transitions carry nonzero rotatory strength. Run from the repository root:

    python3 fixtures/make_chiral3.py
"""

import pathlib

import numpy as np

from chiropt.model_io import (PropertyIntegrals, SpatialIntegrals,
                              write_fcidump, write_property_integrals)

HERE = pathlib.Path(__file__).resolve().parent


def build(seed: int = 7, n: int = 3):
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(n, n)) * 0.2
    h = 0.5 * (h + h.T)
    np.fill_diagonal(h, [-1.2, -0.4, 0.1])

    g = rng.normal(size=(n, n, n, n)) * 0.05
    gs = np.zeros_like(g)
    # restricted-orbital two-electron tensors carry 8-fold index symmetry
    for (i, j, k, l) in np.ndindex(n, n, n, n):
        vals = [g[i, j, k, l], g[j, i, k, l], g[i, j, l, k], g[j, i, l, k],
                g[k, l, i, j], g[l, k, i, j], g[k, l, j, i], g[l, k, j, i]]
        gs[i, j, k, l] = np.mean(vals)

    d = rng.normal(size=(3, n, n)) * 0.3
    d = 0.5 * (d + d.transpose(0, 2, 1))
    m = rng.normal(size=(3, n, n)) * 0.3
    m = 0.5 * (m - m.transpose(0, 2, 1))

    ints = SpatialIntegrals(n_orbitals=n, n_electrons=2, ms2=0,
                            core_energy=0.3, h=h, g=gs)
    props = PropertyIntegrals(n_orbitals=n, d=d, m_imag=m)
    return ints, props


def main() -> None:
    ints, props = build()
    (HERE / "chiral3.fcidump").write_text(write_fcidump(ints))
    (HERE / "chiral3.props").write_text(write_property_integrals(
        props, comments=["generated by: python3 fixtures/make_chiral3.py"]))
    print("wrote chiral3.fcidump chiral3.props")


if __name__ == "__main__":
    main()
