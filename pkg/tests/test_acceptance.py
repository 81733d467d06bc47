"""Acceptance gate.

Each test covers one numbered criterion and appends a single line
`criterion NN PASS/FAIL (measured detail)` to the terminal summary, so
the run reports the full slate even when individual criteria fail.
Failures carry their measured values; nothing here loosens a bound to
force a pass.
"""
import time
from itertools import combinations

import numpy as np
import pytest

from chiropt.chiroptics import (
    build_spectrum,
    mirror_transform,
    property_operators,
    transition_moments,
)
from chiropt.model_io import parse_fcidump
from chiropt.operators import (
    FermionOperator,
    build_hamiltonian,
    commutator,
    jordan_wigner,
    number_operator,
    sz_operator,
)
from chiropt.oracle import exact_eigensystem, exact_transition_moments
from chiropt.qeom import (
    assemble_matrices,
    generate_manifold,
    manifold_size,
    solve_secular,
    truncate_manifold,
)
from chiropt.simulator import (
    QubitOperator,
    Statevector,
    expectation,
    expectation_sharded,
    plan_shards,
)
from chiropt.vqe import AnsatzSpec, hf_occupied_modes, minimize_energy

from conftest import ACCEPTANCE_LINES, FIXTURES, load_problem

import _dense

ALL_STEMS = ("h2", "h4", "lih", "h2o_cas44", "chiral3")
SMALL_STEMS = ALL_STEMS  # every fixture fits in 8 qubits


def finish(num, ok, detail):
    line = f"criterion {num:02d} {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def sector_dim(n_orb, n_elec):
    from math import comb

    half = n_elec // 2
    return comb(n_orb, half) ** 2


class Workspace:
    """Per-fixture cache shared across criteria."""

    def __init__(self, stem):
        self.stem = stem
        self.prob = load_problem(stem)
        self.H = build_hamiltonian(self.prob)
        self.n_qubits = self.H.n_qubits
        self._exact = None
        self._qeom = None

    @property
    def exact(self):
        if self._exact is None:
            k = sector_dim(self.prob.n_active_orbitals,
                           self.prob.n_active_electrons)
            self._exact = exact_eigensystem(
                self.H, k=k, sector=(self.prob.n_active_electrons, 0)
            )
        return self._exact

    @property
    def manifold(self):
        o = self.prob.n_active_electrons // 2
        return generate_manifold(o, self.prob.n_active_orbitals - o)

    def qeom_exact_ref(self):
        if self._qeom is None:
            psi0 = self.exact.states[0]
            man = self.manifold
            sol = solve_secular(assemble_matrices(self.H, man, psi0))
            self._qeom = (man, sol, psi0)
        return self._qeom


_SPACES = {}


def space(stem):
    if stem not in _SPACES:
        _SPACES[stem] = Workspace(stem)
    return _SPACES[stem]


_VQE = {}


def vqe_result(stem, layers=3):
    key = (stem, layers)
    if key not in _VQE:
        ws = space(stem)
        occ = hf_occupied_modes(ws.prob.n_active_orbitals,
                                ws.prob.n_active_electrons)
        spec = AnsatzSpec(n_qubits=ws.n_qubits, layers=layers,
                          occupied_modes=occ)
        start = time.perf_counter()
        res = minimize_energy(ws.H, spec, seed=7)
        _VQE[key] = (res, time.perf_counter() - start)
    return _VQE[key]


def test_criterion_01():
    start = time.perf_counter()
    man = generate_manifold(4, 4)
    singles = sum(1 for op in man.operators if op.kind == "single")
    doubles = sum(1 for op in man.operators if op.kind == "double")
    mismatch = []
    for o in range(1, 7):
        for v in range(1, 7):
            if len(generate_manifold(o, v)) != manifold_size(o, v):
                mismatch.append((o, v))
    elapsed = time.perf_counter() - start
    ok = (singles == 32 and doubles == 328 and len(man) == 360
          and not mismatch and elapsed < 1.0)
    finish(1, ok,
           f"(4,4) gives {singles} singles + {doubles} doubles = {len(man)}; "
           f"closed-form mismatches {mismatch or 'none'} for sizes <= 6; "
           f"{elapsed:.2f}s")


def test_criterion_02():
    parts = []
    ok = True
    for stem in ("h2", "h4"):
        ws = space(stem)
        res, elapsed = vqe_result(stem)
        e0 = ws.exact.energies[0]
        above = res.energy - e0
        leg = above <= 1e-4 and above >= -1e-9 and elapsed < 60.0
        ok = ok and leg
        parts.append(
            f"{stem}: E-E0={above:+.3e} Ha in {elapsed:.0f}s"
            + ("" if leg else " [out of bounds]")
        )
    finish(2, ok, "; ".join(parts))


def test_criterion_03():
    start = time.perf_counter()
    parts = []
    ok = True
    for stem in ("h2", "h4"):
        ws = space(stem)
        gaps = ws.exact.energies[1:] - ws.exact.energies[0]
        man, sol, _ = ws.qeom_exact_ref()
        dev_exact = max(
            float(np.min(np.abs(gaps - st.omega))) for st in sol.states
        )
        res, _ = vqe_result(stem)
        sol_v = solve_secular(
            assemble_matrices(ws.H, man, res.final_state)
        )
        dev_vqe = max(
            float(np.min(np.abs(gaps - st.omega))) for st in sol_v.states
        )
        leg = dev_exact < 1e-8 and dev_vqe < 5e-4
        ok = ok and leg
        parts.append(
            f"{stem}: exact-ref dev {dev_exact:.1e} "
            f"({len(sol.states)} states), vqe-ref dev {dev_vqe:.1e}"
            + ("" if leg else " [out of bounds]")
        )
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 300.0
    finish(3, ok, "; ".join(parts) + f"; {elapsed:.0f}s")


def test_criterion_04():
    ws = space("chiral3")
    man, sol, psi0 = ws.qeom_exact_ref()
    dip, mag = property_operators(ws.prob.properties)
    recs = transition_moments(dip, mag, man, sol, psi0)
    mirrored = mirror_transform(ws.prob.properties, "Z")
    dip_m, mag_m = property_operators(mirrored)
    recs_m = transition_moments(dip_m, mag_m, man, sol, psi0)
    d_omega = max(abs(a.omega - b.omega) for a, b in zip(recs, recs_m))
    d_r = max(abs(a.R + b.R) for a, b in zip(recs, recs_m))
    grid = np.linspace(0.0, 90.0, 1801)
    spec = build_spectrum(recs, grid)
    spec_m = build_spectrum(recs_m, grid)
    d_spec = float(np.max(np.abs(spec.intensity + spec_m.intensity)))
    ok = d_omega <= 1e-12 and d_r <= 1e-10 and d_spec <= 1e-9
    finish(4, ok,
           f"mirror dev: omega {d_omega:.1e}, R {d_r:.1e}, "
           f"spectrum {d_spec:.1e}")


def test_criterion_05():
    ws = space("h2")
    man, sol, psi0 = ws.qeom_exact_ref()
    dip, mag = property_operators(ws.prob.properties)
    recs = transition_moments(dip, mag, man, sol, psi0)
    worst = max(abs(r.R) for r in recs)
    ok = worst < 1e-10
    finish(5, ok, f"max |R| = {worst:.1e} over {len(recs)} transitions")


def test_criterion_06():
    start = time.perf_counter()
    n, n_terms = 16, 600
    rng = np.random.default_rng(20)
    terms = {}
    while len(terms) < n_terms:
        x = int(rng.integers(0, 1 << n))
        z = int(rng.integers(0, 1 << n))
        if (x, z) not in terms:
            terms[(x, z)] = complex(rng.normal(), 0.0)
    H = QubitOperator(n, terms).require_real()
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    state = Statevector(n, amps)
    base = expectation(H, state)
    dev = 0.0
    for k in (1, 2, 3, 4, 8):
        plan = plan_shards(H, k)
        dev = max(dev, abs(expectation_sharded(H, plan, state) - base))
    plan4 = plan_shards(H, 4)
    times = {}
    for workers in (1, 4):
        best = np.inf
        for _ in range(3):
            t0 = time.perf_counter()
            expectation_sharded(H, plan4, state, workers=workers)
            best = min(best, time.perf_counter() - t0)
        times[workers] = best
    ratio = times[4] / times[1]
    elapsed = time.perf_counter() - start
    ok = dev <= 1e-12 and ratio <= 0.75 and elapsed < 120.0
    finish(6, ok,
           f"shard equality dev {dev:.1e}; 4-worker/1-worker wall ratio "
           f"{ratio:.2f} (need <= 0.75); {elapsed:.0f}s")


def test_criterion_07():
    n_modes = 6
    dev_anti = 0.0
    eye = np.eye(1 << n_modes)
    lowering = []
    for p in range(n_modes):
        op = jordan_wigner(
            FermionOperator.single(1.0, ((p, 0),)), n_modes
        )
        lowering.append(_dense.operator_matrix(op, n_modes))
    for p in range(n_modes):
        for q in range(n_modes):
            anti = (lowering[p] @ lowering[q].conj().T
                    + lowering[q].conj().T @ lowering[p])
            dev_anti = max(dev_anti, float(np.max(np.abs(
                anti - (eye if p == q else 0.0)
            ))))
            both = lowering[p] @ lowering[q] + lowering[q] @ lowering[p]
            dev_anti = max(dev_anti, float(np.max(np.abs(both))))
    herm = []
    sym = []
    for stem in ALL_STEMS:
        ws = space(stem)
        imag = max(
            (abs(c.imag) for c in ws.H.terms.values()), default=0.0
        )
        herm.append(imag)
        n_orb = ws.prob.n_active_orbitals
        w_n = commutator(ws.H, number_operator(2 * n_orb)).weight()
        w_sz = commutator(ws.H, sz_operator(n_orb)).weight()
        sym.append(max(w_n, w_sz))
    ok = dev_anti == 0.0 and max(herm) <= 1e-12 and max(sym) < 1e-10
    finish(7, ok,
           f"anticommutators exact (dev {dev_anti:.1f}); max imag coeff "
           f"{max(herm):.1e}; max [H,N]/[H,Sz] weight {max(sym):.1e}")


def test_criterion_08():
    parts = []
    ok = True
    for stem in SMALL_STEMS:
        ws = space(stem)
        man, sol, psi0 = ws.qeom_exact_ref()
        dip, mag = property_operators(ws.prob.properties)
        recs = transition_moments(dip, mag, man, sol, psi0)
        mu_ex = np.array(
            [exact_transition_moments(ws.exact, op) for op in dip]
        )
        m_ex = np.array(
            [exact_transition_moments(ws.exact, op) for op in mag]
        )
        gaps = ws.exact.energies - ws.exact.energies[0]
        worst = 0.0
        for rec in recs:
            k = int(np.argmin(np.abs(gaps - rec.omega)))
            dev_mu = float(np.max(np.abs(np.abs(rec.mu)
                                         - np.abs(mu_ex[:, k]))))
            r_exact = float(np.imag(np.sum(mu_ex[:, k]
                                           * np.conj(m_ex[:, k]))))
            worst = max(worst, dev_mu, abs(rec.R - r_exact),
                        abs(gaps[k] - rec.omega))
        leg = worst < 1e-8
        ok = ok and leg
        parts.append(f"{stem}: worst dev {worst:.1e}"
                     + ("" if leg else " [out of bounds]"))
    finish(8, ok, "; ".join(parts))


def test_criterion_09():
    ws = space("h4")
    man, sol_full, psi0 = ws.qeom_exact_ref()
    cut = truncate_manifold(man, ws.H, psi0, keep=20)
    sol_cut = solve_secular(assemble_matrices(ws.H, cut, psi0))
    low_full = sol_full.omegas()[:3]
    low_cut = sol_cut.omegas()[:3]
    shift = float(np.max(np.abs(low_full - low_cut)))
    ok = len(low_cut) == 3 and shift < 1e-3
    finish(9, ok,
           f"keep=20 of {len(man)}: lowest-3 omega shift {shift:.2e} Ha "
           f"(need < 1e-3)")


def test_criterion_10(tmp_path):
    from chiropt.cli import main

    flags = [
        "--fcidump", str(FIXTURES / "chiral3.fcidump"),
        "--properties", str(FIXTURES / "chiral3.props"),
        "--layers", "1", "--seed", "2", "--tol", "1e-4",
        "--grid-max", "6.0",
    ]
    runs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert main(["ecd"] + flags + ["--out", str(out)]) == 0
        runs.append(out)
    csvs = sorted(p.name for p in runs[0].glob("*.csv"))
    differing = [
        name for name in csvs
        if (runs[0] / name).read_bytes() != (runs[1] / name).read_bytes()
    ]
    ok = bool(csvs) and not differing
    finish(10, ok,
           f"{len(csvs)} CSVs byte-compared, differing: {differing or 'none'}")


def test_criterion_11():
    from chiropt.model_io import ActiveSpaceSelection, freeze_core

    parts = []
    ok = True
    for stem in ("h2", "lih"):
        ints = parse_fcidump((FIXTURES / f"{stem}.fcidump").read_text())
        ref_rows = {}
        for line in (FIXTURES / f"{stem}.ref.csv").read_text().splitlines()[1:]:
            q, idx, val = (t.strip() for t in line.split(","))
            ref_rows[(q, int(idx))] = float(val)
        # the reference file records the window its energies were solved in
        n_frozen = int(ref_rows[("n_frozen", 0)])
        n_active = int(ref_rows[("n_active_orbitals", 0)])
        n_elec = int(ref_rows[("n_active_electrons", 0)])
        sel = ActiveSpaceSelection(
            active_indices=list(range(n_frozen, n_frozen + n_active)),
            frozen_occupied=list(range(n_frozen)),
            discarded_virtual=list(range(n_frozen + n_active,
                                         ints.n_orbitals)),
            n_active_electrons=n_elec,
        )
        H = build_hamiltonian(freeze_core(ints, sel))
        want = sorted(
            v for (q, _), v in ref_rows.items() if q == "casci_energy"
        )
        k = len(want)
        sol = exact_eigensystem(H, k=k, sector=(n_elec, ints.ms2))
        dev = float(np.max(np.abs(np.sort(sol.energies[:k])
                                  - np.array(want))))
        leg = dev < 1e-8
        ok = ok and leg
        parts.append(f"{stem}: {k} roots dev {dev:.1e}"
                     + ("" if leg else " [out of bounds]"))
    ws = space("h2o_cas44")
    man, sol, psi0 = ws.qeom_exact_ref()
    dip, mag = property_operators(ws.prob.properties)
    recs = transition_moments(dip, mag, man, sol, psi0)
    worst_r = max(abs(r.R) for r in recs)
    leg = worst_r < 1e-8
    ok = ok and leg
    parts.append(f"h2o_cas44 mirror-plane max |R| {worst_r:.1e}")
    finish(11, ok, "; ".join(parts))
