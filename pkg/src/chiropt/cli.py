"""Command-line pipeline from integral files to ECD spectra.

Subcommands cover each stage: vqe (reference state), qeom (excitation
energies), ecd (transition moments and broadened spectrum), oracle
(dense sector energies), and bench-shards (expectation-value scaling).
Later stages load the serialized artifacts of earlier ones from the
output directory when present and recompute them when absent, so a
pipeline can be resumed stage by stage or run end to end with one
command. All randomness flows from the single config seed and repeated
runs produce byte-identical CSV files.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import subprocess
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .chiroptics import (
    DEFAULT_SIGMA_EV,
    build_spectrum,
    property_operators,
    spectrum_csv,
    transition_moments,
    transitions_csv,
)
from .errors import (
    ChiroptError,
    ComputeError,
    ConfigError,
    DimensionError,
    ParseError,
    SelectionError,
)
from .model_io import (
    ActiveSpaceProblem,
    freeze_core,
    full_space_selection,
    parse_fcidump,
    parse_property_integrals,
    select_active_space,
)
from .operators import QubitOperator, build_hamiltonian
from .oracle import DEFAULT_ORACLE_QUBITS, exact_eigensystem
from .qeom import (
    ExcitationManifold,
    QeomSolution,
    QeomState,
    assemble_matrices,
    generate_manifold,
    half_applications,
    solution_csv,
    solve_secular,
    truncate_manifold,
)
from .simulator import (
    Statevector,
    apply_circuit,
    expectation_sharded,
    plan_shards,
)
from .vqe import (
    DEFAULT_LAYERS,
    DEFAULT_MAX_ITER,
    DEFAULT_PENALTY,
    DEFAULT_TOL,
    AnsatzSpec,
    build_ansatz,
    hf_occupied_modes,
    minimize_energy,
)

EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_COMPUTE = 4

METADATA_FILE = "metadata.txt"
VQE_FILES = ("vqe_energy.csv", "vqe_theta.csv", "vqe_history.csv")
QEOM_FILES = ("qeom_states.csv", "qeom_amplitudes.csv")


@dataclass
class RunConfig:
    fcidump_path: str | None = None
    properties_path: str | None = None
    occupations: list[float] | None = None
    epsilon: float = 0.02
    layers: int = DEFAULT_LAYERS
    entanglement: str = "circular"
    seed: int = 0
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    penalty: float = DEFAULT_PENALTY
    keep: int = 0
    tda: bool = False
    omega_min: float = 1e-6
    sigma: float = DEFAULT_SIGMA_EV
    grid_min: float = 0.0
    grid_max: float = 20.0
    grid_step: float = 0.05
    reference: str = "vqe"
    shards: int = 1
    out: str = "out"
    bench_ks: list[int] | None = None
    bench_qubits: int = 16
    bench_terms: int = 600

    def validate(self, stage: str) -> None:
        if stage != "bench-shards" and self.fcidump_path is None:
            raise ConfigError("an FCIDUMP input file is required (--fcidump)")
        for label, path in (
            ("fcidump", self.fcidump_path),
            ("properties", self.properties_path),
        ):
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{label} file not found: {path}")
        if stage == "ecd" and self.properties_path is None:
            raise ConfigError(
                "ecd requires a property integrals file (--properties)"
            )
        if self.layers < 0:
            raise ConfigError(f"layers must be >= 0, got {self.layers}")
        if self.entanglement not in ("linear", "circular"):
            raise ConfigError(
                f"entanglement must be linear or circular, got {self.entanglement!r}"
            )
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max-iter must be >= 1, got {self.max_iter}")
        if self.penalty < 0:
            raise ConfigError(f"penalty must be >= 0, got {self.penalty}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.keep < 0:
            raise ConfigError(f"keep must be >= 0, got {self.keep}")
        if self.omega_min < 0:
            raise ConfigError(f"omega-min must be >= 0, got {self.omega_min}")
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.grid_step <= 0:
            raise ConfigError(f"grid-step must be positive, got {self.grid_step}")
        if self.grid_max < self.grid_min:
            raise ConfigError(
                f"grid-max {self.grid_max} is below grid-min {self.grid_min}"
            )
        if self.reference not in ("vqe", "oracle"):
            raise ConfigError(
                f"reference must be vqe or oracle, got {self.reference!r}"
            )
        if self.shards < 1:
            raise ConfigError(f"shards must be >= 1, got {self.shards}")
        if self.bench_qubits < 1:
            raise ConfigError(f"bench-qubits must be >= 1, got {self.bench_qubits}")
        if self.bench_terms < 1:
            raise ConfigError(f"bench-terms must be >= 1, got {self.bench_terms}")
        if self.bench_ks is not None and any(k < 1 for k in self.bench_ks):
            raise ConfigError(f"bench-ks entries must be >= 1, got {self.bench_ks}")


_CONFIG_SECTIONS = {
    "input": {"fcidump": "fcidump_path", "properties": "properties_path"},
    "active-space": {"occupations": "occupations", "epsilon": "epsilon"},
    "ansatz": {
        "layers": "layers",
        "entanglement": "entanglement",
        "seed": "seed",
        "tol": "tol",
        "max-iter": "max_iter",
        "penalty": "penalty",
    },
    "qeom": {"keep": "keep", "tda": "tda", "omega-min": "omega_min"},
    "spectrum": {
        "sigma": "sigma",
        "grid-min": "grid_min",
        "grid-max": "grid_max",
        "grid-step": "grid_step",
    },
    "run": {"reference": "reference", "shards": "shards", "out": "out"},
    "bench": {
        "ks": "bench_ks",
        "qubits": "bench_qubits",
        "terms": "bench_terms",
    },
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_occupations(raw: str) -> list[float]:
    tokens = raw.replace(",", " ").split()
    if not tokens:
        raise ConfigError("occupations list is empty")
    try:
        return [float(t) for t in tokens]
    except ValueError as exc:
        raise ConfigError(f"bad occupation value in {raw!r}") from exc


def _parse_ks(raw: str) -> list[int]:
    tokens = raw.replace(",", " ").split()
    try:
        ks = [int(t) for t in tokens]
    except ValueError as exc:
        raise ConfigError(f"bad shard count in {raw!r}") from exc
    if not ks:
        raise ConfigError("bench shard list is empty")
    return ks


def _coerce(field: str, raw: str):
    raw = raw.strip()
    if field == "occupations":
        return _parse_occupations(raw)
    if field == "bench_ks":
        return _parse_ks(raw)
    if field in ("fcidump_path", "properties_path", "entanglement", "reference", "out"):
        return raw
    if field == "tda":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"tda must be boolean, got {raw!r}")
    try:
        if field in ("layers", "seed", "max_iter", "keep", "shards",
                     "bench_qubits", "bench_terms"):
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value {raw!r} for config key {field}") from exc


def load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if not read:
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    for section in parser.sections():
        if section not in _CONFIG_SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        keymap = _CONFIG_SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in keymap:
                raise ConfigError(f"unknown config key {key!r} in [{section}]")
            values[keymap[key]] = _coerce(keymap[key], raw)
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiropt",
        description="Variational excited-state pipeline for circular dichroism",
    )
    parser.add_argument("--version", action="version", version=f"chiropt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="INI config file; flags override its values")
        p.add_argument("--fcidump", dest="fcidump_path")
        p.add_argument("--properties", dest="properties_path")
        p.add_argument("--occupations", help="comma-separated natural occupations")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--layers", type=int)
        p.add_argument("--entanglement", choices=["linear", "circular"])
        p.add_argument("--seed", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--max-iter", dest="max_iter", type=int)
        p.add_argument("--penalty", type=float)
        p.add_argument("--keep", type=int)
        p.add_argument("--tda", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--omega-min", dest="omega_min", type=float)
        p.add_argument("--sigma", type=float)
        p.add_argument("--grid-min", dest="grid_min", type=float)
        p.add_argument("--grid-max", dest="grid_max", type=float)
        p.add_argument("--grid-step", dest="grid_step", type=float)
        p.add_argument("--reference", choices=["vqe", "oracle"])
        p.add_argument("--shards", type=int)
        p.add_argument("--out")
        p.add_argument("--bench-ks", dest="bench_ks")
        p.add_argument("--bench-qubits", dest="bench_qubits", type=int)
        p.add_argument("--bench-terms", dest="bench_terms", type=int)

    for name, doc in (
        ("vqe", "optimize the variational reference state"),
        ("qeom", "solve the excitation secular problem"),
        ("ecd", "compute transition moments and the broadened spectrum"),
        ("oracle", "dense sector eigenvalues within the size guardrail"),
        ("bench-shards", "time sharded expectation values"),
    ):
        add_common(sub.add_parser(name, help=doc))
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for field in _FIELD_TYPES:
        flag_value = getattr(args, field, None)
        if flag_value is None:
            continue
        if field == "occupations":
            values[field] = _parse_occupations(flag_value)
        elif field == "bench_ks":
            values[field] = _parse_ks(flag_value)
        else:
            values[field] = flag_value
    return RunConfig(**values)


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=10,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"chiropt {__version__}+g{out.stdout.strip().lstrip('v')}"
    except OSError:
        pass
    return f"chiropt {__version__}"


def write_metadata(config: RunConfig, out_dir: Path) -> None:
    lines = [f"version = {version_string()}"]
    for field in sorted(_FIELD_TYPES):
        value = getattr(config, field)
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        lines.append(f"config.{field} = {value}")
    for label, path in (
        ("fcidump", config.fcidump_path),
        ("properties", config.properties_path),
    ):
        if path is not None:
            lines.append(f"checksum.{label} = sha256:{_sha256(path)}")
    (out_dir / METADATA_FILE).write_text("\n".join(lines) + "\n")


def load_problem(config: RunConfig) -> tuple[ActiveSpaceProblem, int]:
    """Active-space problem and its spin sector from the input files."""
    try:
        text = Path(config.fcidump_path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {config.fcidump_path}: {exc}") from exc
    ints = parse_fcidump(text)
    props = None
    if config.properties_path is not None:
        try:
            ptext = Path(config.properties_path).read_text()
        except OSError as exc:
            raise ConfigError(
                f"cannot read {config.properties_path}: {exc}"
            ) from exc
        props = parse_property_integrals(ptext)
    if config.occupations is not None:
        if len(config.occupations) != ints.n_orbitals:
            raise ConfigError(
                f"{len(config.occupations)} occupations given for "
                f"{ints.n_orbitals} orbitals"
            )
        sel = select_active_space(
            np.asarray(config.occupations), config.epsilon, ints.n_electrons
        )
    else:
        sel = full_space_selection(ints.n_orbitals, ints.n_electrons)
    return freeze_core(ints, sel, props), ints.ms2


def _ansatz_spec(config: RunConfig, prob: ActiveSpaceProblem) -> AnsatzSpec:
    n_qubits = 2 * prob.n_active_orbitals
    return AnsatzSpec(
        n_qubits=n_qubits,
        layers=config.layers,
        entanglement=config.entanglement,
        occupied_modes=tuple(
            hf_occupied_modes(prob.n_active_orbitals, prob.n_active_electrons)
        ),
    )


def _check_oracle_size(prob: ActiveSpaceProblem) -> None:
    n_qubits = 2 * prob.n_active_orbitals
    if n_qubits > DEFAULT_ORACLE_QUBITS:
        raise ConfigError(
            f"reference=oracle needs {n_qubits} qubits, above the "
            f"{DEFAULT_ORACLE_QUBITS}-qubit dense guardrail; use reference=vqe"
        )


def _artifacts_present(out_dir: Path, names: tuple[str, ...], producer: str) -> bool:
    present = [n for n in names if (out_dir / n).is_file()]
    if not present:
        return False
    if len(present) < len(names):
        missing = ", ".join(sorted(set(names) - set(present)))
        raise ConfigError(
            f"output directory {out_dir} holds partial `{producer}` artifacts "
            f"(missing {missing}); re-run the `{producer}` subcommand"
        )
    return True


def _write_vqe_artifacts(out_dir: Path, result) -> None:
    (out_dir / "vqe_energy.csv").write_text(
        "energy_hartree, converged, n_evals\n"
        f"{result.energy:.17e}, {int(result.converged)}, {result.iterations}\n"
    )
    lines = ["param_index, value"]
    for i, v in enumerate(result.theta_opt):
        lines.append(f"{i}, {v:.17e}")
    (out_dir / "vqe_theta.csv").write_text("\n".join(lines) + "\n")
    lines = ["eval_index, energy_hartree"]
    for i, e in enumerate(result.energy_history):
        lines.append(f"{i}, {e:.17e}")
    (out_dir / "vqe_history.csv").write_text("\n".join(lines) + "\n")


def _load_theta(out_dir: Path, expected: int) -> np.ndarray:
    rows = (out_dir / "vqe_theta.csv").read_text().splitlines()
    values = []
    for line in rows[1:]:
        if not line.strip():
            continue
        idx_str, val_str = (tok.strip() for tok in line.split(","))
        if int(idx_str) != len(values):
            raise ConfigError(
                "vqe_theta.csv rows out of order; re-run the `vqe` subcommand"
            )
        values.append(float(val_str))
    if len(values) != expected:
        raise ConfigError(
            f"vqe_theta.csv holds {len(values)} parameters but the configured "
            f"ansatz has {expected}; re-run the `vqe` subcommand"
        )
    return np.array(values)


def _ensure_reference(
    config: RunConfig,
    H: QubitOperator,
    prob: ActiveSpaceProblem,
    ms2: int,
    out_dir: Path,
) -> Statevector:
    """Reference state for excitation stages, from cache or fresh compute.

    With reference=vqe the optimized parameters are persisted, then always
    read back and replayed through the circuit so cached and fresh runs
    share one code path. reference=oracle recomputes deterministically.
    """
    if config.reference == "oracle":
        _check_oracle_size(prob)
        sol = exact_eigensystem(
            H, k=1, sector=(prob.n_active_electrons, ms2)
        )
        return sol.states[0]
    spec = _ansatz_spec(config, prob)
    if not _artifacts_present(out_dir, VQE_FILES, "vqe"):
        result = minimize_energy(
            H,
            spec,
            seed=config.seed,
            tol=config.tol,
            max_iter=config.max_iter,
            penalty_lambda=config.penalty,
            shards=config.shards,
        )
        _write_vqe_artifacts(out_dir, result)
    theta = _load_theta(out_dir, spec.n_params)
    circuit = build_ansatz(spec)
    return apply_circuit(circuit, theta, Statevector.zero_state(spec.n_qubits))


def _problem_manifold(
    config: RunConfig,
    prob: ActiveSpaceProblem,
    ms2: int,
) -> ExcitationManifold:
    if prob.n_active_electrons % 2 != 0 or ms2 != 0:
        raise ConfigError(
            "the excitation manifold needs a closed-shell reference "
            f"(got {prob.n_active_electrons} electrons, MS2={ms2})"
        )
    n_occ = prob.n_active_electrons // 2
    n_vir = prob.n_active_orbitals - n_occ
    if n_vir < 1:
        raise ConfigError(
            f"no virtual orbitals: {prob.n_active_orbitals} active orbitals "
            f"for {prob.n_active_electrons} electrons"
        )
    return generate_manifold(n_occ, n_vir)


def _write_qeom_artifacts(
    out_dir: Path, sol: QeomSolution, manifold: ExcitationManifold
) -> None:
    (out_dir / "qeom_states.csv").write_text(solution_csv(sol))
    lines = ["state_index, omega_hartree, norm, operator_index, operator_label, c, d"]
    for k, st in enumerate(sol.states):
        for nu, op in enumerate(manifold.operators):
            lines.append(
                f"{k}, {st.omega:.17e}, {st.norm:.17e}, {nu}, {op.label()}, "
                f"{st.c[nu]:.17e}, {st.d[nu]:.17e}"
            )
    (out_dir / "qeom_amplitudes.csv").write_text("\n".join(lines) + "\n")


def _load_qeom_artifacts(
    out_dir: Path, full: ExcitationManifold, tda: bool
) -> tuple[QeomSolution, ExcitationManifold]:
    """Rebuild the solved states and their manifold from the amplitude table.

    The serialized operator labels select which manifold operators the run
    retained, so a truncated run reloads onto the identical subspace.
    """
    rows = (out_dir / "qeom_amplitudes.csv").read_text().splitlines()
    by_label = {op.label(): op for op in full.operators}
    labels: list[str] = []
    states: dict[int, dict] = {}
    for line in rows[1:]:
        if not line.strip():
            continue
        # the label field may itself contain commas, so split around it
        head = [tok.strip() for tok in line.split(",", 4)]
        if len(head) != 5:
            raise ConfigError(
                "qeom_amplitudes.csv row is malformed; re-run the `qeom` subcommand"
            )
        tail = [tok.strip() for tok in head[4].rsplit(",", 2)]
        if len(tail) != 3:
            raise ConfigError(
                "qeom_amplitudes.csv row is malformed; re-run the `qeom` subcommand"
            )
        parts = head[:4] + tail
        k = int(parts[0])
        nu = int(parts[3])
        label = parts[4]
        if label not in by_label:
            raise ConfigError(
                f"qeom_amplitudes.csv names unknown operator {label!r}; "
                "re-run the `qeom` subcommand"
            )
        if nu == len(labels):
            labels.append(label)
        elif nu > len(labels) or labels[nu] != label:
            raise ConfigError(
                "qeom_amplitudes.csv operator table is inconsistent; "
                "re-run the `qeom` subcommand"
            )
        entry = states.setdefault(
            k, {"omega": float(parts[1]), "norm": float(parts[2]), "c": {}, "d": {}}
        )
        entry["c"][nu] = float(parts[5])
        entry["d"][nu] = float(parts[6])

    ops = [by_label[lab] for lab in labels]
    manifold = ExcitationManifold(
        operators=ops,
        n_occ_spatial=full.n_occ_spatial,
        n_vir_spatial=full.n_vir_spatial,
    )
    M = len(ops)
    out_states: list[QeomState] = []
    for k in sorted(states):
        entry = states[k]
        if len(entry["c"]) != M or len(entry["d"]) != M:
            raise ConfigError(
                f"qeom_amplitudes.csv state {k} is incomplete; "
                "re-run the `qeom` subcommand"
            )
        c = np.array([entry["c"][nu] for nu in range(M)])
        d = np.array([entry["d"][nu] for nu in range(M)])
        out_states.append(
            QeomState(omega=entry["omega"], c=c, d=d, norm=entry["norm"])
        )
    sol = QeomSolution(
        states=out_states, n_exc=M, discarded_metric_dim=0, tda=tda
    )
    return sol, manifold


def _solve_qeom(
    config: RunConfig,
    H: QubitOperator,
    manifold: ExcitationManifold,
    psi0: Statevector,
) -> tuple[QeomSolution, ExcitationManifold]:
    if config.keep > 0:
        manifold = truncate_manifold(manifold, H, psi0, config.keep)
    cache = half_applications(manifold, psi0, H=H)
    mats = assemble_matrices(H, manifold, psi0, cache=cache)
    sol = solve_secular(
        mats, omega_min=config.omega_min, tda=config.tda
    )
    return sol, manifold


def cmd_vqe(config: RunConfig, out_dir: Path) -> int:
    prob, _ = load_problem(config)
    H = build_hamiltonian(prob)
    spec = _ansatz_spec(config, prob)
    result = minimize_energy(
        H,
        spec,
        seed=config.seed,
        tol=config.tol,
        max_iter=config.max_iter,
        penalty_lambda=config.penalty,
        shards=config.shards,
    )
    _write_vqe_artifacts(out_dir, result)
    write_metadata(config, out_dir)
    print(
        f"vqe: energy {result.energy:.12f} Ha, converged={result.converged}, "
        f"{result.iterations} evaluations"
    )
    return 0


def cmd_qeom(config: RunConfig, out_dir: Path) -> int:
    prob, ms2 = load_problem(config)
    if config.reference == "oracle":
        _check_oracle_size(prob)
    H = build_hamiltonian(prob)
    manifold = _problem_manifold(config, prob, ms2)
    psi0 = _ensure_reference(config, H, prob, ms2, out_dir)
    sol, manifold = _solve_qeom(config, H, manifold, psi0)
    _write_qeom_artifacts(out_dir, sol, manifold)
    write_metadata(config, out_dir)
    print(
        f"qeom: {len(sol.states)} states from {len(manifold)} operators, "
        f"{sol.discarded_metric_dim} metric directions discarded"
    )
    return 0


def cmd_ecd(config: RunConfig, out_dir: Path) -> int:
    prob, ms2 = load_problem(config)
    if prob.properties is None:
        raise ConfigError(
            "ecd requires a property integrals file (--properties)"
        )
    if config.reference == "oracle":
        _check_oracle_size(prob)
    H = build_hamiltonian(prob)
    full = _problem_manifold(config, prob, ms2)
    psi0 = _ensure_reference(config, H, prob, ms2, out_dir)
    if not _artifacts_present(out_dir, QEOM_FILES, "qeom"):
        sol, manifold = _solve_qeom(config, H, full, psi0)
        _write_qeom_artifacts(out_dir, sol, manifold)
    sol, manifold = _load_qeom_artifacts(out_dir, full, config.tda)
    dipole_ops, magnetic_ops = property_operators(prob.properties)
    records = transition_moments(
        dipole_ops,
        magnetic_ops,
        manifold,
        sol,
        psi0,
        include_backward=not config.tda,
    )
    (out_dir / "transitions.csv").write_text(transitions_csv(records))
    n_points = int(np.floor((config.grid_max - config.grid_min) / config.grid_step))
    grid = config.grid_min + config.grid_step * np.arange(n_points + 1)
    spectrum = build_spectrum(records, grid, sigma_ev=config.sigma)
    (out_dir / "spectrum.csv").write_text(spectrum_csv(spectrum))
    write_metadata(config, out_dir)
    print(
        f"ecd: {len(records)} transitions, spectrum on {grid.size} grid points"
    )
    return 0


def cmd_oracle(config: RunConfig, out_dir: Path) -> int:
    prob, ms2 = load_problem(config)
    _check_oracle_size(prob)
    H = build_hamiltonian(prob)
    sector = (prob.n_active_electrons, ms2)
    sol = exact_eigensystem(H, k=1 << (2 * prob.n_active_orbitals), sector=sector)
    lines = ["state_index, energy_hartree"]
    for i, e in enumerate(sol.energies):
        lines.append(f"{i}, {e:.17e}")
    csv = "\n".join(lines) + "\n"
    (out_dir / "oracle_energies.csv").write_text(csv)
    write_metadata(config, out_dir)
    print(csv, end="")
    return 0


def _bench_operator(config: RunConfig) -> tuple[QubitOperator, Statevector]:
    """Benchmark workload: the configured problem or a seeded synthetic one."""
    if config.fcidump_path is not None:
        prob, _ = load_problem(config)
        H = build_hamiltonian(prob)
        n = H.n_qubits
        rng = np.random.default_rng(config.seed)
    else:
        n = config.bench_qubits
        rng = np.random.default_rng(config.seed)
        terms: dict[tuple[int, int], complex] = {}
        while len(terms) < config.bench_terms:
            x = int(rng.integers(0, 1 << n))
            z = int(rng.integers(0, 1 << n))
            if (x, z) not in terms:
                terms[(x, z)] = complex(rng.normal(), 0.0)
        H = QubitOperator(n, terms).require_real()
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return H, Statevector(n, amps)


def cmd_bench_shards(config: RunConfig, out_dir: Path) -> int:
    ks = config.bench_ks if config.bench_ks is not None else [1, 2, 4]
    H, state = _bench_operator(config)
    rows = []
    values = []
    for k in ks:
        plan = plan_shards(H, k)
        value = expectation_sharded(H, plan, state, workers=k)
        start = time.perf_counter()
        value = expectation_sharded(H, plan, state, workers=k)
        wall_ms = (time.perf_counter() - start) * 1e3
        rows.append((k, wall_ms))
        values.append(value)
    spread = max(values) - min(values)
    if spread > 1e-10:
        raise ComputeError(
            f"sharded expectation values disagree across k by {spread:.3e}"
        )
    base = rows[0][1]
    lines = ["k,wall_ms,speedup"]
    for k, wall_ms in rows:
        lines.append(f"{k},{wall_ms:.3f},{base / wall_ms:.3f}")
    csv = "\n".join(lines) + "\n"
    (out_dir / "bench_shards.csv").write_text(csv)
    write_metadata(config, out_dir)
    print(csv, end="")
    return 0


_COMMANDS = {
    "vqe": cmd_vqe,
    "qeom": cmd_qeom,
    "ecd": cmd_ecd,
    "oracle": cmd_oracle,
    "bench-shards": cmd_bench_shards,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        config.validate(args.command)
        out_dir = Path(config.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](config, out_dir)
    except (ParseError, DimensionError) as exc:
        print(f"chiropt: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, SelectionError) as exc:
        print(f"chiropt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ComputeError as exc:
        print(f"chiropt: compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ChiroptError as exc:
        print(f"chiropt: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
