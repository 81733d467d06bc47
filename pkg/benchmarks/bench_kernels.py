"""Time the two statevector kernel backends on the hot paths.

Backend choice is frozen at import, so each timing runs in a child
process with CHIROPT_KERNELS set. The parent merges the rows into one
CSV with a numpy/numba wall-time ratio per workload. A first warmup
call per workload keeps JIT compilation out of the timings.

Usage: python3 benchmarks/bench_kernels.py [--qubits 16] [--terms 400]
       [--layers 3] [--repeats 3] [--out results.csv]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

BACKENDS = ("numpy", "numba")
WORKLOADS = ("circuit", "expectation", "apply_operator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=16)
    parser.add_argument("--terms", type=int, default=400)
    parser.add_argument("--layers", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--out", default="-", help="CSV path, - for stdout")
    parser.add_argument("--worker", choices=BACKENDS, help=argparse.SUPPRESS)
    return parser


def run_worker(args) -> None:
    import numpy as np

    from chiropt import _kernels
    from chiropt.operators import QubitOperator
    from chiropt.simulator import (
        Statevector,
        apply_circuit,
        apply_operator,
        expectation,
    )
    from chiropt.vqe import AnsatzSpec, build_ansatz

    if _kernels.BACKEND != args.worker:
        print(f"backend {args.worker} unavailable", file=sys.stderr)
        sys.exit(3)

    n = args.qubits
    rng = np.random.default_rng(7)
    terms = {}
    while len(terms) < args.terms:
        key = (int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))
        if key not in terms:
            terms[key] = complex(rng.normal(), 0.0)
    op = QubitOperator(n, terms).require_real()
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    state = Statevector(n, amps)

    spec = AnsatzSpec(
        n_qubits=n, layers=args.layers, occupied_modes=list(range(n // 2))
    )
    circ = build_ansatz(spec)
    theta = rng.uniform(-0.1, 0.1, spec.n_params)
    ref = Statevector.basis_state(n, spec.occupied_modes)

    tasks = {
        "circuit": lambda: apply_circuit(circ, theta, ref),
        "expectation": lambda: expectation(op, state),
        "apply_operator": lambda: apply_operator(op, state),
    }
    for name in WORKLOADS:
        fn = tasks[name]
        fn()
        best = min(
            _timed(fn) for _ in range(args.repeats)
        )
        print(f"{args.worker},{name},{best * 1e3:.3f}")


def _timed(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.worker:
        run_worker(args)
        return 0

    results: dict[str, dict[str, float]] = {}
    for backend in BACKENDS:
        env = dict(os.environ, CHIROPT_KERNELS=backend)
        cmd = [
            sys.executable, os.path.abspath(__file__),
            "--worker", backend,
            "--qubits", str(args.qubits),
            "--terms", str(args.terms),
            "--layers", str(args.layers),
            "--repeats", str(args.repeats),
        ]
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"{backend} run failed: {proc.stderr.strip()}", file=sys.stderr)
            continue
        for line in proc.stdout.splitlines():
            b, name, ms = line.split(",")
            results.setdefault(name, {})[b] = float(ms)

    lines = ["workload,qubits,terms,numpy_ms,numba_ms,numpy_over_numba"]
    for name in WORKLOADS:
        row = results.get(name, {})
        np_ms = row.get("numpy")
        nb_ms = row.get("numba")
        ratio = (
            f"{np_ms / nb_ms:.2f}" if np_ms and nb_ms else "n/a"
        )
        fmt = lambda v: f"{v:.3f}" if v is not None else "n/a"
        lines.append(
            f"{name},{args.qubits},{args.terms},"
            f"{fmt(np_ms)},{fmt(nb_ms)},{ratio}"
        )
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
