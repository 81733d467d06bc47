"""Command-line front end: geometry file in, three integral files out."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .export import ExportRequest, export_problem
from .scf import ScfError


def parse_geometry(text: str):
    """Element symbols and Angstrom coordinates from simple xyz-style text.

    Each noncomment line reads `symbol x y z`. Blank lines and lines
    starting with # are skipped; a leading atom-count line is tolerated.
    """
    symbols: list[str] = []
    coords: list[tuple[float, float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 1 and tokens[0].isdigit() and not symbols:
            continue
        if len(tokens) != 4:
            raise ScfError(
                f"geometry line {lineno}: expected 'symbol x y z', got {raw!r}"
            )
        try:
            xyz = (float(tokens[1]), float(tokens[2]), float(tokens[3]))
        except ValueError as exc:
            raise ScfError(f"geometry line {lineno}: bad coordinate") from exc
        symbols.append(tokens[0])
        coords.append(xyz)
    if not symbols:
        raise ScfError("geometry file holds no atoms")
    return symbols, coords


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scfexport",
        description="Export FCIDUMP, property integrals, and classical "
        "reference energies for a molecule",
    )
    parser.add_argument("geometry", help="xyz-style geometry file (Angstrom)")
    parser.add_argument("--basis", default="sto-3g")
    parser.add_argument("--n-active-electrons", type=int, default=None)
    parser.add_argument("--n-active-orbitals", type=int, default=None)
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument(
        "--origin",
        default="0,0,0",
        help="gauge origin in Angstrom, comma-separated",
    )
    parser.add_argument(
        "--full-space",
        action="store_true",
        help="write full-orbital files; the active window only sets the "
        "reference energies",
    )
    parser.add_argument("--nroots", type=int, default=8)
    parser.add_argument(
        "--out-prefix",
        required=True,
        help="writes <prefix>.fcidump, <prefix>.props, <prefix>.ref.csv",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.geometry).read_text()
    except OSError as exc:
        print(f"scfexport: {exc}", file=sys.stderr)
        return 2
    try:
        symbols, coords = parse_geometry(text)
        origin = tuple(float(t) for t in args.origin.split(","))
        if len(origin) != 3:
            raise ScfError(f"origin needs three components, got {args.origin!r}")
        command = "scfexport " + " ".join(
            argv if argv is not None else sys.argv[1:]
        )
        req = ExportRequest(
            symbols=symbols,
            coords=coords,
            basis=args.basis,
            n_active_electrons=args.n_active_electrons,
            n_active_orbitals=args.n_active_orbitals,
            epsilon=args.epsilon,
            gauge_origin=origin,
            full_space_files=args.full_space,
            nroots=args.nroots,
            comment=f"generated by: {command}",
        )
        result = export_problem(req)
    except (ScfError, ValueError) as exc:
        print(f"scfexport: {exc}", file=sys.stderr)
        return 1
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{prefix}.fcidump").write_text(result.fcidump_text)
    Path(f"{prefix}.props").write_text(result.property_text)
    Path(f"{prefix}.ref.csv").write_text(result.reference_text)
    print(
        f"scf {result.scf_energy:.10f}  casci[0] {result.casci[0]:.10f}  "
        f"active {result.active}  frozen {result.frozen}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
