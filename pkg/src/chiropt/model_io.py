"""Integral file parsing, active-space selection, and frozen-core folding.

Two text formats are supported: the FCIDUMP interchange format for the
electronic Hamiltonian and a line-based property format for electric and
magnetic dipole integrals. Both round-trip through their writers with
canonical record ordering.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionError,
    IntegralConsistencyError,
    IntegralRangeError,
    ParseError,
    SelectionError,
)

SYMMETRY_TOL = 1e-12
DUPLICATE_TOL = 1e-10
AXES = ("X", "Y", "Z")


@dataclass
class SpatialIntegrals:
    """Spin-free molecular integrals over a set of spatial orbitals.

    The two-electron tensor g holds chemists' (pq|rs) values with the full
    8-fold permutational symmetry filled in.
    """

    n_orbitals: int
    n_electrons: int
    ms2: int
    core_energy: float
    h: np.ndarray
    g: np.ndarray

    def validate(self) -> None:
        n = self.n_orbitals
        if self.h.shape != (n, n) or self.g.shape != (n, n, n, n):
            raise DimensionError("integral arrays do not match n_orbitals")
        if not 0 < self.n_electrons <= 2 * n:
            raise SelectionError(
                f"n_electrons={self.n_electrons} outside (0, {2 * n}]"
            )
        if np.max(np.abs(self.h - self.h.T)) > SYMMETRY_TOL:
            raise ParseError("one-electron matrix is not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(self.g - self.g.transpose(perm))) > SYMMETRY_TOL:
                raise ParseError("two-electron tensor lacks 8-fold symmetry")


@dataclass
class PropertyIntegrals:
    """One-electron property matrices over the same orbitals as the Hamiltonian.

    d holds the three Cartesian electric-dipole matrices in e*Bohr. m_imag
    holds the real antisymmetric part M of the magnetic-dipole matrices; the
    physical matrix elements are i*M.
    """

    n_orbitals: int
    d: np.ndarray
    m_imag: np.ndarray
    gauge_origin: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def validate(self) -> None:
        n = self.n_orbitals
        if self.d.shape != (3, n, n) or self.m_imag.shape != (3, n, n):
            raise DimensionError("property arrays do not match n_orbitals")
        for a in range(3):
            if np.max(np.abs(self.d[a] - self.d[a].T)) > SYMMETRY_TOL:
                raise ParseError(f"dipole matrix {AXES[a]} is not symmetric")
            if np.max(np.abs(self.m_imag[a] + self.m_imag[a].T)) > SYMMETRY_TOL:
                raise ParseError(
                    f"angular-momentum matrix {AXES[a]} is not antisymmetric"
                )


@dataclass
class ActiveSpaceSelection:
    active_indices: list[int]
    frozen_occupied: list[int]
    discarded_virtual: list[int]
    n_active_electrons: int


@dataclass
class ActiveSpaceProblem:
    """The electronic problem restricted to the active orbitals."""

    n_active_orbitals: int
    n_active_electrons: int
    effective_core_energy: float
    h_eff: np.ndarray
    g_act: np.ndarray
    properties: PropertyIntegrals | None = None


def _parse_float(token: str) -> float:
    # Fortran exponent letters appear in files written by other codes
    return float(token.replace("D", "E").replace("d", "e"))


_HEADER_KEY_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z][A-Za-z0-9_]*\s*=)|$)")


def parse_fcidump(text: str) -> SpatialIntegrals:
    """Parse FCIDUMP text into SpatialIntegrals.

    Records list `value i j k l` with 1-based indices. A record with all
    four indices zero sets the core energy, (i j 0 0) sets h, anything
    else sets the chemists' two-electron slot (ij|kl) and its 7 symmetry
    images. Unknown namelist keys are ignored.
    """
    lines = text.splitlines()
    header_parts: list[str] = []
    body_start = None
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not header_parts:
            if not stripped:
                continue
            if not stripped.upper().startswith("&FCI"):
                raise ParseError("expected '&FCI' namelist header", line=ln)
            stripped = stripped[4:]
        m = re.search(r"(&END|/)", stripped, flags=re.IGNORECASE)
        if m:
            header_parts.append(stripped[: m.start()])
            body_start = ln
            break
        header_parts.append(stripped)
    else:
        raise ParseError(
            "namelist header never terminated by '&END' or '/'", line=len(lines)
        )

    header = " ".join(header_parts)
    keys: dict[str, str] = {}
    for m in _HEADER_KEY_RE.finditer(header):
        keys[m.group(1).upper()] = m.group(2).strip().rstrip(",").strip()

    def _int_key(name: str, required: bool, default: int = 0) -> int:
        if name not in keys:
            if required:
                raise ParseError(f"missing {name} in namelist header", line=body_start)
            return default
        try:
            return int(keys[name])
        except ValueError as exc:
            raise ParseError(f"bad {name} value {keys[name]!r}", line=body_start) from exc

    n = _int_key("NORB", required=True)
    n_electrons = _int_key("NELEC", required=True)
    ms2 = _int_key("MS2", required=False)
    if n <= 0:
        raise ParseError(f"NORB must be positive, got {n}", line=body_start)

    h = np.zeros((n, n))
    g = np.zeros((n, n, n, n))
    core = 0.0
    seen_h: dict[tuple[int, int], float] = {}
    seen_g: dict[tuple[int, int, int, int], float] = {}
    seen_core: float | None = None

    for ln in range(body_start + 1, len(lines) + 1):
        stripped = lines[ln - 1].strip()
        if not stripped:
            continue
        tokens = stripped.split()
        if len(tokens) != 5:
            raise ParseError(
                f"expected 'value i j k l', got {len(tokens)} tokens", line=ln
            )
        try:
            value = _parse_float(tokens[0])
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError as exc:
            raise ParseError(f"unparseable record {stripped!r}", line=ln) from exc

        if i == j == k == l == 0:
            if seen_core is not None and abs(seen_core - value) > DUPLICATE_TOL:
                raise IntegralConsistencyError(
                    f"core energy {value} conflicts with {seen_core}", line=ln
                )
            if seen_core is None:
                seen_core = value
                core = value
        elif k == 0 and l == 0:
            for idx in (i, j):
                if not 1 <= idx <= n:
                    raise IntegralRangeError(
                        f"orbital index {idx} outside [1, {n}]", line=ln
                    )
            key = (min(i, j) - 1, max(i, j) - 1)
            if key in seen_h and abs(seen_h[key] - value) > DUPLICATE_TOL:
                raise IntegralConsistencyError(
                    f"h{key} value {value} conflicts with {seen_h[key]}", line=ln
                )
            if key not in seen_h:
                seen_h[key] = value
                h[i - 1, j - 1] = value
                h[j - 1, i - 1] = value
        else:
            for idx in (i, j, k, l):
                if not 1 <= idx <= n:
                    raise IntegralRangeError(
                        f"orbital index {idx} outside [1, {n}]", line=ln
                    )
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            key = _canonical_quad(p, q, r, s)
            if key in seen_g and abs(seen_g[key] - value) > DUPLICATE_TOL:
                raise IntegralConsistencyError(
                    f"(ij|kl){key} value {value} conflicts with {seen_g[key]}",
                    line=ln,
                )
            if key not in seen_g:
                seen_g[key] = value
                for a, b, c, d in _quad_images(p, q, r, s):
                    g[a, b, c, d] = value

    out = SpatialIntegrals(
        n_orbitals=n, n_electrons=n_electrons, ms2=ms2, core_energy=core, h=h, g=g
    )
    out.validate()
    return out


def _canonical_quad(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    a = (max(p, q), min(p, q))
    b = (max(r, s), min(r, s))
    if a < b:
        a, b = b, a
    return (*a, *b)


def _quad_images(p: int, q: int, r: int, s: int):
    return {
        (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
        (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
    }


def write_fcidump(ints: SpatialIntegrals, extra_header: dict[str, str] | None = None) -> str:
    """Serialize to FCIDUMP text with canonical record ordering.

    extra_header entries become additional namelist keys; parsers that do
    not know them skip them.
    """
    n = ints.n_orbitals
    out = [f"&FCI NORB={n},NELEC={ints.n_electrons},MS2={ints.ms2},"]
    for key, val in (extra_header or {}).items():
        out.append(f"{key}={val},")
    out.append("&END")
    quads = sorted({
        _canonical_quad(p, q, r, s)
        for p in range(n) for q in range(p + 1)
        for r in range(p + 1) for s in range(r + 1)
    })
    for p, q, r, s in quads:
        v = ints.g[p, q, r, s]
        if v != 0.0:
            out.append(_record(v, p + 1, q + 1, r + 1, s + 1))
    for p in range(n):
        for q in range(p + 1):
            v = ints.h[p, q]
            if v != 0.0:
                out.append(_record(v, p + 1, q + 1, 0, 0))
    out.append(_record(ints.core_energy, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def _record(value: float, i: int, j: int, k: int, l: int) -> str:
    return f"{value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}"


def parse_property_integrals(text: str) -> PropertyIntegrals:
    """Parse the line-based property format.

    Grammar: `NORB n`, optional `ORIGIN x y z`, then records
    `DIPOLE axis p q value` (symmetrized) and `ANGMOM axis p q value`
    (antisymmetrized). Lines starting with '#' are comments. An empty
    body is valid and yields all-zero matrices.
    """
    n: int | None = None
    origin = np.zeros(3)
    d = None
    m = None
    seen_d: dict[tuple[int, int, int], float] = {}
    seen_m: dict[tuple[int, int, int], float] = {}

    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        kw = tokens[0].upper()
        if kw == "NORB":
            if len(tokens) != 2:
                raise ParseError("NORB takes exactly one value", line=ln)
            try:
                n = int(tokens[1])
            except ValueError as exc:
                raise ParseError(f"bad NORB value {tokens[1]!r}", line=ln) from exc
            if n <= 0:
                raise ParseError(f"NORB must be positive, got {n}", line=ln)
            d = np.zeros((3, n, n))
            m = np.zeros((3, n, n))
        elif kw == "ORIGIN":
            if len(tokens) != 4:
                raise ParseError("ORIGIN takes three values", line=ln)
            try:
                origin = np.array([_parse_float(t) for t in tokens[1:]])
            except ValueError as exc:
                raise ParseError(f"unparseable ORIGIN {stripped!r}", line=ln) from exc
        elif kw in ("DIPOLE", "ANGMOM"):
            if n is None:
                raise ParseError(f"{kw} record before NORB header", line=ln)
            if len(tokens) != 5:
                raise ParseError(f"{kw} takes 'axis p q value'", line=ln)
            axis_token = tokens[1].upper()
            if axis_token not in AXES:
                raise ParseError(f"invalid axis token {tokens[1]!r}", line=ln)
            a = AXES.index(axis_token)
            try:
                p = int(tokens[2])
                q = int(tokens[3])
                value = _parse_float(tokens[4])
            except ValueError as exc:
                raise ParseError(f"unparseable record {stripped!r}", line=ln) from exc
            for idx in (p, q):
                if not 1 <= idx <= n:
                    raise IntegralRangeError(
                        f"orbital index {idx} outside [1, {n}]", line=ln
                    )
            p -= 1
            q -= 1
            if kw == "DIPOLE":
                key = (a, min(p, q), max(p, q))
                if key in seen_d and abs(seen_d[key] - value) > DUPLICATE_TOL:
                    raise IntegralConsistencyError(
                        f"DIPOLE {key} value {value} conflicts with {seen_d[key]}",
                        line=ln,
                    )
                if key not in seen_d:
                    seen_d[key] = value
                    d[a, p, q] = value
                    d[a, q, p] = value
            else:
                if p == q:
                    if abs(value) > DUPLICATE_TOL:
                        raise IntegralConsistencyError(
                            "nonzero ANGMOM diagonal breaks antisymmetry", line=ln
                        )
                    continue
                key = (a, min(p, q), max(p, q))
                signed = value if p < q else -value
                if key in seen_m and abs(seen_m[key] - signed) > DUPLICATE_TOL:
                    raise IntegralConsistencyError(
                        f"ANGMOM {key} value {signed} conflicts with {seen_m[key]}",
                        line=ln,
                    )
                if key not in seen_m:
                    seen_m[key] = signed
                    m[a, key[1], key[2]] = signed
                    m[a, key[2], key[1]] = -signed
        else:
            raise ParseError(f"unknown keyword {tokens[0]!r}", line=ln)

    if n is None:
        raise ParseError("missing NORB header", line=1)
    out = PropertyIntegrals(n_orbitals=n, d=d, m_imag=m, gauge_origin=origin)
    out.validate()
    return out


def write_property_integrals(props: PropertyIntegrals, comments: list[str] | None = None) -> str:
    n = props.n_orbitals
    out = [f"# {c}" for c in (comments or [])]
    out.append(f"NORB {n}")
    ox, oy, oz = props.gauge_origin
    out.append(f"ORIGIN {ox: .16E} {oy: .16E} {oz: .16E}")
    for a in range(3):
        for p in range(n):
            for q in range(p, n):
                v = props.d[a, p, q]
                if v != 0.0:
                    out.append(f"DIPOLE {AXES[a]} {p + 1} {q + 1} {v: .16E}")
    for a in range(3):
        for p in range(n):
            for q in range(p + 1, n):
                v = props.m_imag[a, p, q]
                if v != 0.0:
                    out.append(f"ANGMOM {AXES[a]} {p + 1} {q + 1} {v: .16E}")
    return "\n".join(out) + "\n"


def select_active_space(
    occupations, epsilon: float, n_electrons: int
) -> ActiveSpaceSelection:
    """Partition orbitals by natural occupation number.

    Orbitals with epsilon < n_i < 2 - epsilon (strict) are active; n_i at
    or above 2 - epsilon freeze; n_i at or below epsilon are discarded.
    Returned index lists refer to the caller's orbital indices, each list
    ordered by descending occupation (ties by index).
    """
    occ = np.asarray(occupations, dtype=float)
    if not 0.0 < epsilon < 1.0:
        raise SelectionError(f"epsilon={epsilon} outside (0, 1)")
    if occ.size and (occ.min() < -DUPLICATE_TOL or occ.max() > 2.0 + DUPLICATE_TOL):
        raise SelectionError("occupation numbers must lie in [0, 2]")

    order = sorted(range(occ.size), key=lambda i: (-occ[i], i))
    active = [i for i in order if epsilon < occ[i] < 2.0 - epsilon]
    frozen = [i for i in order if occ[i] >= 2.0 - epsilon]
    discarded = [i for i in order if occ[i] <= epsilon]

    n_active_electrons = n_electrons - 2 * len(frozen)
    if n_active_electrons < 0:
        raise SelectionError(
            f"{len(frozen)} frozen orbitals leave {n_active_electrons} electrons"
        )
    if n_active_electrons % 2 != 0:
        raise SelectionError(
            f"odd active electron count {n_active_electrons}; "
            "occupations are inconsistent with a closed shell"
        )
    return ActiveSpaceSelection(
        active_indices=active,
        frozen_occupied=frozen,
        discarded_virtual=discarded,
        n_active_electrons=n_active_electrons,
    )


def full_space_selection(n_orbitals: int, n_electrons: int) -> ActiveSpaceSelection:
    """Selection treating every orbital as active."""
    if n_electrons % 2 != 0:
        raise SelectionError(f"odd electron count {n_electrons} is open-shell")
    return ActiveSpaceSelection(
        active_indices=list(range(n_orbitals)),
        frozen_occupied=[],
        discarded_virtual=[],
        n_active_electrons=n_electrons,
    )


def freeze_core(
    ints: SpatialIntegrals,
    sel: ActiveSpaceSelection,
    props: PropertyIntegrals | None = None,
) -> ActiveSpaceProblem:
    """Fold frozen-orbital contributions into an effective active problem.

    The frozen orbitals contribute a constant energy shift and a mean-field
    correction to the active one-electron matrix; the two-electron tensor
    and property matrices are plain restrictions to the active indices.
    """
    act = list(sel.active_indices)
    frz = list(sel.frozen_occupied)
    if not act:
        raise SelectionError("empty active space")
    n = ints.n_orbitals
    for idx in act + frz + list(sel.discarded_virtual):
        if not 0 <= idx < n:
            raise SelectionError(f"orbital index {idx} outside [0, {n})")

    core = ints.core_energy
    for i in frz:
        core += 2.0 * ints.h[i, i]
        for j in frz:
            core += 2.0 * ints.g[i, i, j, j] - ints.g[i, j, j, i]

    na = len(act)
    h_eff = ints.h[np.ix_(act, act)].copy()
    for ti, t in enumerate(act):
        for ui, u in enumerate(act):
            for i in frz:
                h_eff[ti, ui] += 2.0 * ints.g[i, i, t, u] - ints.g[t, i, i, u]

    g_act = ints.g[np.ix_(act, act, act, act)].copy()

    restricted = None
    if props is not None:
        if props.n_orbitals != n:
            raise DimensionError(
                f"property NORB {props.n_orbitals} != integral NORB {n}"
            )
        restricted = PropertyIntegrals(
            n_orbitals=na,
            d=np.stack([props.d[a][np.ix_(act, act)] for a in range(3)]),
            m_imag=np.stack([props.m_imag[a][np.ix_(act, act)] for a in range(3)]),
            gauge_origin=props.gauge_origin.copy(),
        )

    return ActiveSpaceProblem(
        n_active_orbitals=na,
        n_active_electrons=sel.n_active_electrons,
        effective_core_energy=core,
        h_eff=h_eff,
        g_act=g_act,
        properties=restricted,
    )
