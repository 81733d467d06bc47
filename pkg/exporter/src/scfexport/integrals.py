"""Gaussian integral engine for s and p shells, McMurchie-Davidson scheme.

Covers overlap, kinetic, nuclear attraction, electron repulsion,
multipole (length-gauge dipole), and angular-momentum integrals over
contracted Cartesian Gaussians. The bundled basis is STO-3G for the
elements this project exports.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# element -> shells; each shell is (kind, exponents, s-coeffs[, p-coeffs])
STO3G = {
    "H": [("s", [3.42525091, 0.62391373, 0.16885540],
           [0.15432897, 0.53532814, 0.44463454])],
    "He": [("s", [6.36242139, 1.15892300, 0.31364979],
            [0.15432897, 0.53532814, 0.44463454])],
    "Li": [("s", [16.1195750, 2.9362007, 0.7946505],
            [0.15432897, 0.53532814, 0.44463454]),
           ("sp", [0.6362897, 0.1478601, 0.0480887],
            [-0.09996723, 0.39951283, 0.70011547],
            [0.15591627, 0.60768372, 0.39195739])],
    "C": [("s", [71.6168370, 13.0450960, 3.5305122],
           [0.15432897, 0.53532814, 0.44463454]),
          ("sp", [2.9412494, 0.6834831, 0.2222899],
           [-0.09996723, 0.39951283, 0.70011547],
           [0.15591627, 0.60768372, 0.39195739])],
    "N": [("s", [99.1061690, 18.0523120, 4.8856602],
           [0.15432897, 0.53532814, 0.44463454]),
          ("sp", [3.7804559, 0.8784966, 0.2857144],
           [-0.09996723, 0.39951283, 0.70011547],
           [0.15591627, 0.60768372, 0.39195739])],
    "O": [("s", [130.7093200, 23.8088610, 6.4436083],
           [0.15432897, 0.53532814, 0.44463454]),
          ("sp", [5.0331513, 1.1695961, 0.3803890],
           [-0.09996723, 0.39951283, 0.70011547],
           [0.15591627, 0.60768372, 0.39195739])],
}

Z_OF = {"H": 1, "He": 2, "Li": 3, "C": 6, "N": 7, "O": 8}

BASIS_NAMES = ("sto-3g",)


class Primitive:
    __slots__ = ("alpha", "coef", "center", "powers")

    def __init__(self, alpha, coef, center, powers):
        self.alpha = alpha
        self.coef = coef
        self.center = np.asarray(center, dtype=float)
        self.powers = powers


def dfact(k: int) -> float:
    out = 1.0
    while k > 0:
        out *= k
        k -= 2
    return out


def primitive_norm(alpha: float, powers) -> float:
    l, m, n = powers
    num = (2.0 * alpha / math.pi) ** 0.75 * (4.0 * alpha) ** ((l + m + n) / 2.0)
    den = math.sqrt(dfact(2 * l - 1) * dfact(2 * m - 1) * dfact(2 * n - 1))
    return num / den


def normalize_contracted(prims: list[Primitive]) -> list[Primitive]:
    s = 0.0
    for pa in prims:
        for pb in prims:
            s += pa.coef * pb.coef * overlap_prim(pa, pb)
    scale = 1.0 / math.sqrt(s)
    for p in prims:
        p.coef *= scale
    return prims


def build_basis(symbols, coords_bohr, basis: str = "sto-3g"):
    """Contracted functions (lists of primitives) for the given geometry."""
    if basis.lower() not in BASIS_NAMES:
        raise ValueError(f"unsupported basis {basis!r}; available: {BASIS_NAMES}")
    funcs = []
    for sym, R in zip(symbols, coords_bohr):
        if sym not in STO3G:
            raise ValueError(
                f"element {sym!r} not in the bundled basis table "
                f"({sorted(STO3G)})"
            )
        for shell in STO3G[sym]:
            if shell[0] == "s":
                _, exps, cs = shell
                prims = [
                    Primitive(a, c * primitive_norm(a, (0, 0, 0)), R, (0, 0, 0))
                    for a, c in zip(exps, cs)
                ]
                funcs.append(normalize_contracted(prims))
            else:
                _, exps, cs_s, cs_p = shell
                prims = [
                    Primitive(a, c * primitive_norm(a, (0, 0, 0)), R, (0, 0, 0))
                    for a, c in zip(exps, cs_s)
                ]
                funcs.append(normalize_contracted(prims))
                for pw in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
                    prims = [
                        Primitive(a, c * primitive_norm(a, pw), R, pw)
                        for a, c in zip(exps, cs_p)
                    ]
                    funcs.append(normalize_contracted(prims))
    return funcs


def hermite_e(i, j, t, Qx, a, b):
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return (hermite_e(i - 1, j, t - 1, Qx, a, b) / (2 * p)
                - q * Qx / a * hermite_e(i - 1, j, t, Qx, a, b)
                + (t + 1) * hermite_e(i - 1, j, t + 1, Qx, a, b))
    return (hermite_e(i, j - 1, t - 1, Qx, a, b) / (2 * p)
            + q * Qx / b * hermite_e(i, j - 1, t, Qx, a, b)
            + (t + 1) * hermite_e(i, j - 1, t + 1, Qx, a, b))


def overlap_prim(pa: Primitive, pb: Primitive) -> float:
    a, b = pa.alpha, pb.alpha
    out = (math.pi / (a + b)) ** 1.5
    for d in range(3):
        out *= hermite_e(pa.powers[d], pb.powers[d], 0,
                         pa.center[d] - pb.center[d], a, b)
    return out


def shift(p: Primitive, d: int, k: int) -> Primitive:
    pw = list(p.powers)
    pw[d] += k
    if pw[d] < 0:
        return Primitive(p.alpha, 0.0, p.center, (0, 0, 0))
    return Primitive(p.alpha, p.coef, p.center, tuple(pw))


def kinetic_prim(pa: Primitive, pb: Primitive) -> float:
    b = pb.alpha
    l2, m2, n2 = pb.powers
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(pa, pb)
    term1 = -2.0 * b * b * (
        overlap_prim(pa, shift(pb, 0, 2))
        + overlap_prim(pa, shift(pb, 1, 2))
        + overlap_prim(pa, shift(pb, 2, 2))
    )
    term2 = 0.0
    for d, pw in enumerate((l2, m2, n2)):
        if pw >= 2:
            term2 += -0.5 * pw * (pw - 1) * overlap_prim(pa, shift(pb, d, -2))
    return term0 + term1 + term2


def boys(n: int, x: float) -> float:
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def hermite_coulomb(t, u, v, n, p, PCx, PCy, PCz, RPC):
    val = 0.0
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * RPC * RPC)
    if t == u == 0:
        if v > 1:
            val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCz * hermite_coulomb(t, u, v - 1, n + 1, p, PCx, PCy, PCz, RPC)
        return val
    if t == 0:
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, PCx, PCy, PCz, RPC)
        val += PCy * hermite_coulomb(t, u - 1, v, n + 1, p, PCx, PCy, PCz, RPC)
        return val
    if t > 1:
        val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, PCx, PCy, PCz, RPC)
    val += PCx * hermite_coulomb(t - 1, u, v, n + 1, p, PCx, PCy, PCz, RPC)
    return val


def nuclear_prim(pa: Primitive, pb: Primitive, C) -> float:
    a, b = pa.alpha, pb.alpha
    p = a + b
    P = (a * pa.center + b * pb.center) / p
    PC = P - np.asarray(C, float)
    RPC = float(np.linalg.norm(PC))
    l1, m1, n1 = pa.powers
    l2, m2, n2 = pb.powers
    val = 0.0
    for t in range(l1 + l2 + 1):
        Et = hermite_e(l1, l2, t, pa.center[0] - pb.center[0], a, b)
        for u in range(m1 + m2 + 1):
            Eu = hermite_e(m1, m2, u, pa.center[1] - pb.center[1], a, b)
            for v in range(n1 + n2 + 1):
                Ev = hermite_e(n1, n2, v, pa.center[2] - pb.center[2], a, b)
                val += Et * Eu * Ev * hermite_coulomb(
                    t, u, v, 0, p, PC[0], PC[1], PC[2], RPC)
    return 2.0 * math.pi / p * val


def eri_prim(pa, pb, pc, pd) -> float:
    a, b, c, d = pa.alpha, pb.alpha, pc.alpha, pd.alpha
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * pa.center + b * pb.center) / p
    Q = (c * pc.center + d * pd.center) / q
    PQ = P - Q
    RPQ = float(np.linalg.norm(PQ))
    l1, m1, n1 = pa.powers
    l2, m2, n2 = pb.powers
    l3, m3, n3 = pc.powers
    l4, m4, n4 = pd.powers
    val = 0.0
    for t in range(l1 + l2 + 1):
        E1t = hermite_e(l1, l2, t, pa.center[0] - pb.center[0], a, b)
        for u in range(m1 + m2 + 1):
            E1u = hermite_e(m1, m2, u, pa.center[1] - pb.center[1], a, b)
            for v in range(n1 + n2 + 1):
                E1v = hermite_e(n1, n2, v, pa.center[2] - pb.center[2], a, b)
                for tau in range(l3 + l4 + 1):
                    E2t = hermite_e(l3, l4, tau, pc.center[0] - pd.center[0], c, d)
                    for nu in range(m3 + m4 + 1):
                        E2u = hermite_e(m3, m4, nu, pc.center[1] - pd.center[1], c, d)
                        for phi in range(n3 + n4 + 1):
                            E2v = hermite_e(
                                n3, n4, phi, pc.center[2] - pd.center[2], c, d)
                            val += (E1t * E1u * E1v * E2t * E2u * E2v
                                    * (-1.0) ** (tau + nu + phi)
                                    * hermite_coulomb(
                                        t + tau, u + nu, v + phi, 0,
                                        alpha, PQ[0], PQ[1], PQ[2], RPQ))
    return val * 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def moment_prim(pa: Primitive, pb: Primitive, d: int, origin) -> float:
    """<a| (r_d - origin_d) |b> via power raising on the ket."""
    XB = pb.center[d] - origin[d]
    return overlap_prim(pa, shift(pb, d, 1)) + XB * overlap_prim(pa, pb)


def del_prim_terms(pb: Primitive, d: int):
    """d/dr_d |b> expanded as [(coefficient, primitive)] pairs."""
    out = [(-2.0 * pb.alpha, shift(pb, d, 1))]
    if pb.powers[d] >= 1:
        out.append((float(pb.powers[d]), shift(pb, d, -1)))
    return out


def angmom_prim(pa: Primitive, pb: Primitive, comp: int, origin) -> float:
    """<a| ((r - origin) x grad)_comp |b>; real and antisymmetric."""
    d1, d2 = [(1, 2), (2, 0), (0, 1)][comp]
    val = 0.0
    for cf, q in del_prim_terms(pb, d2):
        val += cf * moment_prim(pa, q, d1, origin)
    for cf, q in del_prim_terms(pb, d1):
        val -= cf * moment_prim(pa, q, d2, origin)
    return val


def contracted(op, fa, fb, *extra) -> float:
    out = 0.0
    for pa in fa:
        for pb in fb:
            out += pa.coef * pb.coef * op(pa, pb, *extra)
    return out


def integrals(symbols, coords_ang, origin=(0.0, 0.0, 0.0), basis: str = "sto-3g"):
    """All AO integral blocks for a geometry given in Angstrom.

    Returns (S, T, V, eri, dip, ang, e_nuc) with eri in chemists'
    ordering (ij|kl), dip[d] = <a|(r_d - origin_d)|b>, and ang[c] the
    (r - origin) x grad matrices. The origin is in Angstrom as well.
    """
    coords = [np.asarray(c, float) * ANGSTROM_TO_BOHR for c in coords_ang]
    funcs = build_basis(symbols, coords, basis)
    n = len(funcs)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            S[i, j] = contracted(overlap_prim, funcs[i], funcs[j])
            T[i, j] = contracted(kinetic_prim, funcs[i], funcs[j])
            for sym, R in zip(symbols, coords):
                V[i, j] -= Z_OF[sym] * contracted(nuclear_prim, funcs[i], funcs[j], R)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    val = 0.0
                    for pa in funcs[i]:
                        for pb in funcs[j]:
                            for pc in funcs[k]:
                                for pd in funcs[l]:
                                    val += (pa.coef * pb.coef * pc.coef * pd.coef
                                            * eri_prim(pa, pb, pc, pd))
                    for (a, b) in ((i, j), (j, i)):
                        for (c, d) in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val
    org = np.asarray(origin, float) * ANGSTROM_TO_BOHR
    dip = np.zeros((3, n, n))
    ang = np.zeros((3, n, n))
    for d in range(3):
        for i in range(n):
            for j in range(n):
                dip[d, i, j] = contracted(moment_prim, funcs[i], funcs[j], d, org)
                ang[d, i, j] = contracted(angmom_prim, funcs[i], funcs[j], d, org)
    e_nuc = 0.0
    for (s1, R1), (s2, R2) in itertools.combinations(zip(symbols, coords), 2):
        e_nuc += Z_OF[s1] * Z_OF[s2] / np.linalg.norm(R1 - R2)
    return S, T, V, eri, dip, ang, e_nuc
