"""Hot statevector kernels with two interchangeable backends.

The numba backend JIT-compiles tight loops; the numpy backend uses
vectorized array operations. Selection: environment variable
CHIROPT_KERNELS=numba|numpy, defaulting to numba when importable.
Both backends are deterministic run-to-run; they may differ from each
other below 1e-13 because summation order differs.
"""
from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("CHIROPT_KERNELS", "").strip().lower()

if _REQUESTED not in ("", "numba", "numpy"):
    raise ValueError(
        f"CHIROPT_KERNELS={_REQUESTED!r} not recognized (use 'numba' or 'numpy')"
    )

_JIT_OPTIONS = {"nogil": True, "cache": True}

HAS_NUMBA = False
if _REQUESTED != "numpy":
    try:
        import numba

        HAS_NUMBA = True
    except ImportError:
        if _REQUESTED == "numba":
            raise
BACKEND = "numba" if HAS_NUMBA else "numpy"

_CHUNK = 1 << 22  # bound numpy temporaries to ~32 MB


def _ry_numpy(amp: np.ndarray, qubit: int, theta: float) -> None:
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    view = amp.reshape(-1, 2, 1 << qubit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - s * a1
    view[:, 1, :] = s * a0 + c * a1


def _x_numpy(amp: np.ndarray, qubit: int) -> None:
    view = amp.reshape(-1, 2, 1 << qubit)
    tmp = view[:, 0, :].copy()
    view[:, 0, :] = view[:, 1, :]
    view[:, 1, :] = tmp


def _cnot_numpy(amp: np.ndarray, control: int, target: int) -> None:
    n = amp.size.bit_length() - 1
    view = amp.reshape((2,) * n)
    # axis for qubit q counts from the slow end in a little-endian layout
    ax_c = n - 1 - control
    ax_t = n - 1 - target
    sel1 = [slice(None)] * n
    sel1[ax_c] = 1
    sub = view[tuple(sel1)]
    sub_t_ax = ax_t if ax_t < ax_c else ax_t - 1
    sel_a = [slice(None)] * (n - 1)
    sel_b = [slice(None)] * (n - 1)
    sel_a[sub_t_ax] = 0
    sel_b[sub_t_ax] = 1
    tmp = sub[tuple(sel_a)].copy()
    sub[tuple(sel_a)] = sub[tuple(sel_b)]
    sub[tuple(sel_b)] = tmp


def _parity_i64(v: np.ndarray) -> np.ndarray:
    v = v ^ (v >> 32)
    v = v ^ (v >> 16)
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    return v & 1


def _word_dot_numpy(amp: np.ndarray, x_mask: int, z_mask: int) -> complex:
    """Phase-free part of <amp| P |amp>: sum_k conj(a_k) s(k) a_{k^x}."""
    total = 0.0 + 0.0j
    n = amp.size
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n), dtype=np.int64)
        j = k ^ x_mask
        sign = 1.0 - 2.0 * _parity_i64(j & z_mask)
        total += np.dot(np.conj(amp[start : start + _CHUNK]) * sign, amp[j])
    return total


def _word_accumulate_numpy(
    amp: np.ndarray, out: np.ndarray, x_mask: int, z_mask: int, coeff: complex
) -> None:
    """out += coeff_with_phase * (phase-free P) amp."""
    n = amp.size
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n), dtype=np.int64)
        j = k ^ x_mask
        sign = 1.0 - 2.0 * _parity_i64(j & z_mask)
        out[start : start + _CHUNK] += coeff * sign * amp[j]


if HAS_NUMBA:

    @numba.njit("void(complex128[::1], int64, float64)", **_JIT_OPTIONS)
    def _ry_numba(amp, qubit, theta):  # pragma: no cover - exercised via dispatch
        c = np.cos(0.5 * theta)
        s = np.sin(0.5 * theta)
        half = amp.size >> 1
        low = (1 << qubit) - 1
        for t in range(half):
            i0 = ((t >> qubit) << (qubit + 1)) | (t & low)
            i1 = i0 | (1 << qubit)
            a0 = amp[i0]
            a1 = amp[i1]
            amp[i0] = c * a0 - s * a1
            amp[i1] = s * a0 + c * a1

    @numba.njit("void(complex128[::1], int64)", **_JIT_OPTIONS)
    def _x_numba(amp, qubit):  # pragma: no cover
        half = amp.size >> 1
        low = (1 << qubit) - 1
        for t in range(half):
            i0 = ((t >> qubit) << (qubit + 1)) | (t & low)
            i1 = i0 | (1 << qubit)
            amp[i0], amp[i1] = amp[i1], amp[i0]

    @numba.njit("void(complex128[::1], int64, int64)", **_JIT_OPTIONS)
    def _cnot_numba(amp, control, target):  # pragma: no cover
        cbit = 1 << control
        tbit = 1 << target
        for k in range(amp.size):
            if (k & cbit) != 0 and (k & tbit) == 0:
                j = k | tbit
                amp[k], amp[j] = amp[j], amp[k]

    @numba.njit("complex128(complex128[::1], int64, int64)", **_JIT_OPTIONS)
    def _word_dot_numba(amp, x_mask, z_mask):  # pragma: no cover
        total = 0.0 + 0.0j
        for k in range(amp.size):
            j = k ^ x_mask
            v = j & z_mask
            v ^= v >> 32
            v ^= v >> 16
            v ^= v >> 8
            v ^= v >> 4
            v ^= v >> 2
            v ^= v >> 1
            if v & 1:
                total -= np.conj(amp[k]) * amp[j]
            else:
                total += np.conj(amp[k]) * amp[j]
        return total

    @numba.njit(
        "void(complex128[::1], complex128[::1], int64, int64, complex128)",
        **_JIT_OPTIONS,
    )
    def _word_accumulate_numba(amp, out, x_mask, z_mask, coeff):  # pragma: no cover
        for k in range(amp.size):
            j = k ^ x_mask
            v = j & z_mask
            v ^= v >> 32
            v ^= v >> 16
            v ^= v >> 8
            v ^= v >> 4
            v ^= v >> 2
            v ^= v >> 1
            if v & 1:
                out[k] -= coeff * amp[j]
            else:
                out[k] += coeff * amp[j]

    apply_ry = _ry_numba
    apply_x = _x_numba
    apply_cnot = _cnot_numba
    word_dot = _word_dot_numba
    word_accumulate = _word_accumulate_numba
else:
    apply_ry = _ry_numpy
    apply_x = _x_numpy
    apply_cnot = _cnot_numpy
    word_dot = _word_dot_numpy
    word_accumulate = _word_accumulate_numpy
