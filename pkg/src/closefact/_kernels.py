"""Hot inner loop of the exhaustive search, in two interchangeable backends.

For every base pair (A, B) with B <= A and every offset 1 <= a <= c_max,
the pair contributes a hit when b = a*B/(A+a) is an integer with
1 <= b <= c_max (b < B holds automatically).  Both backends emit the same
int64 record array of (A, B, a, b) rows in identical (A, B, a) order:

* ``numba``: three nested loops, JIT-compiled (count pass + fill pass),
  compiled lazily on first use so importing the package stays cheap;
* ``numpy``: per-A vectorization over the (B, a) grid.

Backend choice: explicit argument, else the CLOSEFACT_BACKEND environment
variable, else numba when importable.  All arithmetic fits int64 as long
as a_max * c_max stays below 2**62; callers validate box sizes.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "CLOSEFACT_BACKEND"
_BACKENDS = ("numba", "numpy")

_HIT_DTYPE = np.int64


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(name: str | None = None) -> str:
    """Pick the kernel backend: argument > env flag > auto-detect."""
    if name is None:
        name = os.environ.get(BACKEND_ENV, "").strip() or None
    if name is None:
        return "numba" if numba_available() else "numpy"
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {_BACKENDS}")
    if name == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    return name


def _scan_count(a_lo, a_hi, c_max):
    n = 0
    for base in range(a_lo, a_hi):
        for cob in range(1, base + 1):
            for a in range(1, c_max + 1):
                t = a * cob
                d = base + a
                if t % d == 0:
                    b = t // d
                    if 1 <= b <= c_max:
                        n += 1
    return n


def _scan_fill(a_lo, a_hi, c_max, out):
    i = 0
    for base in range(a_lo, a_hi):
        for cob in range(1, base + 1):
            for a in range(1, c_max + 1):
                t = a * cob
                d = base + a
                if t % d == 0:
                    b = t // d
                    if 1 <= b <= c_max:
                        out[i, 0] = base
                        out[i, 1] = cob
                        out[i, 2] = a
                        out[i, 3] = b
                        i += 1
    return i


_NUMBA_KERNELS = None


def _numba_kernels():
    global _NUMBA_KERNELS
    if _NUMBA_KERNELS is None:
        from numba import njit
        count = njit(cache=True, nogil=True)(_scan_count)
        fill = njit(cache=True, nogil=True)(_scan_fill)
        _NUMBA_KERNELS = (count, fill)
    return _NUMBA_KERNELS


def _scan_numba(a_lo: int, a_hi: int, c_max: int) -> np.ndarray:
    count, fill = _numba_kernels()
    n = count(a_lo, a_hi, c_max)
    out = np.empty((n, 4), dtype=_HIT_DTYPE)
    filled = fill(a_lo, a_hi, c_max, out)
    assert filled == n
    return out


def _scan_numpy(a_lo: int, a_hi: int, c_max: int) -> np.ndarray:
    chunks = []
    a_row = np.arange(1, c_max + 1, dtype=_HIT_DTYPE)[None, :]
    for base in range(a_lo, a_hi):
        cob_col = np.arange(1, base + 1, dtype=_HIT_DTYPE)[:, None]
        t = a_row * cob_col
        b, r = np.divmod(t, base + a_row)
        rows, cols = np.nonzero((r == 0) & (b >= 1) & (b <= c_max))
        if rows.size:
            chunk = np.empty((rows.size, 4), dtype=_HIT_DTYPE)
            chunk[:, 0] = base
            chunk[:, 1] = rows + 1
            chunk[:, 2] = cols + 1
            chunk[:, 3] = b[rows, cols]
            chunks.append(chunk)
    if not chunks:
        return np.empty((0, 4), dtype=_HIT_DTYPE)
    return np.concatenate(chunks, axis=0)


def offset_scan(a_lo: int, a_hi: int, c_max: int, backend: str | None = None) -> np.ndarray:
    """All (A, B, a, b) hits with a_lo <= A < a_hi, in (A, B, a) order."""
    if a_hi <= a_lo:
        return np.empty((0, 4), dtype=_HIT_DTYPE)
    name = resolve_backend(backend)
    if name == "numba":
        return _scan_numba(a_lo, a_hi, c_max)
    return _scan_numpy(a_lo, a_hi, c_max)
