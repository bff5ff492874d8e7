"""Independent ground truth: exhaustive box search and constructive families.

The search iterates base pairs (A, B) and offsets a directly, testing the
divisibility b = a*B/(A+a) instead of enumerating divisors of any n; that
needs no factorization machinery, and disjoint A-ranges parallelize
trivially.  The hot loop runs on machine integers (see _kernels); every
reported tuple is then re-validated in exact arbitrary-precision
arithmetic, so the fast path can never smuggle in a wrong answer.

The two constructive families provide known-good fodder:

* ``optimal_family(i)``: the k = 4 family driven by powers of the
  fundamental unit 5 + 2*sqrt(6), whose closeness ratio A/a_3^3 climbs to
  the supremum 0.04742...;
* ``k3_family(N)``: the k = 3 family with three factorizations and
  largest offset C = 2N+1, satisfying A <= C*(C-1)^2 / 4.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._kernels import offset_scan
from .core import CloseFactorization, closeness_ratio, compute_skews, verify_quadruple
from .pell import FundamentalUnit, unit_power

# Hits use int64; a*B <= a_max*c_max must stay far from 2**63.
MACHINE_SAFE_LIMIT = 1 << 62


@dataclass(frozen=True)
class SearchBox:
    """Search window: bases up to a_max, offsets up to c_max, k >= k_min."""

    a_max: int
    c_max: int
    k_min: int = 2

    def __post_init__(self):
        if self.a_max < 2 or self.c_max < 1:
            raise ValueError(f"need a_max >= 2 and c_max >= 1, got {self}")
        if self.k_min < 2:
            raise ValueError(f"need k_min >= 2, got {self.k_min}")
        if self.a_max * self.c_max >= MACHINE_SAFE_LIMIT:
            raise ValueError(
                f"box too large for machine-integer safety: a_max*c_max = "
                f"{self.a_max * self.c_max} >= 2**62"
            )


def _chunk_bounds(a_max: int, pieces: int) -> list[tuple[int, int]]:
    """Contiguous A-ranges with roughly equal work (cost grows like A^2)."""
    pieces = max(1, min(pieces, a_max))
    cuts = [1] + [
        max(1, round(a_max * (j / pieces) ** 0.5)) for j in range(1, pieces)
    ] + [a_max + 1]
    cuts = sorted(set(cuts))
    return list(zip(cuts, cuts[1:]))


def _group_hits(hits: np.ndarray, k_min: int) -> list[CloseFactorization]:
    found = []
    i, n = 0, len(hits)
    while i < n:
        j = i
        base, cob = int(hits[i, 0]), int(hits[i, 1])
        while j < n and hits[j, 0] == base and hits[j, 1] == cob:
            j += 1
        if j - i >= k_min - 1:
            offsets = [(int(a), int(b)) for a, b in hits[i:j, 2:4]]
            found.append(verify_quadruple(base * cob, base, cob, offsets))
        i = j
    return found


def brute_force(box: SearchBox, jobs: int = 1, backend: str | None = None) -> list[CloseFactorization]:
    """All maximal close-factorization tuples in the box, sorted by (n, A).

    A base pair carrying j offsets is reported once with all j of them;
    use :func:`sub_quadruples` to expand. Workers share nothing: each scans
    a disjoint A-range and results are merged afterwards.
    """
    if jobs < 1:
        raise ValueError(f"need jobs >= 1, got {jobs}")
    if jobs == 1:
        hits = offset_scan(1, box.a_max + 1, box.c_max, backend=backend)
    else:
        bounds = _chunk_bounds(box.a_max, pieces=4 * jobs)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(lambda lo_hi: offset_scan(*lo_hi, box.c_max, backend=backend), bounds)
            )
        parts = [p for p in parts if len(p)]
        hits = np.concatenate(parts, axis=0) if parts else offset_scan(1, 1, box.c_max)
    found = _group_hits(hits, box.k_min)
    found.sort(key=lambda cf: (cf.n, cf.A))
    return found


def sub_quadruples(cf: CloseFactorization) -> list[CloseFactorization]:
    """Every k = 4 sub-tuple (3-offset subset) of a maximal tuple."""
    if cf.k < 4:
        return []
    return [
        verify_quadruple(cf.n, cf.A, cf.B, list(sub))
        for sub in combinations(cf.offsets, 3)
    ]


@dataclass(frozen=True)
class FamilyInstance:
    """A constructed family member: validated tuple plus its index/unit."""

    index: int
    cf: CloseFactorization
    unit: tuple[int, int] | None = None

    def to_json_dict(self) -> dict:
        doc = {"index": self.index, **self.cf.to_json_dict()}
        if self.unit is not None:
            doc["unit"] = {"x": str(self.unit[0]), "y": str(self.unit[1])}
        return doc


_UNIT_SQRT6 = FundamentalUnit(6, 5, 2)


def optimal_family(i: int) -> FamilyInstance:
    """The i-th member of the extremal k = 4 family.

    With (x, y) the i-th power of the fundamental unit of x^2 - 6y^2 = 1:

        offsets  (3y, x), (x + 6y, 2x + 2y), (3x + 6y, 2x + 6y)
        A = 3y (x + 2y)(x + 6y),  B = 2x (x + y)(x + 3y),  n = A*B

    The result always passes full validation and has skews (1, 3, 4).
    """
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    x, y = unit_power(_UNIT_SQRT6, i)
    offsets = [(3 * y, x), (x + 6 * y, 2 * x + 2 * y), (3 * x + 6 * y, 2 * x + 6 * y)]
    base = 3 * y * (x + 2 * y) * (x + 6 * y)
    cob = 2 * x * (x + y) * (x + 3 * y)
    cf = verify_quadruple(base * cob, base, cob, offsets)
    if compute_skews(cf.offsets).as_tuple() != (1, 3, 4):
        raise AssertionError(f"family member {i} has unexpected skews")
    return FamilyInstance(index=i, cf=cf, unit=(x, y))


def k3_family(n_index: int) -> FamilyInstance:
    """The k = 3 family member with largest offset C = 2N + 1.

    For N >= 2:

        A = (2N+1)(N^2 - 1),  B = (2N-1) N^2,
        offsets (N+1, N) and (2N+1, 2N-1),

    giving three factorizations of n = A*B, with A <= C*(C-1)^2 / 4.
    N = 1 degenerates (A = 0) and is rejected.
    """
    N = n_index
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    base = (2 * N + 1) * (N * N - 1)
    cob = (2 * N - 1) * N * N
    offsets = [(N + 1, N), (2 * N + 1, 2 * N - 1)]
    cf = verify_quadruple(base * cob, base, cob, offsets)
    c = 2 * N + 1
    if not 4 * cf.A <= c * (c - 1) ** 2:
        raise AssertionError(f"k3 family member {N} exceeds the cubic bound")
    return FamilyInstance(index=N, cf=cf, unit=None)


def max_ratio(results) -> tuple[Fraction, CloseFactorization]:
    """Largest exact closeness ratio A/a_3^3 over k = 4 tuples.

    Returns (ratio, witnessing tuple); raises on empty input or on a tuple
    that does not have exactly three offsets.
    """
    results = list(results)
    if not results:
        raise ValueError("max_ratio needs at least one quadruple")
    for cf in results:
        if cf.k != 4:
            raise ValueError(f"max_ratio is defined for k = 4 tuples, got k = {cf.k}")
    best = max(results, key=lambda cf: (closeness_ratio(cf), cf.n))
    return closeness_ratio(best), best
