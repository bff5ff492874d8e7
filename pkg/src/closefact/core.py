"""Exact arithmetic for integers with several close factorizations.

The central object is a positive integer ``n`` together with a base
factorization ``n = A * B`` (``1 <= B <= A``) and a strictly increasing
list of offset pairs ``(a_i, b_i)`` such that every ``(A + a_i) * (B - b_i)``
equals ``n`` as well.  Expanding that product shows each offset pair
satisfies the linear identity

    a_i * B - b_i * A == a_i * b_i

which is the exact-arithmetic test used throughout this module.

For two offset pairs the 2x2 determinant ``a_i * b_j - a_j * b_i`` (the
"skew") is strictly positive whenever ``i > j``, and the base pair can be
recovered from any two offsets:

    B == b_i * b_j * (a_i - a_j) / D_ij
    A == a_i * a_j * (b_i - b_j) / D_ij

Everything here is pure and uses Python's arbitrary-precision integers:
the interesting examples grow geometrically and overflow 64-bit words
almost immediately, and the bounds computed here feed exact assertions,
so no floats appear anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class InvalidFactorization(ValueError):
    """Raised when a claimed close factorization fails validation.

    ``code`` is a stable machine-readable identifier:

    * ``nonpositive``       -- an input is not a positive integer
    * ``n-mismatch``        -- n != A * B
    * ``base-order``        -- B > A
    * ``offsets-unordered`` -- offsets not strictly increasing in both
                               coordinates
    * ``offset-identity``   -- some (A + a_i)(B - b_i) != n
    * ``offset-too-large``  -- B - b_last < 1
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CloseFactorization:
    """A validated tuple n = A*B = (A+a_1)(B-b_1) = ... with 1 <= B <= A.

    Instances should be built through :func:`verify_quadruple`, which
    checks every invariant; the constructor itself stores values as given.
    """

    n: int
    A: int
    B: int
    offsets: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        """Number of distinct factorizations represented (offsets + 1)."""
        return len(self.offsets) + 1

    def factor_pairs(self) -> list[tuple[int, int]]:
        """All factorizations of n as (larger, smaller) pairs, base first."""
        return [(self.A, self.B)] + [
            (self.A + a, self.B - b) for a, b in self.offsets
        ]

    def to_json_dict(self) -> dict:
        """JSON-safe dict; integers become decimal strings (no 53-bit cap)."""
        return {
            "n": str(self.n),
            "A": str(self.A),
            "B": str(self.B),
            "offsets": [[str(a), str(b)] for a, b in self.offsets],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CloseFactorization":
        offsets = [(int(a), int(b)) for a, b in doc["offsets"]]
        return verify_quadruple(int(doc["n"]), int(doc["A"]), int(doc["B"]), offsets)


def verify_quadruple(n, A, B, offsets) -> CloseFactorization:
    """Validate a claimed close-factorization tuple in exact arithmetic.

    ``offsets`` is an iterable of (a_i, b_i) pairs, already sorted; unsorted
    input is rejected rather than sorted so that ordering stays an explicit
    caller contract.  Raises :class:`InvalidFactorization` with a distinct
    code per failure mode.
    """
    n, A, B = int(n), int(A), int(B)
    offs = tuple((int(a), int(b)) for a, b in offsets)
    if n < 1 or A < 1 or B < 1 or not offs:
        raise InvalidFactorization("nonpositive", "n, A, B must be positive and offsets non-empty")
    if any(a < 1 or b < 1 for a, b in offs):
        raise InvalidFactorization("nonpositive", "offsets must be positive integers")
    if A * B != n:
        raise InvalidFactorization("n-mismatch", f"A*B = {A * B} != n = {n}")
    if B > A:
        raise InvalidFactorization("base-order", f"need B <= A, got B = {B} > A = {A}")
    for (a1, b1), (a2, b2) in zip(offs, offs[1:]):
        if not (a1 < a2 and b1 < b2):
            raise InvalidFactorization(
                "offsets-unordered",
                f"offsets must increase strictly in both coordinates: {(a1, b1)} !< {(a2, b2)}",
            )
    # checked before the product identity, which b >= B would also break
    if B - offs[-1][1] < 1:
        raise InvalidFactorization(
            "offset-too-large", f"B - b_last = {B - offs[-1][1]} < 1"
        )
    for a, b in offs:
        # a*B - b*A == a*b  <=>  (A + a)(B - b) == A*B
        if a * B - b * A != a * b:
            raise InvalidFactorization(
                "offset-identity",
                f"(A+{a})(B-{b}) = {(A + a) * (B - b)} != n = {n}",
            )
    return CloseFactorization(n, A, B, offs)


@dataclass(frozen=True)
class SkewTriple:
    """The three pairwise skews of a three-offset tuple.

    For offsets (a_1,b_1) < (a_2,b_2) < (a_3,b_3):

        d21 = a_2*b_1 - a_1*b_2
        d31 = a_3*b_1 - a_1*b_3
        d32 = a_3*b_2 - a_2*b_3

    Offsets arising from a genuine quadruple force all three positive,
    d31 > d21, and d32 + d21 > d31; the constructor enforces these.
    """

    d21: int
    d31: int
    d32: int

    def __post_init__(self):
        if min(self.d21, self.d31, self.d32) <= 0:
            raise ValueError(f"non-positive skew: {(self.d21, self.d31, self.d32)}")
        if not self.d31 > self.d21:
            raise ValueError(f"skew order violated: d31 = {self.d31} <= d21 = {self.d21}")
        if not self.d32 + self.d21 > self.d31:
            raise ValueError(
                f"skew triangle violated: d32 + d21 = {self.d32 + self.d21} <= d31 = {self.d31}"
            )

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.d21, self.d31, self.d32)


def raw_skews(offsets) -> tuple[int, int, int]:
    """The (d21, d31, d32) determinants without any validity checks."""
    (a1, b1), (a2, b2), (a3, b3) = offsets
    return (a2 * b1 - a1 * b2, a3 * b1 - a1 * b3, a3 * b2 - a2 * b3)


def compute_skews(offsets) -> SkewTriple:
    """Skew triple of exactly three strictly increasing offset pairs.

    Raises ValueError when any skew is non-positive (or the structural
    inequalities fail): such offsets cannot come from a valid quadruple.
    """
    offs = tuple((int(a), int(b)) for a, b in offsets)
    if len(offs) != 3:
        raise ValueError(f"need exactly 3 offsets, got {len(offs)}")
    for (a1, b1), (a2, b2) in zip(offs, offs[1:]):
        if not (a1 < a2 and b1 < b2):
            raise ValueError(f"offsets must increase strictly: {(a1, b1)} !< {(a2, b2)}")
    d21, d31, d32 = raw_skews(offs)
    if min(d21, d31, d32) <= 0:
        raise ValueError(f"non-positive skew: {(d21, d31, d32)}")
    return SkewTriple(d21, d31, d32)


def reconstruct_base(offsets, skews: SkewTriple | None = None) -> tuple[int, int]:
    """Recover (A, B) from three offsets via the skew quotients.

    All three index pairs are evaluated and cross-checked rather than
    trusting one; disagreement or an inexact division raises ValueError
    (it cheaply catches corrupted inputs).
    """
    offs = tuple((int(a), int(b)) for a, b in offsets)
    if skews is None:
        skews = compute_skews(offs)
    (a1, b1), (a2, b2), (a3, b3) = offs
    quotients = []
    for (ai, bi), (aj, bj), d in (
        ((a2, b2), (a1, b1), skews.d21),
        ((a3, b3), (a1, b1), skews.d31),
        ((a3, b3), (a2, b2), skews.d32),
    ):
        b_num = bi * bj * (ai - aj)
        a_num = ai * aj * (bi - bj)
        if b_num % d or a_num % d:
            raise ValueError(f"inexact base reconstruction at skew {d}")
        quotients.append((a_num // d, b_num // d))
    if len(set(quotients)) != 1:
        raise ValueError(f"inconsistent base reconstruction: {quotients}")
    return quotients[0]


@dataclass(frozen=True)
class StructureReport:
    """Outcome of the structural checks on a validated quadruple.

    Every field is True for any genuine quadruple; a False indicates an
    invalid input or an implementation bug.  Pure report, never raises.
    """

    skews: tuple[int, int, int]
    offsets_dominate: bool     # a_i > b_i for every offset
    gaps_dominate: bool        # a_i - a_j > b_i - b_j for all i > j
    cross_identity_a: bool     # d31*a_2 - d21*a_3 == d32*a_1
    cross_identity_b: bool     # d31*b_2 - d21*b_3 == d32*b_1
    skew_order: bool           # d31 > d21
    skew_triangle: bool        # d32 + d21 > d31

    @property
    def ok(self) -> bool:
        return (
            self.offsets_dominate
            and self.gaps_dominate
            and self.cross_identity_a
            and self.cross_identity_b
            and self.skew_order
            and self.skew_triangle
        )

    def failures(self) -> list[str]:
        return [
            name
            for name in (
                "offsets_dominate",
                "gaps_dominate",
                "cross_identity_a",
                "cross_identity_b",
                "skew_order",
                "skew_triangle",
            )
            if not getattr(self, name)
        ]


def check_structure(cf: CloseFactorization) -> StructureReport:
    """Run all structural identities/inequalities on a k = 4 tuple."""
    if cf.k != 4:
        raise ValueError(f"structure checks are defined for k = 4, got k = {cf.k}")
    offs = cf.offsets
    (a1, b1), (a2, b2), (a3, b3) = offs
    d21, d31, d32 = raw_skews(offs)
    gaps = all(
        offs[i][0] - offs[j][0] > offs[i][1] - offs[j][1]
        for i in range(3)
        for j in range(i)
    )
    return StructureReport(
        skews=(d21, d31, d32),
        offsets_dominate=all(a > b for a, b in offs),
        gaps_dominate=gaps,
        cross_identity_a=d31 * a2 - d21 * a3 == d32 * a1,
        cross_identity_b=d31 * b2 - d21 * b3 == d32 * b1,
        skew_order=d31 > d21,
        skew_triangle=d32 + d21 > d31,
    )


def base_product_identity(A: int, a1: int, a2: int, a3: int) -> bool:
    """Whether A*(A + a3) == (A + a1)*(A + a2)."""
    return A * (A + a3) == (A + a1) * (A + a2)


def cofactor_product_identity(B: int, b1: int, b2: int, b3: int) -> bool:
    """Whether B*(B - b3) == (B - b1)*(B - b2)."""
    return B * (B - b3) == (B - b1) * (B - b2)


def equal_skew_identity(cf: CloseFactorization) -> bool:
    """Product identities forced by equal outer skews (d31 == d32).

    For a quadruple with d31 == d32 both A*(A+a_3) == (A+a_1)(A+a_2) and
    B*(B-b_3) == (B-b_1)(B-b_2) must hold, and additionally A <= a_3^2/4.
    Returns the conjunction; raises ValueError when d31 != d32.
    """
    if cf.k != 4:
        raise ValueError(f"equal-skew identity is defined for k = 4, got k = {cf.k}")
    (a1, b1), (a2, b2), (a3, b3) = cf.offsets
    _, d31, d32 = raw_skews(cf.offsets)
    if d31 != d32:
        raise ValueError(f"precondition d31 == d32 violated: {d31} != {d32}")
    return (
        base_product_identity(cf.A, a1, a2, a3)
        and cofactor_product_identity(cf.B, b1, b2, b3)
        and 4 * cf.A <= a3 * a3
    )


def offset_ratio_bound(lam, c: int, skew: int) -> Fraction:
    """Exact bound lam*c^3 / (skew*(1+lam)^2) on the larger base factor.

    Applies whenever some offset pair satisfies a_i == (1+lam)*a_j exactly
    with rational lam > 0, offsets bounded by c, and skew = d_ij.  Returned
    as a Fraction, never a float, since it feeds exact assertions.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"need lam > 0, got {lam}")
    return lam * c**3 / (skew * (1 + lam) ** 2)


def large_skew_bound(c: int, skew: int) -> Fraction | None:
    """c^3/24 bound on the base factor, applicable only when skew > 5.

    lam/(1+lam)^2 <= 1/4 for all lam > 0, so skew >= 6 caps the ratio
    bound at c^3/24 regardless of lam.  Returns None when skew <= 5.
    """
    if skew <= 5:
        return None
    return Fraction(c**3, 24)


def closeness_ratio(cf: CloseFactorization) -> Fraction:
    """A / a_last^3 as an exact rational (the quantity the census bounds)."""
    a_last = cf.offsets[-1][0]
    return Fraction(cf.A, a_last**3)


@dataclass(frozen=True)
class GcdDecomposition:
    """Coprime split of the first two offsets.

    d_a = gcd(a_1, a_2), d_b = gcd(b_1, b_2), with a_i = d_a*alpha_i and
    b_i = d_b*beta_i, so gcd(alpha_1, alpha_2) == gcd(beta_1, beta_2) == 1.
    The product d_a*d_b always divides the skew d21.
    """

    d_a: int
    d_b: int
    alpha1: int
    alpha2: int
    beta1: int
    beta2: int


def gcd_decompose(offsets) -> GcdDecomposition:
    """GcdDecomposition of the first two offset pairs."""
    (a1, b1), (a2, b2) = offsets[0], offsets[1]
    d_a = gcd(a1, a2)
    d_b = gcd(b1, b2)
    dec = GcdDecomposition(d_a, d_b, a1 // d_a, a2 // d_a, b1 // d_b, b2 // d_b)
    d21 = a2 * b1 - a1 * b2
    if d21 % (d_a * d_b):
        raise ValueError(f"gcd product {d_a * d_b} does not divide skew {d21}")
    return dec


def derive_km(cf: CloseFactorization) -> tuple[int, int]:
    """The (k, m) multipliers of a quadruple's coprime-offset relations.

    k is defined by beta_1 * k == d31 * (a_3 - a_2) and m by
    alpha_1 * m == d31 * (b_3 - b_2); both divisions are exact for any
    valid quadruple, and (k, m) satisfies

        k * m * d21 == d_a * d_b * d32 * d31 * (d32 + d21 - d31).
    """
    if cf.k != 4:
        raise ValueError(f"k/m derivation is defined for k = 4, got k = {cf.k}")
    (a1, b1), (a2, b2), (a3, b3) = cf.offsets
    dec = gcd_decompose(cf.offsets)
    _, d31, _ = raw_skews(cf.offsets)
    k_num = d31 * (a3 - a2)
    m_num = d31 * (b3 - b2)
    if k_num % dec.beta1 or m_num % dec.alpha1:
        raise ValueError("inexact k/m derivation; input is not a valid quadruple")
    return k_num // dec.beta1, m_num // dec.alpha1
