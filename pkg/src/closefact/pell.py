"""Generalized Pell equations K*x^2 - M*y^2 = tau: obstruction and solution.

A congruence obstruction at modulus m (no residue pair satisfies the
equation mod m) certifies that no integer solution exists.  Two divisibility
lemmas give further certificates:

* prime-power: if p^b || tau with b odd, p^(b+1) | K and p does not divide
  M, the p-adic valuations of the two sides can never agree;
* non-residue: if p || K, p | tau and p does not divide M, dividing out p
  forces x^2 to equal a fixed residue mod p, impossible when that residue
  is a quadratic non-residue.

Both lemma certificates are subsumed by a residue sweep at p^(b+1) (resp.
p^2); they are kept because they name the mechanism and re-verify in O(1).

Certificates are one-sided: absence of a certificate proves nothing, so
classification falls back to a bounded witness search and reports
"unknown" when both come up empty.  Everything is pure and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

DEFAULT_SEARCH_BOUND = 10_000

# Prime powers up to 64, ascending.  By CRT a composite modulus obstructs
# only if one of its prime-power parts does, so nothing else is needed.
DEFAULT_MODULI = tuple(sorted(
    p**e
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)
    for e in range(1, 7)
    if p**e <= 64
))

# Primes tried by the two lemma-style checks.
LEMMA_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class PellEquation:
    """K*x^2 - M*y^2 = tau with K, M >= 1 and tau != 0."""

    K: int
    M: int
    tau: int

    def __post_init__(self):
        if self.K < 1 or self.M < 1:
            raise ValueError(f"need K, M >= 1, got K = {self.K}, M = {self.M}")
        if self.tau == 0:
            raise ValueError("need tau != 0")

    def evaluate(self, x: int, y: int) -> int:
        return self.K * x * x - self.M * y * y

    def __str__(self) -> str:
        return f"{self.K}*x^2 - {self.M}*y^2 = {self.tau}"

    def to_json_dict(self) -> dict:
        return {"K": str(self.K), "M": str(self.M), "tau": str(self.tau)}


def is_prime(p: int) -> bool:
    """Trial-division primality; inputs here are tiny."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def legendre_symbol(a: int, p: int) -> int:
    """(a|p) for odd prime p: 0, 1 or -1."""
    a %= p
    if a == 0:
        return 0
    ls = pow(a, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def _valuation(x: int, p: int) -> int:
    """Largest e with p^e | x (x != 0)."""
    e = 0
    x = abs(x)
    while x % p == 0:
        x //= p
        e += 1
    return e


@dataclass(frozen=True)
class ObstructionCertificate:
    """Independently re-checkable proof that an equation has no solution.

    kind is one of:

    * ``residue-sweep``: no (x, y) pair mod ``modulus`` satisfies the
      congruence; ``detail`` records the two disjoint residue sets.
    * ``prime-power``: the p-adic valuation argument fires at ``prime``
      with odd exponent ``detail["exponent"]``.
    * ``non-residue``: dividing out ``prime`` forces x^2 to equal the
      quadratic non-residue ``detail["forced_residue"]`` mod ``prime``.
    """

    kind: str
    modulus: int
    prime: int | None = None
    detail: tuple = ()

    def verify(self, eq: PellEquation) -> bool:
        """Re-check the certificate against ``eq`` from scratch."""
        if self.kind == "residue-sweep":
            return residue_obstruction(eq, self.modulus) is not None
        if self.kind == "prime-power":
            return prime_power_obstruction(eq, self.prime) is not None
        if self.kind == "non-residue":
            return qnr_obstruction(eq, self.prime) is not None
        raise ValueError(f"unknown certificate kind {self.kind!r}")

    def to_json_dict(self) -> dict:
        doc = {"kind": self.kind, "modulus": self.modulus}
        if self.prime is not None:
            doc["prime"] = self.prime
        if self.detail:
            doc["detail"] = {k: v for k, v in self.detail}
        return doc


def residue_obstruction(eq: PellEquation, modulus: int) -> ObstructionCertificate | None:
    """Exhaustive congruence test at ``modulus`` (>= 2).

    Returns a certificate iff K*x^2 - M*y^2 == tau (mod modulus) has no
    solution, equivalently iff {K*s} and {tau + M*s} are disjoint sets of
    residues when s ranges over the squares mod modulus.
    """
    m = int(modulus)
    if m < 2:
        raise ValueError(f"need modulus >= 2, got {m}")
    squares = {(x * x) % m for x in range(m)}
    lhs = {(eq.K * s) % m for s in squares}
    rhs = {(eq.tau + eq.M * s) % m for s in squares}
    if lhs & rhs:
        return None
    return ObstructionCertificate(
        kind="residue-sweep",
        modulus=m,
        detail=(("lhs_residues", tuple(sorted(lhs))), ("rhs_residues", tuple(sorted(rhs)))),
    )


def prime_power_obstruction(eq: PellEquation, p: int) -> ObstructionCertificate | None:
    """Valuation certificate at prime p.

    Fires iff b = v_p(tau) is odd and >= 1, p^(b+1) | K, and p does not
    divide M: then v_p(M*y^2) = b forces an even valuation, contradiction.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    b = _valuation(eq.tau, p)
    if b < 1 or b % 2 == 0:
        return None
    if _valuation(eq.K, p) < b + 1 or eq.M % p == 0:
        return None
    return ObstructionCertificate(
        kind="prime-power",
        modulus=p ** (b + 1),
        prime=p,
        detail=(("exponent", b),),
    )


def qnr_obstruction(eq: PellEquation, p: int) -> ObstructionCertificate | None:
    """Quadratic non-residue certificate at odd prime p.

    Fires iff p || K, p | tau, p does not divide M, and
    (K/p)^(-1) * (tau/p) is a non-residue mod p.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"need an odd prime, got {p}")
    if _valuation(eq.K, p) != 1 or eq.tau % p or eq.M % p == 0:
        return None
    k_inv = pow(eq.K // p, -1, p)
    forced = (k_inv * (eq.tau // p)) % p
    if legendre_symbol(forced, p) != -1:
        return None
    return ObstructionCertificate(
        kind="non-residue",
        modulus=p * p,
        prime=p,
        detail=(("forced_residue", forced),),
    )


def auto_obstruct(eq: PellEquation, moduli=None) -> ObstructionCertificate | None:
    """First certificate found: residue sweeps in ascending modulus order,
    then the two lemma checks over small primes.

    The returned sweep certificate therefore carries the smallest
    obstructing modulus in the set.  None means no obstruction was found,
    which proves nothing about solvability.
    """
    for m in (DEFAULT_MODULI if moduli is None else sorted(set(moduli))):
        cert = residue_obstruction(eq, m)
        if cert is not None:
            return cert
    for p in LEMMA_PRIMES:
        cert = prime_power_obstruction(eq, p)
        if cert is not None:
            return cert
        if p != 2:
            cert = qnr_obstruction(eq, p)
            if cert is not None:
                return cert
    return None


def bounded_search(eq: PellEquation, bound: int = DEFAULT_SEARCH_BOUND) -> list[tuple[int, int]]:
    """All positive witnesses (x, y) with x, y <= bound, ascending in x."""
    if bound < 1:
        raise ValueError(f"need bound >= 1, got {bound}")
    hits = []
    for x in range(1, bound + 1):
        rem = eq.K * x * x - eq.tau
        if rem < eq.M:
            continue
        q, r = divmod(rem, eq.M)
        if r:
            continue
        y = isqrt(q)
        if y * y == q and 1 <= y <= bound:
            hits.append((x, y))
    return hits


@dataclass(frozen=True)
class PellVerdict:
    """Classification outcome: obstructed / solvable / unknown.

    "unknown" (no certificate, no witness within the search bound) is a
    first-class result and is never conflated with "no solution":
    congruence obstructions are incomplete in general.
    """

    status: str
    certificate: ObstructionCertificate | None = None
    witnesses: tuple[tuple[int, int], ...] = ()
    search_bound: int | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {"status": self.status}
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json_dict()
        if self.status == "solvable":
            doc["witnesses"] = [[str(x), str(y)] for x, y in self.witnesses]
        if self.search_bound is not None:
            doc["search_bound"] = self.search_bound
        return doc


def classify_equation(
    eq: PellEquation,
    moduli=None,
    bound: int = DEFAULT_SEARCH_BOUND,
) -> PellVerdict:
    """Obstruction certificates first, then bounded witness search."""
    cert = auto_obstruct(eq, moduli)
    if cert is not None:
        return PellVerdict(status="obstructed", certificate=cert)
    witnesses = bounded_search(eq, bound)
    if witnesses:
        return PellVerdict(status="solvable", witnesses=tuple(witnesses), search_bound=bound)
    return PellVerdict(status="unknown", search_bound=bound)


@dataclass(frozen=True)
class FundamentalUnit:
    """Minimal positive solution of x^2 - D*y^2 = 1 for non-square D."""

    D: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != 1:
            raise ValueError(f"({self.x}, {self.y}) does not solve x^2 - {self.D}*y^2 = 1")


def sqrt_cf_terms(D: int) -> tuple[int, list[int]]:
    """Continued fraction of sqrt(D) as (a0, one full period)."""
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise ValueError(f"{D} is a perfect square")
    period = []
    m, d, a = 0, 1, a0
    # the expansion is periodic and the period ends when a == 2*a0
    while a != 2 * a0:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        period.append(a)
    return a0, period


def fundamental_solution(D: int) -> FundamentalUnit:
    """Fundamental unit via convergents of the sqrt(D) continued fraction.

    Convergent recurrences run in exact integers; the first convergent
    (h, k) with h^2 - D*k^2 == 1 is the minimal positive solution (it
    appears at the end of the first period, or the second when the period
    length is odd).  The loop condition doubles as the substitution check.
    """
    if D < 2:
        raise ValueError(f"need D >= 2, got {D}")
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise ValueError(f"{D} is a perfect square")
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while h * h - D * k * k != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return FundamentalUnit(D, h, k)


def unit_power(fund: FundamentalUnit, i: int) -> tuple[int, int]:
    """Coefficients of (x1 + y1*sqrt(D))^i, exact.

    Uses the recurrence (x', y') = (x1*x + D*y1*y, x1*y + y1*x); the
    result satisfies x^2 - D*y^2 = 1 for every i >= 1.
    """
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    x, y = fund.x, fund.y
    for _ in range(i - 1):
        x, y = fund.x * x + fund.D * fund.y * y, fund.x * y + fund.y * x
    return x, y
